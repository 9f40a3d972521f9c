// chordwkb: propagate chord (characteristic) functions of open quantum
// systems and cross-check the trajectory methods against closed forms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwkb/evaluate.hpp"
#include "cwkb/grids.hpp"
#include "cwkb/real_wkb.hpp"
#include "cwkb/threading.hpp"

namespace {

using namespace cwkb;

std::vector<double> parse_times_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw ConfigError("--times entry '" + item + "' is not a number");
        }
        if (pos != item.size()) throw ConfigError("--times entry '" + item + "' is not a number");
        if (v < 0.0) throw ConfigError("--times entries must be non-negative");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--times requires at least one value");
    return out;
}

std::string strip_known_extension(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        const std::size_t n = std::string(ext).size();
        if (path.size() > n && path.compare(path.size() - n, n, ext) == 0)
            return path.substr(0, path.size() - n);
    }
    return path;
}

std::string grid_path(const std::string& base, std::size_t t_index, bool wigner,
                      const std::string& format) {
    std::ostringstream os;
    os << base << "_t" << t_index;
    if (wigner) os << "_wigner";
    os << "." << format;
    return os.str();
}

struct CommonFlags {
    std::string config_path;
    std::string method;
    std::string times;
    std::string out;
    std::string format;
    int threads = -1;  // -1: keep config value
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_method) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file")->required();
    if (with_method)
        cmd->add_option("--method", flags.method,
                        "override the configured evaluation method");
    cmd->add_option("--times", flags.times, "comma-separated evaluation times, e.g. 0.1,0.5,1.0");
    cmd->add_option("--out", flags.out, "output path base (extension selects are stripped)");
    cmd->add_option("--format", flags.format, "output format: csv or json");
    cmd->add_option("--threads", flags.threads,
                    "worker threads (0 = auto via CHORDWKB_THREADS or hardware)");
}

RunConfig load_config(const CommonFlags& flags) {
    RunConfig cfg = parse_config_file(flags.config_path);
    if (!flags.method.empty()) cfg.method = flags.method;
    if (!flags.times.empty()) cfg.times = parse_times_list(flags.times);
    if (!flags.out.empty()) cfg.output.path = flags.out;
    if (!flags.format.empty()) cfg.output.format = flags.format;
    if (flags.threads >= 0) cfg.threads = flags.threads;
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw ConfigError("--format must be csv or json");
    return cfg;
}

int cmd_evolve(const CommonFlags& flags, bool wigner) {
    RunConfig cfg = load_config(flags);
    validate_method(cfg);
    const std::string base = strip_known_extension(cfg.output.path);
    const std::string meta = metadata_json(cfg);
    const auto eval = make_chord_evaluator(cfg);

    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
        const double t = cfg.times[i];
        const ChordGrid grid = evaluate_grid(cfg, t);
        const std::string path = grid_path(base, i, false, cfg.output.format);
        write_grid(grid, path, cfg.output.format, meta);

        const complexd trace = eval(Vec2{0.0, 0.0}, t);
        char line[256];
        std::snprintf(line, sizeof line,
                      "t=%.17g file=%s trace_re=%.17g trace_im=%.17g purity=%.17g\n", t,
                      path.c_str(), trace.real(), trace.imag(), purity(grid));
        std::cout << line;

        if (wigner) {
            const WignerGrid w = chord_to_wigner(grid);
            const std::string wpath = grid_path(base, i, true, cfg.output.format);
            write_grid(w, wpath, cfg.output.format, meta);
            std::snprintf(line, sizeof line, "t=%.17g file=%s residual_imag=%.17g\n", t,
                          wpath.c_str(), w.residual_imag);
            std::cout << line;
        }
    }
    return 0;
}

double percentile95(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t idx =
        std::min(v.size() - 1, (std::size_t)std::ceil(0.95 * v.size()) - (std::size_t)1);
    return v[idx];
}

int cmd_compare(const CommonFlags& flags, const std::string& method_a,
                const std::string& method_b) {
    RunConfig cfg = load_config(flags);

    RunConfig cfg_a = cfg;
    cfg_a.method = method_a;
    RunConfig cfg_b = cfg;
    cfg_b.method = method_b;
    validate_method(cfg_a);
    validate_method(cfg_b);

    const std::string path = strip_known_extension(cfg.output.path) + ".csv";
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << "y_p,y_q,t,re_a,im_a,re_b,im_b,abs_diff,rel_diff,phase_diff\n";

    char line[400];
    for (double t : cfg.times) {
        const ChordGrid ga = evaluate_grid(cfg_a, t);
        const ChordGrid gb = evaluate_grid(cfg_b, t);

        std::vector<double> abs_diffs, rel_diffs, phase_diffs;
        abs_diffs.reserve(ga.samples.size());
        for (std::size_t ip = 0; ip < ga.np(); ++ip) {
            for (std::size_t iq = 0; iq < ga.nq(); ++iq) {
                const complexd a = ga.at(ip, iq), b = gb.at(ip, iq);
                const double ad = std::abs(a - b);
                const double bmag = std::abs(b);
                double rd;
                if (bmag > 0.0) rd = ad / bmag;
                else rd = (std::abs(a) > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
                const double pd =
                    (std::abs(a) > 0.0 && bmag > 0.0) ? std::arg(a * std::conj(b)) : 0.0;
                abs_diffs.push_back(ad);
                rel_diffs.push_back(rd);
                phase_diffs.push_back(std::abs(pd));
                std::snprintf(line, sizeof line,
                              "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              ga.yp_axis[ip], ga.yq_axis[iq], t, a.real(), a.imag(), b.real(),
                              b.imag(), ad, rd, pd);
                os << line;
            }
        }

        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return v.empty() ? 0.0 : s / v.size();
        };
        auto peak = [](const std::vector<double>& v) {
            double m = 0.0;
            for (double x : v) m = std::max(m, x);
            return m;
        };
        std::snprintf(line, sizeof line,
                      "summary t=%.17g max_abs=%.17g mean_abs=%.17g p95_abs=%.17g max_rel=%.17g "
                      "mean_rel=%.17g p95_rel=%.17g max_phase=%.17g\n",
                      t, peak(abs_diffs), mean(abs_diffs), percentile95(abs_diffs),
                      peak(rel_diffs), mean(rel_diffs), percentile95(rel_diffs),
                      peak(phase_diffs));
        std::cout << line;
        os << "# " << line;
    }
    std::cout << "table " << path << "\n";
    return 0;
}

int cmd_scaling(const CommonFlags& flags, const std::string& preset) {
    ScalingProbeSetup setup;
    std::string out_path = "scaling";

    if (!preset.empty()) {
        if (preset == "quartic") setup = quartic_scaling_preset();
        else if (preset == "cubic") setup = cubic_scaling_preset();
        else throw ConfigError("--preset must be quartic or cubic");
        if (!flags.out.empty()) out_path = strip_known_extension(flags.out);
    } else {
        RunConfig cfg = load_config(flags);
        setup = quartic_scaling_preset();
        setup.hamiltonian = cfg.hamiltonian;
        setup.hbar = cfg.hbar;
        const Vec2 lre = cfg.coupling.l_re;
        const double mag = std::sqrt(dot(lre, lre));
        if (mag > 0.0) setup.coupling_direction = Vec2{lre.p / mag, lre.q / mag};
        if (cfg.scaling.x_star) setup.s0 = InitialAction::plane_wave(*cfg.scaling.x_star);
        if (cfg.scaling.y) setup.y = *cfg.scaling.y;
        if (!cfg.scaling.t_list.empty()) setup.t_list = cfg.scaling.t_list;
        if (!cfg.scaling.l_list.empty()) setup.l_list = cfg.scaling.l_list;
        if (cfg.scaling.t_ref) setup.t_ref = *cfg.scaling.t_ref;
        if (cfg.scaling.l_ref) setup.l_ref = *cfg.scaling.l_ref;
        out_path = strip_known_extension(cfg.output.path);
    }

    const ScalingReport rep = scaling_probe(setup);

    const std::string path = out_path + ".csv";
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << "sweep,t,l,re_dP,im_dP,abs_dP,deco\n";
    char line[320];
    for (const auto& r : rep.t_rows) {
        std::snprintf(line, sizeof line, "t,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.l,
                      r.dP.real(), r.dP.imag(), std::abs(r.dP), r.deco);
        os << line;
    }
    for (const auto& r : rep.l_rows) {
        std::snprintf(line, sizeof line, "l,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.l,
                      r.dP.real(), r.dP.imag(), std::abs(r.dP), r.deco);
        os << line;
    }

    auto print_fit = [&](const char* name, double slope, double residual, bool degenerate) {
        if (degenerate)
            std::snprintf(line, sizeof line,
                          "%s_exponent=undefined (all |dP| below %.1e; no power law to fit)\n",
                          name, rep.degeneracy_floor);
        else
            std::snprintf(line, sizeof line, "%s_exponent=%.6f residual=%.3e\n", name, slope,
                          residual);
        std::cout << line;
    };
    print_fit("t", rep.t_exponent, rep.t_fit_residual, rep.t_degenerate);
    print_fit("l", rep.l_exponent, rep.l_fit_residual, rep.l_degenerate);
    print_fit("deco", rep.deco_exponent, rep.deco_fit_residual, false);
    std::snprintf(line, sizeof line, "hessian_contraction=%.6e\n", rep.estimate_contraction);
    std::cout << line;
    std::cout << "table " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chord-representation propagation of open quantum systems"};
    app.require_subcommand(1);

    CommonFlags evolve_flags, compare_flags, scaling_flags;
    bool wigner = false;
    std::string method_a, method_b, preset;

    CLI::App* evolve = app.add_subcommand("evolve", "evaluate chord grids at the configured times");
    add_common(evolve, evolve_flags, true);
    evolve->add_flag("--wigner", wigner, "also write the Wigner transform of each grid");

    CLI::App* compare =
        app.add_subcommand("compare", "evaluate two methods on the same grid and difference them");
    add_common(compare, compare_flags, false);
    compare->add_option("--method-a", method_a, "first method")->required();
    compare->add_option("--method-b", method_b, "second (reference) method")->required();

    CLI::App* scaling =
        app.add_subcommand("scaling", "sweep the phase defect of the real-trajectory method");
    scaling->add_option("--config", scaling_flags.config_path, "JSON configuration file");
    scaling->add_option("--preset", preset, "built-in sweep: quartic or cubic");
    scaling->add_option("--out", scaling_flags.out, "output path base");
    scaling->add_option("--threads", scaling_flags.threads, "worker threads (unused; sweeps are serial)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (evolve->parsed()) return cmd_evolve(evolve_flags, wigner);
        if (compare->parsed()) return cmd_compare(compare_flags, method_a, method_b);
        if (scaling->parsed()) {
            if (preset.empty() && scaling_flags.config_path.empty())
                throw ConfigError("scaling requires --config or --preset");
            return cmd_scaling(scaling_flags, preset);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
