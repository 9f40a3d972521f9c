#include "cwkb/grids.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "cwkb/errors.hpp"
#include "json.hpp"

namespace cwkb {

std::vector<double> make_axis(double min, double max, int n) {
    if (n < 2) throw ConfigError("axis needs at least two samples");
    if (!(max > min)) throw ConfigError("axis maximum must exceed minimum");
    std::vector<double> axis(n);
    const double step = (max - min) / (n - 1);
    for (int i = 0; i < n; ++i) axis[i] = min + step * i;
    axis.back() = max;
    return axis;
}

void validate_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) throw ConfigError(std::string(name) + ": axis needs at least two samples");
    const double step = (axis.back() - axis.front()) / double(axis.size() - 1);
    if (!(step > 0.0)) throw ConfigError(std::string(name) + ": axis must be increasing");
    for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
        const double d = axis[i + 1] - axis[i];
        if (std::abs(d - step) > 1e-9 * (1.0 + std::abs(step)))
            throw ConfigError(std::string(name) + ": axis must be uniformly spaced");
    }
}

void ChordGrid::validate() const {
    validate_axis(yp_axis, "y_p");
    validate_axis(yq_axis, "y_q");
    if (samples.size() != yp_axis.size() * yq_axis.size())
        throw ConfigError("chord grid sample count does not match axes");
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
}

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

/* Dual centred axis: n values with step 2 pi hbar / (n * src_step). */
std::vector<double> dual_axis(const std::vector<double>& src, double hbar) {
    const int n = (int)src.size();
    const double src_step = (src.back() - src.front()) / double(n - 1);
    const double step = 2.0 * M_PI * hbar / (n * src_step);
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i) axis[i] = (i - n / 2) * step;
    return axis;
}

}  // namespace

WignerGrid chord_to_wigner(const ChordGrid& grid) {
    grid.validate();
    const int np = (int)grid.np(), nq = (int)grid.nq();
    const double hbar = grid.hbar;

    // Support precondition: the state must have decayed on the boundary.
    double peak = 0.0, boundary = 0.0;
    for (int i = 0; i < np; ++i)
        for (int j = 0; j < nq; ++j) {
            const double a = std::abs(grid.at(i, j));
            peak = std::max(peak, a);
            if (i == 0 || i == np - 1 || j == 0 || j == nq - 1) boundary = std::max(boundary, a);
        }
    if (peak == 0.0) throw SupportError("chord grid is identically zero");
    if (boundary >= 1e-10 * peak) {
        std::ostringstream os;
        os << "chord grid is truncated: boundary magnitude " << boundary << " exceeds 1e-10 of peak "
           << peak << "; enlarge the grid extent";
        throw SupportError(os.str());
    }

    WignerGrid out;
    out.hbar = hbar;
    out.t = grid.t;
    out.p_axis = dual_axis(grid.yp_axis, hbar);
    out.q_axis = dual_axis(grid.yq_axis, hbar);

    const double dyp = grid.yp_step(), dyq = grid.yq_step();
    const double dxp = out.p_axis[1] - out.p_axis[0];
    const double dxq = out.q_axis[1] - out.q_axis[0];
    const double yp0 = grid.yp_axis.front(), yq0 = grid.yq_axis.front();
    const double xp0 = out.p_axis.front(), xq0 = out.q_axis.front();

    /* W_kl = (2 pi hbar)^{-2} dyp dyq e^{i k dxp yp0 / hbar} e^{i l dxq yq0 / hbar}
              * sum_{jm} [ chi_jm e^{i xp0 yp_j / hbar} e^{i xq0 yq_m / hbar} ]
                e^{2 pi i (kj/np + lm/nq)}  (FFTW backward kernel) */
    std::vector<complexd> buf((std::size_t)np * nq);
    for (int j = 0; j < np; ++j) {
        const complexd fp = std::exp(complexd{0.0, xp0 * grid.yp_axis[j] / hbar});
        for (int m = 0; m < nq; ++m) {
            const complexd fq = std::exp(complexd{0.0, xq0 * grid.yq_axis[m] / hbar});
            buf[(std::size_t)j * nq + m] = grid.at(j, m) * fp * fq;
        }
    }

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan =
            fftw_plan_dft_2d(np, nq, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    out.samples.resize((std::size_t)np * nq);
    const double scale = dyp * dyq / (4.0 * M_PI * M_PI * hbar * hbar);
    double max_im = 0.0;
    for (int k = 0; k < np; ++k) {
        const complexd gp = std::exp(complexd{0.0, k * dxp * yp0 / hbar});
        for (int l = 0; l < nq; ++l) {
            const complexd gq = std::exp(complexd{0.0, l * dxq * yq0 / hbar});
            const complexd w = scale * gp * gq * buf[(std::size_t)k * nq + l];
            out.at(k, l) = w.real();
            max_im = std::max(max_im, std::abs(w.imag()));
        }
    }
    out.residual_imag = max_im;
    return out;
}

ChordGrid wigner_to_chord(const WignerGrid& grid) {
    validate_axis(grid.p_axis, "p");
    validate_axis(grid.q_axis, "q");
    const int np = (int)grid.np(), nq = (int)grid.nq();
    const double hbar = grid.hbar;
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");

    ChordGrid out;
    out.hbar = hbar;
    out.t = grid.t;
    out.yp_axis = dual_axis(grid.p_axis, hbar);
    out.yq_axis = dual_axis(grid.q_axis, hbar);

    const double dxp = grid.p_axis[1] - grid.p_axis[0];
    const double dxq = grid.q_axis[1] - grid.q_axis[0];
    const double xp0 = grid.p_axis.front(), xq0 = grid.q_axis.front();
    const double yp0 = out.yp_axis.front(), yq0 = out.yq_axis.front();

    std::vector<complexd> buf((std::size_t)np * nq);
    for (int k = 0; k < np; ++k) {
        const complexd fp = std::exp(complexd{0.0, -grid.p_axis[k] * yp0 / hbar});
        for (int l = 0; l < nq; ++l) {
            const complexd fq = std::exp(complexd{0.0, -grid.q_axis[l] * yq0 / hbar});
            buf[(std::size_t)k * nq + l] = grid.at(k, l) * fp * fq;
        }
    }

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_plan plan =
            fftw_plan_dft_2d(np, nq, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    out.samples.resize((std::size_t)np * nq);
    for (int j = 0; j < np; ++j) {
        const complexd gp = std::exp(complexd{0.0, -xp0 * (out.yp_axis[j] - yp0) / hbar});
        for (int m = 0; m < nq; ++m) {
            const complexd gq = std::exp(complexd{0.0, -xq0 * (out.yq_axis[m] - yq0) / hbar});
            out.at(j, m) = dxp * dxq * gp * gq * buf[(std::size_t)j * nq + m];
        }
    }
    return out;
}

double purity(const ChordGrid& grid) {
    grid.validate();
    double s = 0.0;
    for (const complexd& v : grid.samples) s += std::norm(v);
    return s * grid.yp_step() * grid.yq_step() / (2.0 * M_PI * grid.hbar);
}

namespace {

double wrap_phase(double re, double im) {
    double ph = std::atan2(im, re);
    if (ph == -M_PI) ph = M_PI;
    return ph;
}

nlohmann::json axis_json(const std::vector<double>& axis) {
    nlohmann::json a = nlohmann::json::array();
    for (double v : axis) a.push_back(v);
    return a;
}

nlohmann::json parse_metadata(const std::string& metadata_json) {
    nlohmann::json md = nlohmann::json::parse(metadata_json, nullptr, false);
    if (md.is_discarded() || !md.is_object())
        throw ConfigError("grid metadata must be a JSON object");
    return md;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    return os;
}

}  // namespace

void write_grid(const ChordGrid& grid, const std::string& path, const std::string& format,
                const std::string& metadata_json) {
    grid.validate();
    if (format == "csv") {
        std::ofstream os = open_out(path);
        os << "y_p,y_q,t,re,im,abs,phase\n";
        char line[256];
        for (std::size_t i = 0; i < grid.np(); ++i) {
            for (std::size_t j = 0; j < grid.nq(); ++j) {
                const complexd v = grid.at(i, j);
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                              grid.yp_axis[i], grid.yq_axis[j], grid.t, v.real(), v.imag(),
                              std::abs(v), wrap_phase(v.real(), v.imag()));
                os << line;
            }
        }
    } else if (format == "json") {
        nlohmann::json j;
        j["kind"] = "chord_grid";
        j["t"] = grid.t;
        j["hbar"] = grid.hbar;
        j["axes"]["y_p"] = axis_json(grid.yp_axis);
        j["axes"]["y_q"] = axis_json(grid.yq_axis);
        nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
        for (std::size_t i = 0; i < grid.np(); ++i) {
            nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
            for (std::size_t k = 0; k < grid.nq(); ++k) {
                rrow.push_back(grid.at(i, k).real());
                irow.push_back(grid.at(i, k).imag());
            }
            re.push_back(std::move(rrow));
            im.push_back(std::move(irow));
        }
        j["samples"]["re"] = std::move(re);
        j["samples"]["im"] = std::move(im);
        j["metadata"] = parse_metadata(metadata_json);
        std::ofstream os = open_out(path);
        os << j.dump(2) << "\n";
    } else {
        throw ConfigError("unknown output format '" + format + "' (expected csv or json)");
    }
}

void write_grid(const WignerGrid& grid, const std::string& path, const std::string& format,
                const std::string& metadata_json) {
    if (format == "csv") {
        std::ofstream os = open_out(path);
        os << "p,q,t,value\n";
        char line[160];
        for (std::size_t i = 0; i < grid.np(); ++i) {
            for (std::size_t j = 0; j < grid.nq(); ++j) {
                std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", grid.p_axis[i],
                              grid.q_axis[j], grid.t, grid.at(i, j));
                os << line;
            }
        }
    } else if (format == "json") {
        nlohmann::json j;
        j["kind"] = "wigner_grid";
        j["t"] = grid.t;
        j["hbar"] = grid.hbar;
        j["residual_imag"] = grid.residual_imag;
        j["axes"]["p"] = axis_json(grid.p_axis);
        j["axes"]["q"] = axis_json(grid.q_axis);
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < grid.np(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < grid.nq(); ++k) row.push_back(grid.at(i, k));
            rows.push_back(std::move(row));
        }
        j["samples"]["values"] = std::move(rows);
        j["metadata"] = parse_metadata(metadata_json);
        std::ofstream os = open_out(path);
        os << j.dump(2) << "\n";
    } else {
        throw ConfigError("unknown output format '" + format + "' (expected csv or json)");
    }
}

ChordGrid read_chord_grid_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open grid file: " + path);
    nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
    if (j.is_discarded()) throw ConfigError("grid file is not valid JSON: " + path);
    if (!j.contains("kind") || j["kind"] != "chord_grid")
        throw ConfigError("grid file is not a chord grid: " + path);

    ChordGrid g;
    g.t = j.at("t").get<double>();
    g.hbar = j.at("hbar").get<double>();
    g.yp_axis = j.at("axes").at("y_p").get<std::vector<double>>();
    g.yq_axis = j.at("axes").at("y_q").get<std::vector<double>>();
    const auto& re = j.at("samples").at("re");
    const auto& im = j.at("samples").at("im");
    if (re.size() != g.yp_axis.size() || im.size() != g.yp_axis.size())
        throw ConfigError("grid file sample rows do not match the y_p axis");
    g.samples.resize(g.yp_axis.size() * g.yq_axis.size());
    for (std::size_t i = 0; i < g.yp_axis.size(); ++i) {
        const auto& rrow = re[i];
        const auto& irow = im[i];
        if (rrow.size() != g.yq_axis.size() || irow.size() != g.yq_axis.size())
            throw ConfigError("grid file sample columns do not match the y_q axis");
        for (std::size_t k = 0; k < g.yq_axis.size(); ++k)
            g.at(i, k) = complexd{rrow[k].get<double>(), irow[k].get<double>()};
    }
    g.validate();
    return g;
}

}  // namespace cwkb
