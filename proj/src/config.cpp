#include "cwkb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cwkb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

void require_keys(const json& j, const std::string& where, const std::set<std::string>& known) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown config field '" +
                              (where.empty() ? it.key() : where + "." + it.key()) + "'");
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

Vec2 get_vec2(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) fail(field, "expected an array of two numbers");
    return Vec2{get_number(j[0], field + "[0]"), get_number(j[1], field + "[1]")};
}

PolynomialHamiltonian parse_hamiltonian(const json& j) {
    if (!j.is_array() || j.empty())
        fail("hamiltonian", "expected a non-empty array of monomials {dp, dq, c}");
    std::vector<Monomial> terms;
    int idx = 0;
    for (const auto& term : j) {
        const std::string where = "hamiltonian[" + std::to_string(idx++) + "]";
        if (!term.is_object()) fail(where, "expected an object {dp, dq, c}");
        require_keys(term, where, {"dp", "dq", "c"});
        if (!term.contains("dp") || !term.contains("dq") || !term.contains("c"))
            fail(where, "requires dp, dq and c");
        Monomial m;
        m.dp = get_int(term["dp"], where + ".dp");
        m.dq = get_int(term["dq"], where + ".dq");
        m.c = get_number(term["c"], where + ".c");
        if (m.dp < 0 || m.dq < 0) fail(where, "degrees must be non-negative");
        terms.push_back(m);
    }
    return PolynomialHamiltonian(std::move(terms));
}

LindbladCoupling parse_coupling(const json& j) {
    if (!j.is_object()) fail("coupling", "expected an object {l_re, l_im}");
    require_keys(j, "coupling", {"l_re", "l_im"});
    LindbladCoupling L;
    if (j.contains("l_re")) L.l_re = get_vec2(j["l_re"], "coupling.l_re");
    if (j.contains("l_im")) L.l_im = get_vec2(j["l_im"], "coupling.l_im");
    return L;
}

StateModel parse_state(const json& j) {
    if (!j.is_object()) fail("state", "expected an object with a 'type'");
    if (!j.contains("type") || !j["type"].is_string()) fail("state.type", "expected a string");
    const std::string type = j["type"].get<std::string>();

    StateModel s;
    if (type == "gaussian") {
        require_keys(j, "state", {"type", "P", "Q"});
        if (!j.contains("P") || !j.contains("Q")) fail("state", "gaussian requires P and Q");
        s.type = StateModel::Type::gaussian;
        s.X = Vec2{get_number(j["P"], "state.P"), get_number(j["Q"], "state.Q")};
    } else if (type == "plane_wave") {
        require_keys(j, "state", {"type", "p", "q"});
        if (!j.contains("p") || !j.contains("q")) fail("state", "plane_wave requires p and q");
        s.type = StateModel::Type::plane_wave;
        s.X = Vec2{get_number(j["p"], "state.p"), get_number(j["q"], "state.q")};
    } else if (type == "cat") {
        require_keys(j, "state", {"type", "P", "Q", "dP", "dQ", "term"});
        for (const char* k : {"P", "Q", "dP", "dQ"})
            if (!j.contains(k)) fail("state", std::string("cat requires ") + k);
        s.type = StateModel::Type::cat;
        s.cp = CatParams{get_number(j["P"], "state.P"), get_number(j["Q"], "state.Q"),
                         get_number(j["dP"], "state.dP"), get_number(j["dQ"], "state.dQ")};
        s.term = CatTerm::full;
        if (j.contains("term")) {
            if (!j["term"].is_string()) fail("state.term", "expected a string");
            const std::string term = j["term"].get<std::string>();
            if (term == "aa") s.term = CatTerm::aa;
            else if (term == "bb") s.term = CatTerm::bb;
            else if (term == "ab") s.term = CatTerm::ab;
            else if (term == "ba") s.term = CatTerm::ba;
            else if (term == "full") s.term = CatTerm::full;
            else fail("state.term", "expected one of aa, bb, ab, ba, full");
        }
    } else {
        fail("state.type", "expected one of gaussian, cat, plane_wave");
    }
    return s;
}

GridSpec parse_grid(const json& j) {
    if (!j.is_object()) fail("grid", "expected an object");
    require_keys(j, "grid", {"extent", "resolution"});
    GridSpec g;
    if (j.contains("extent")) {
        const auto& e = j["extent"];
        if (e.is_number()) {
            const double v = get_number(e, "grid.extent");
            g.extent_p = v;
            g.extent_q = v;
        } else if (e.is_array() && e.size() == 2) {
            g.extent_p = get_number(e[0], "grid.extent[0]");
            g.extent_q = get_number(e[1], "grid.extent[1]");
        } else {
            fail("grid.extent", "expected a number or an array of two numbers");
        }
        if (*g.extent_p <= 0.0 || *g.extent_q <= 0.0) fail("grid.extent", "must be positive");
    }
    if (j.contains("resolution")) {
        const auto& r = j["resolution"];
        if (r.is_number_integer()) {
            g.n_p = g.n_q = get_int(r, "grid.resolution");
        } else if (r.is_array() && r.size() == 2) {
            g.n_p = get_int(r[0], "grid.resolution[0]");
            g.n_q = get_int(r[1], "grid.resolution[1]");
        } else {
            fail("grid.resolution", "expected an integer or an array of two integers");
        }
        if (g.n_p < 2 || g.n_q < 2) fail("grid.resolution", "must be at least 2 per axis");
    }
    return g;
}

std::vector<double> parse_times(const json& j) {
    std::vector<double> times;
    if (j.is_number()) {
        times.push_back(get_number(j, "times"));
    } else if (j.is_array() && !j.empty()) {
        int idx = 0;
        for (const auto& v : j)
            times.push_back(get_number(v, "times[" + std::to_string(idx++) + "]"));
    } else {
        fail("times", "expected a number or a non-empty array of numbers");
    }
    for (double t : times)
        if (t < 0.0) fail("times", "must be non-negative");
    return times;
}

ScalingSpec parse_scaling(const json& j) {
    if (!j.is_object()) fail("scaling", "expected an object");
    require_keys(j, "scaling", {"x_star", "y", "t_list", "l_list", "t_ref", "l_ref"});
    ScalingSpec s;
    if (j.contains("x_star")) s.x_star = get_vec2(j["x_star"], "scaling.x_star");
    if (j.contains("y")) s.y = get_vec2(j["y"], "scaling.y");
    if (j.contains("t_ref")) s.t_ref = get_number(j["t_ref"], "scaling.t_ref");
    if (j.contains("l_ref")) s.l_ref = get_number(j["l_ref"], "scaling.l_ref");
    auto list = [&](const char* key) {
        std::vector<double> out;
        int idx = 0;
        for (const auto& v : j[key]) {
            const double x =
                get_number(v, std::string("scaling.") + key + "[" + std::to_string(idx++) + "]");
            if (x <= 0.0) fail(std::string("scaling.") + key, "entries must be positive");
            out.push_back(x);
        }
        return out;
    };
    if (j.contains("t_list")) {
        if (!j["t_list"].is_array()) fail("scaling.t_list", "expected an array");
        s.t_list = list("t_list");
    }
    if (j.contains("l_list")) {
        if (!j["l_list"].is_array()) fail("scaling.l_list", "expected an array");
        s.l_list = list("l_list");
    }
    return s;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("configuration is not valid JSON");
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    require_keys(j, "", {"hbar", "hamiltonian", "coupling", "state", "method", "times", "grid",
                         "output", "scaling", "threads"});

    RunConfig cfg;
    if (!j.contains("hbar")) throw ConfigError("config field 'hbar' is required");
    cfg.hbar = get_number(j["hbar"], "hbar");
    if (cfg.hbar <= 0.0) fail("hbar", "must be positive");

    if (!j.contains("hamiltonian")) throw ConfigError("config field 'hamiltonian' is required");
    cfg.hamiltonian = parse_hamiltonian(j["hamiltonian"]);

    if (j.contains("coupling")) cfg.coupling = parse_coupling(j["coupling"]);

    if (!j.contains("state")) throw ConfigError("config field 'state' is required");
    cfg.state = parse_state(j["state"]);

    if (j.contains("method")) {
        if (!j["method"].is_string()) fail("method", "expected a string");
        cfg.method = j["method"].get<std::string>();
    }
    if (j.contains("times")) cfg.times = parse_times(j["times"]);
    if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (!o.is_object()) fail("output", "expected an object");
        require_keys(o, "output", {"path", "format"});
        if (o.contains("path")) {
            if (!o["path"].is_string()) fail("output.path", "expected a string");
            cfg.output.path = o["path"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string()) fail("output.format", "expected a string");
            cfg.output.format = o["format"].get<std::string>();
        }
    }
    if (j.contains("scaling")) cfg.scaling = parse_scaling(j["scaling"]);
    if (j.contains("threads")) {
        cfg.threads = get_int(j["threads"], "threads");
        if (cfg.threads < 0) fail("threads", "must be >= 0");
    }

    if (cfg.output.format != "csv" && cfg.output.format != "json")
        fail("output.format", "expected csv or json");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_json(buf.str());
}

bool cubic_method_parameters(const RunConfig& cfg, double& c_out, double& l_out) {
    if (cfg.method != "exact_cubic" && cfg.method != "saddle_cubic" &&
        cfg.method != "quadrature_cubic")
        return false;
    if (!cfg.hamiltonian.pure_p_cubed(c_out))
        throw ConfigError("method '" + cfg.method + "' requires a Hamiltonian of the form c * p^3");
    const LindbladCoupling& L = cfg.coupling;
    if (L.l_im.p != 0.0 || L.l_im.q != 0.0)
        throw ConfigError("method '" + cfg.method + "' requires a real coupling (l_im = 0)");
    if (L.l_re.q != 0.0)
        throw ConfigError("method '" + cfg.method +
                          "' requires a momentum coupling (l_re proportional to (1, 0))");
    l_out = L.l_re.p;
    return true;
}

void validate_method(const RunConfig& cfg) {
    static const std::set<std::string> methods{"complex_wkb",     "real_wkb",
                                               "mixed_propagator", "exact_quadratic",
                                               "exact_cubic",      "saddle_cubic",
                                               "quadrature_cubic"};
    if (cfg.method.empty())
        throw ConfigError("no method selected: set 'method' in the config or pass --method");
    if (!methods.count(cfg.method)) {
        std::string all;
        for (const auto& m : methods) all += (all.empty() ? "" : ", ") + m;
        throw ConfigError("unknown method '" + cfg.method + "' (expected one of " + all + ")");
    }

    const bool is_plane = cfg.state.type == StateModel::Type::plane_wave;
    if (cfg.method == "exact_quadratic") {
        if (!cfg.hamiltonian.is_pure_quadratic())
            throw ConfigError(
                "method 'exact_quadratic' requires a purely quadratic Hamiltonian (degree-2 terms only)");
    } else if (cfg.method == "real_wkb" || cfg.method == "mixed_propagator") {
        if (!is_plane)
            throw ConfigError("method '" + cfg.method + "' requires a plane_wave state");
    } else if (cfg.method == "saddle_cubic") {
        double c, l;
        cubic_method_parameters(cfg, c, l);
        if (is_plane)
            throw ConfigError(
                "method 'saddle_cubic' requires a gaussian or cat state; use exact_cubic or "
                "quadrature_cubic for plane_wave");
    } else {
        double c, l;
        cubic_method_parameters(cfg, c, l);  // validates shape for the cubic family
    }
}

std::string metadata_json(const RunConfig& cfg) {
    json md;
    md["hbar"] = cfg.hbar;
    json terms = json::array();
    for (const auto& m : cfg.hamiltonian.terms())
        terms.push_back({{"dp", m.dp}, {"dq", m.dq}, {"c", m.c}});
    md["hamiltonian"] = std::move(terms);
    md["coupling"] = {{"l_re", {cfg.coupling.l_re.p, cfg.coupling.l_re.q}},
                      {"l_im", {cfg.coupling.l_im.p, cfg.coupling.l_im.q}}};
    json st;
    switch (cfg.state.type) {
        case StateModel::Type::gaussian:
            st = {{"type", "gaussian"}, {"P", cfg.state.X.p}, {"Q", cfg.state.X.q}};
            break;
        case StateModel::Type::plane_wave:
            st = {{"type", "plane_wave"}, {"p", cfg.state.X.p}, {"q", cfg.state.X.q}};
            break;
        default: {
            const char* term = "full";
            switch (cfg.state.term) {
                case CatTerm::aa: term = "aa"; break;
                case CatTerm::bb: term = "bb"; break;
                case CatTerm::ab: term = "ab"; break;
                case CatTerm::ba: term = "ba"; break;
                default: break;
            }
            st = {{"type", "cat"},   {"P", cfg.state.cp.P},   {"Q", cfg.state.cp.Q},
                  {"dP", cfg.state.cp.dP}, {"dQ", cfg.state.cp.dQ}, {"term", term}};
            break;
        }
    }
    md["state"] = std::move(st);
    md["method"] = cfg.method;
    return md.dump();
}

}  // namespace cwkb
