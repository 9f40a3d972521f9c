#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cwkb/geometry.hpp"
#include "cwkb/hamiltonian.hpp"
#include "cwkb/states.hpp"

namespace cwkb {

struct GridSpec {
    /* Extents default to 8 sqrt(hbar) per axis when unset. */
    std::optional<double> extent_p;
    std::optional<double> extent_q;
    int n_p{128};
    int n_q{128};

    double resolved_extent_p(double hbar) const {
        return extent_p ? *extent_p : 8.0 * std::sqrt(hbar);
    }
    double resolved_extent_q(double hbar) const {
        return extent_q ? *extent_q : 8.0 * std::sqrt(hbar);
    }
};

struct OutputSpec {
    std::string path{"out"};
    std::string format{"csv"};
};

/* Optional overrides for the scaling sweep. */
struct ScalingSpec {
    std::optional<Vec2> x_star;
    std::optional<Vec2> y;
    std::vector<double> t_list;
    std::vector<double> l_list;
    std::optional<double> t_ref;
    std::optional<double> l_ref;
};

struct RunConfig {
    double hbar{1.0};
    PolynomialHamiltonian hamiltonian;
    LindbladCoupling coupling;
    StateModel state;
    std::string method;
    std::vector<double> times{0.0};
    GridSpec grid;
    OutputSpec output;
    ScalingSpec scaling;
    int threads{0};
};

/* Parse and structurally validate a configuration. Unknown or ill-typed
   fields raise ConfigError naming the offending field. */
RunConfig parse_config_json(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/* Method/model compatibility checks shared by every command. */
void validate_method(const RunConfig& cfg);

/* True when the method belongs to the cubic family; c_out receives the p^3
   coefficient and l_out the coupling strength. */
bool cubic_method_parameters(const RunConfig& cfg, double& c_out, double& l_out);

/* Serialised metadata object describing the run (hbar, hamiltonian,
   coupling, state, method), embedded in JSON grid files. */
std::string metadata_json(const RunConfig& cfg);

}  // namespace cwkb
