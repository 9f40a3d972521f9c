#include "cwkb/evaluate.hpp"

#include <sstream>

#include "cwkb/complex_wkb.hpp"
#include "cwkb/oracles.hpp"
#include "cwkb/real_wkb.hpp"
#include "cwkb/threading.hpp"

namespace cwkb {

std::function<complexd(const Vec2&, double)> make_chord_evaluator(const RunConfig& cfg,
                                                                  const ShootingOptions& shoot) {
    validate_method(cfg);
    const DoubleHamiltonian dh(cfg.hamiltonian, cfg.coupling);
    const double hbar = cfg.hbar;
    const StateModel state = cfg.state;

    if (cfg.method == "complex_wkb") {
        const auto branches = state.branches();
        return [=](const Vec2& y, double t) {
            complexd acc{0.0};
            for (const auto& [action, weight] : branches)
                acc += weight * chord_wkb(dh, action, y, t, hbar, shoot).value;
            return acc;
        };
    }
    if (cfg.method == "real_wkb") {
        const InitialAction action = InitialAction::plane_wave(state.X);
        return [=](const Vec2& y, double t) {
            return chord_real_wkb(dh, action, y, t, hbar, shoot).value;
        };
    }
    if (cfg.method == "mixed_propagator") {
        const Vec2 anchor = state.X;
        return [=](const Vec2& y, double t) {
            return mixed_propagator(dh, anchor, y, t, hbar, shoot).value;
        };
    }
    if (cfg.method == "exact_quadratic") {
        const QuadraticModel model = QuadraticModel::from_hamiltonian(cfg.hamiltonian, cfg.coupling);
        return [=](const Vec2& y, double t) {
            return exact_quadratic_chord(
                model, [&](const Vec2& y0) { return state.chi0(y0, hbar); }, y, t, hbar);
        };
    }

    double c = 0.0, l = 0.0;
    cubic_method_parameters(cfg, c, l);

    if (cfg.method == "exact_cubic") {
        if (state.type == StateModel::Type::plane_wave) {
            const Vec2 anchor = state.X;
            return [=](const Vec2& y, double t) {
                return exact_cubic_mixed_propagator(anchor, l, y, t, hbar, c);
            };
        }
        const auto terms = state.term_list();
        return [=](const Vec2& y, double t) {
            complexd acc{0.0};
            for (const auto& [cp, weight] : terms)
                acc += weight * exact_cubic_cat_chord(cp, l, y, t, hbar, c);
            return acc;
        };
    }
    if (cfg.method == "saddle_cubic") {
        const auto terms = state.term_list();
        return [=](const Vec2& y, double t) {
            complexd acc{0.0};
            for (const auto& [cp, weight] : terms)
                acc += weight * cubic_saddle_point_chord(cp, l, y, t, hbar, c);
            return acc;
        };
    }
    // quadrature_cubic
    if (state.type == StateModel::Type::plane_wave) {
        const auto src = CubicQuadratureState::delta(state.X);
        return [=](const Vec2& y, double t) {
            return numeric_cubic_chord(src, l, y, t, hbar, c);
        };
    }
    const auto terms = state.term_list();
    return [=](const Vec2& y, double t) {
        complexd acc{0.0};
        for (const auto& [cp, weight] : terms)
            acc += weight * numeric_cubic_chord(CubicQuadratureState::cat_term(cp), l, y, t, hbar, c);
        return acc;
    };
}

ChordGrid evaluate_grid(const RunConfig& cfg, double t, const ShootingOptions& shoot) {
    const auto eval = make_chord_evaluator(cfg, shoot);

    ChordGrid grid;
    grid.hbar = cfg.hbar;
    grid.t = t;
    const double ep = cfg.grid.resolved_extent_p(cfg.hbar);
    const double eq = cfg.grid.resolved_extent_q(cfg.hbar);
    grid.yp_axis = make_axis(-ep, ep, cfg.grid.n_p);
    grid.yq_axis = make_axis(-eq, eq, cfg.grid.n_q);
    grid.samples.assign(grid.np() * grid.nq(), complexd{0.0});

    const std::size_t nq = grid.nq();
    parallel_for(grid.samples.size(), cfg.threads, [&](std::size_t idx) {
        const Vec2 y{grid.yp_axis[idx / nq], grid.yq_axis[idx % nq]};
        try {
            grid.samples[idx] = eval(y, t);
        } catch (const NumericError& e) {
            std::ostringstream os;
            os << "at y = (" << y.p << ", " << y.q << "), t = " << t << ": " << e.what();
            throw NumericError(os.str());
        }
    });
    return grid;
}

}  // namespace cwkb
