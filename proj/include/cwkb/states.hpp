#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cwkb/geometry.hpp"
#include "cwkb/initial_action.hpp"

namespace cwkb {

enum class CatTerm { aa, bb, ab, ba, full };

/* Effective midpoint parameters of one branch of the pair superposition. */
inline CatParams cat_term_params(const CatParams& cp, CatTerm term) {
    switch (term) {
        case CatTerm::aa: return CatParams::from_centers(cp.center_a(), cp.center_a());
        case CatTerm::bb: return CatParams::from_centers(cp.center_b(), cp.center_b());
        case CatTerm::ab: return cp;
        case CatTerm::ba: return cp.swapped();
        default: throw ConfigError("full superposition has no single branch");
    }
}

inline double gaussian_wigner(const Vec2& X, const Vec2& x, double hbar) {
    const double dp = x.p - X.p, dq = x.q - X.q;
    return std::exp(-(dp * dp + dq * dq) / hbar) / (M_PI * hbar);
}

inline complexd gaussian_chord0(const Vec2& X, const Vec2& y, double hbar) {
    return std::exp(complexd{-(y.p * y.p + y.q * y.q) / (4.0 * hbar),
                             -(X.p * y.p + X.q * y.q) / hbar});
}

/* Chord function of one branch at t = 0: exp(i S0 / hbar) with the branch's
   generating function. */
inline complexd cat_chord0(const CatParams& cp, CatTerm term, const Vec2& y, double hbar) {
    if (term == CatTerm::full) {
        complexd s{0.0};
        for (CatTerm tt : {CatTerm::aa, CatTerm::bb, CatTerm::ab, CatTerm::ba})
            s += cat_chord0(cp, tt, y, hbar);
        return 0.5 * s;
    }
    const InitialAction a = InitialAction::cat(cat_term_params(cp, term));
    return std::exp(I_UNIT * a.value(CVec2(y)) / hbar);
}

/* Wigner function of one branch at t = 0. Cross terms carry the fringe
   phase exp(-i [dQ p - dP q + Q dP] / hbar) on a Gaussian at the midpoint. */
inline complexd cat_wigner0(const CatParams& cp, CatTerm term, const Vec2& x, double hbar) {
    switch (term) {
        case CatTerm::aa: return gaussian_wigner(cp.center_a(), x, hbar);
        case CatTerm::bb: return gaussian_wigner(cp.center_b(), x, hbar);
        case CatTerm::ab: {
            const Vec2 X{cp.P, cp.Q};
            const double phase = -(cp.dQ * x.p - cp.dP * x.q + cp.Q * cp.dP) / hbar;
            return gaussian_wigner(X, x, hbar) * std::exp(complexd{0.0, phase});
        }
        case CatTerm::ba: return std::conj(cat_wigner0(cp, CatTerm::ab, x, hbar));
        default: {
            complexd s{0.0};
            for (CatTerm tt : {CatTerm::aa, CatTerm::bb, CatTerm::ab, CatTerm::ba})
                s += cat_wigner0(cp, tt, x, hbar);
            return 0.5 * s;
        }
    }
}

inline InitialAction cat_initial_action(const CatParams& cp) { return InitialAction::cat(cp); }
inline InitialAction plane_wave_action(const Vec2& x) { return InitialAction::plane_wave(x); }

/* State as configured: one of the three supported initial families, with a
   branch selector for the pair superposition. */
struct StateModel {
    enum class Type { gaussian, cat, plane_wave };
    Type type{Type::gaussian};
    Vec2 X{};          // gaussian centre, or plane-wave anchor
    CatParams cp{};
    CatTerm term{CatTerm::full};

    complexd chi0(const Vec2& y, double hbar) const {
        switch (type) {
            case Type::gaussian: return gaussian_chord0(X, y, hbar);
            case Type::cat: return cat_chord0(cp, term, y, hbar);
            default:
                return std::exp(complexd{0.0, -(X.p * y.p + X.q * y.q) / hbar});
        }
    }

    complexd wigner0(const Vec2& x, double hbar) const {
        switch (type) {
            case Type::gaussian: return gaussian_wigner(X, x, hbar);
            case Type::cat: return cat_wigner0(cp, term, x, hbar);
            default:
                throw ConfigError("a plane-wave state has no pointwise Wigner function");
        }
    }

    /* Weighted coherent-pair terms (for the closed cubic evaluations).
       A Gaussian is the degenerate pair with dP = dQ = 0. */
    std::vector<std::pair<CatParams, double>> term_list() const {
        switch (type) {
            case Type::gaussian:
                return {{CatParams{X.p, X.q, 0.0, 0.0}, 1.0}};
            case Type::cat:
                if (term != CatTerm::full) return {{cat_term_params(cp, term), 1.0}};
                return {{cat_term_params(cp, CatTerm::aa), 0.5},
                        {cat_term_params(cp, CatTerm::bb), 0.5},
                        {cat_term_params(cp, CatTerm::ab), 0.5},
                        {cat_term_params(cp, CatTerm::ba), 0.5}};
            default:
                throw ConfigError("a plane-wave state has no coherent-pair terms");
        }
    }

    /* Weighted branches driven through the trajectory methods. */
    std::vector<std::pair<InitialAction, double>> branches() const {
        switch (type) {
            case Type::gaussian:
                return {{InitialAction::gaussian(X), 1.0}};
            case Type::plane_wave:
                return {{InitialAction::plane_wave(X), 1.0}};
            default:
                if (term != CatTerm::full)
                    return {{InitialAction::cat(cat_term_params(cp, term)), 1.0}};
                return {{InitialAction::cat(cat_term_params(cp, CatTerm::aa)), 0.5},
                        {InitialAction::cat(cat_term_params(cp, CatTerm::bb)), 0.5},
                        {InitialAction::cat(cat_term_params(cp, CatTerm::ab)), 0.5},
                        {InitialAction::cat(cat_term_params(cp, CatTerm::ba)), 0.5}};
        }
    }
};

}  // namespace cwkb
