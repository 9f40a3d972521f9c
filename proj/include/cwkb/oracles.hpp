#pragma once

#include <functional>

#include "cwkb/geometry.hpp"
#include "cwkb/hamiltonian.hpp"
#include "cwkb/initial_action.hpp"

namespace cwkb {

/* Closed quadratic model H(x) = x . hmat x with a linear Lindblad coupling.
   The chord flow is exactly linear, so the generator propagates any initial
   chord function in closed form. */
struct QuadraticModel {
    Mat2 hmat{};
    LindbladCoupling coupling{};

    QuadraticModel(const Mat2& h, const LindbladCoupling& L) : hmat(h), coupling(L) {
        if (std::abs(h.a12 - h.a21) > 1e-14)
            throw ConfigError("quadratic model matrix must be symmetric");
    }

    static QuadraticModel from_hamiltonian(const PolynomialHamiltonian& H,
                                           const LindbladCoupling& L) {
        return QuadraticModel(H.quadratic_matrix(), L);
    }
};

/* chi(y, t) = chi0( e^{-gamma t} R_t^T y ) *
               exp( -(1/2 hbar) int_0^t e^{-2 gamma s} |lambda . R_s^T y|^2 ds ),
   R_s = exp(2 J hmat s). The time integral is done by adaptive Simpson. */
complexd exact_quadratic_chord(const QuadraticModel& m,
                               const std::function<complexd(const Vec2&)>& chi0, const Vec2& y,
                               double t, double hbar);

/* Chord-space transport map of the quadratic model: y(0) as a function of
   the chord y at time t. */
Vec2 quadratic_initial_chord(const QuadraticModel& m, const Vec2& y, double t);

/* Exact evolved cross-chord of a pair of coherent states under H = c p^3
   with coupling L = l p_hat (midpoint parameters cp; diagonal terms are the
   special case dP = dQ = 0). Principal branch of the square root. */
complexd exact_cubic_cat_chord(const CatParams& cp, double l, const Vec2& y, double t,
                               double hbar, double c = 1.0);

/* Stationary-phase evaluation of the same chord: saddle of the initial-chord
   integral, continuously tracked branch of the prefactor. */
complexd cubic_saddle_point_chord(const CatParams& cp, double l, const Vec2& y, double t,
                                  double hbar, double c = 1.0);

/* Direct quadrature of the momentum-representation integral for H = c p^3,
   L = l p_hat. The state is either a coherent-pair cross term (cat) or a
   phase-space point source (delta). */
struct CubicQuadratureState {
    enum class Kind { cat, delta };
    Kind kind{Kind::cat};
    CatParams cp{};
    Vec2 x{};

    static CubicQuadratureState cat_term(const CatParams& p) {
        CubicQuadratureState s;
        s.kind = Kind::cat;
        s.cp = p;
        return s;
    }
    static CubicQuadratureState delta(const Vec2& x) {
        CubicQuadratureState s;
        s.kind = Kind::delta;
        s.x = x;
        return s;
    }
};

complexd numeric_cubic_chord(const CubicQuadratureState& state, double l, const Vec2& y, double t,
                             double hbar, double c = 1.0, double rel_tol = 1e-12);

/* Closed form of the chord propagator anchored at x for H = c p^3,
   L = l p_hat:
     R_x(y, t) = exp( -i c t y_q^3 / 4 hbar - t l^2 y_q^2 / 2 hbar
                      - (i/hbar)(y_q x_q + y_p x_p + 3 c t y_q x_p^2) ). */
complexd exact_cubic_mixed_propagator(const Vec2& x, double l, const Vec2& y, double t,
                                      double hbar, double c = 1.0);

}  // namespace cwkb
