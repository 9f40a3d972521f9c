#pragma once

#include "cwkb/geometry.hpp"
#include "cwkb/hamiltonian.hpp"
#include "cwkb/initial_action.hpp"
#include "cwkb/trajectories.hpp"

namespace cwkb {

/* One chord-function sample produced by the complex-trajectory method. */
struct ChordValue {
    Vec2 y{};
    double t{0.0};
    complexd value{0.0};    // chi(y, t) = exp(i S / hbar); unit amplitude factor
    complexd action{0.0};   // S = S0(y(0)) + dyn + i deco
    complexd deco{0.0};     // the accumulated decoherence integral
};

/* Complex-WKB chord value at a real chord y and time t:
   solve the boundary problem for the complex characteristic that reaches y,
   accumulate the action, and exponentiate. */
ChordValue chord_wkb(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y,
                     double t, double hbar, const ShootingOptions& opts = {});

/* Hamilton-Jacobi residual | dS/dt + Hc(x(y, t), y) |: dS/dt by central
   finite differences of the solved action (step h), the generator evaluated
   at the trajectory endpoint x(y, t) = -dS/dy. */
double hj_residual(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y, double t,
                   double hbar, double h = 1e-4, const ShootingOptions& opts = {});

}  // namespace cwkb
