#pragma once

#include <functional>
#include <vector>

#include "cwkb/complex_wkb.hpp"
#include "cwkb/geometry.hpp"
#include "cwkb/hamiltonian.hpp"
#include "cwkb/initial_action.hpp"
#include "cwkb/trajectories.hpp"

namespace cwkb {

/* Real characteristic reaching chord y at time t from the surface
   x(0) = -dS0/dy (S0 real). All imaginary parts are identically zero by
   construction: the integration runs in real arithmetic. */
RealTrajectoryRecord real_history(const DoubleHamiltonian& dh, const InitialAction& s0,
                                  const Vec2& y, double t, const ShootingOptions& opts = {});

/* Accumulated decoherence functional of a real trajectory:
   D = (1/2) int [(lambda'.y)^2 + (lambda''.y)^2] dtau  >= 0. */
double decoherence_functional(const RealTrajectoryRecord& rec);

/* Perturbative chord value on real characteristics:
   chi(y, t) = exp( i S_real / hbar - D / hbar ). */
ChordValue chord_real_wkb(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y,
                          double t, double hbar, const ShootingOptions& opts = {});

/* Chord propagator anchored at phase-space point x (the chord transform of
   the propagated delta state at x):
     R_x(y, t) = exp( i S / hbar - D / hbar ),
   with S from the plane-wave surface through x. |R_x| <= 1. */
struct MixedPropagatorValue {
    Vec2 x{};
    Vec2 y{};
    double t{0.0};
    complexd value{0.0};
    double phase_action{0.0};  // real part S of the exponent i S / hbar
    double deco{0.0};          // decoherence functional D >= 0
};

MixedPropagatorValue mixed_propagator(const DoubleHamiltonian& dh, const Vec2& x, const Vec2& y,
                                      double t, double hbar, const ShootingOptions& opts = {});

/* | dS/dx + y(0) | for the mixed action at anchor x: central finite
   differences (step h) of the full mixed exponent versus the initial chord
   of the solved history. */
double grad_x_action_probe(const DoubleHamiltonian& dh, const Vec2& x, const Vec2& y, double t,
                           double h = 1e-4, const ShootingOptions& opts = {});

/* Propagation of a Wigner function by the mixed propagator:
     chi(y, t) = int W0(x) R_x(y, t) d^2x.
   The functional form integrates W0 over the given box with tensor
   Gauss-Legendre quadrature, doubling the node count per axis until the
   result is stable; non-convergence raises QuadratureError. */
struct SupportBox {
    double p_min{0}, p_max{0};
    double q_min{0}, q_max{0};
};

struct MixedQuadratureOptions {
    int initial_nodes{64};
    int max_nodes{1024};
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    /* Worker threads for the node sweep (0 = one per hardware core). The
       initial state functional must be safe to call concurrently. Results
       are identical for every thread count. */
    int threads{0};
    ShootingOptions shooting{};
};

complexd propagate_state_via_mixed(const DoubleHamiltonian& dh,
                                   const std::function<double(const Vec2&)>& w0,
                                   const SupportBox& box, const Vec2& y, double t, double hbar,
                                   const MixedQuadratureOptions& opts = {});

/* Gaussian-integral closed form of the same propagation for an initial
   Wigner function of the form
     W0(x) = (1 / pi hbar) exp(-(x - X)^2 / hbar) * exp(-i (k.x + c) / hbar).
   The mixed action is expanded to second order around X:
     chi(y, t) = exp( i (S(X) - k.X - c) / hbar )
                 * exp( -b . A^{-1} b / (4 hbar) ) / sqrt(det A),
   with b = y0(X) + k, A = I + (i/2) M, M = d y0 / d x (symmetrised).
   Validity of the quadratic expansion is probed at the Gaussian width
   sqrt(hbar); a dominant third-order remainder raises ExpansionError. */
complexd gaussian_chord_evolution(const DoubleHamiltonian& dh, const Vec2& X, const Vec2& k,
                                  double c, const Vec2& y, double t, double hbar,
                                  const ShootingOptions& opts = {});

/* Third-order phase error of the real-trajectory approximation: leading
   perturbative estimate
     dP ~ (t^3/6) [ (lambda'.y)^2 (lambda'.Hxx lambda')
                  + (lambda''.y)^2 (lambda''.Hxx lambda'') ],
   with Hxx the x-Hessian of Hd at the start of the real history. */
complexd perturbation_error_estimate(const DoubleHamiltonian& dh, const InitialAction& s0,
                                     const Vec2& y, double t,
                                     const ShootingOptions& opts = {});

/* Measured phase defect dP(t, l) = S_complex - (S_real + i D) over sweeps
   of time and coupling strength, with log-log slope fits. */
struct ScalingRow {
    double t{0.0};
    double l{0.0};
    complexd dP{0.0};
    double deco{0.0};
};

struct ScalingReport {
    std::vector<ScalingRow> t_rows;   // swept over t at l = l_ref
    std::vector<ScalingRow> l_rows;   // swept over l at t = t_ref
    double t_exponent{0.0};
    double l_exponent{0.0};
    double deco_exponent{0.0};        // slope of log D versus log t
    double t_fit_residual{0.0};
    double l_fit_residual{0.0};
    double deco_fit_residual{0.0};
    bool t_degenerate{false};         // all |dP| below the degeneracy floor
    bool l_degenerate{false};
    /* Below this, |dP| is indistinguishable from integrator noise and no
       power law is fitted. */
    double degeneracy_floor{1e-10};
    /* (lambda'.Hxx lambda') per unit coupling at the reference trajectory
       start; zero means the leading error term vanishes identically and
       the power-law fits are expected to be degenerate. */
    double estimate_contraction{0.0};
};

struct ScalingProbeSetup {
    PolynomialHamiltonian hamiltonian;
    Vec2 coupling_direction{1.0, 0.0};  // L = l * (direction . x_hat), real
    InitialAction s0{InitialAction::PlaneWave{Vec2{0.5, 0.5}}};
    Vec2 y{0.2, 1.0};
    std::vector<double> t_list;
    std::vector<double> l_list;
    double t_ref{0.2};
    double l_ref{0.2};
    double hbar{1.0};
    ShootingOptions shooting{};
};

ScalingReport scaling_probe(const ScalingProbeSetup& setup);

/* Default sweep used by the scaling command: H = q^4 / 4, L = l p_hat,
   plane-wave surface through (0.5, 0.5), chord y = (0.2, 1.0), and
   geometric lists of seven points spanning [0.05, 0.4]. */
ScalingProbeSetup quartic_scaling_preset();

/* Same sweep with H = p^3: the estimate's Hessian contraction vanishes
   identically, so all dP sit at the numerical floor. */
ScalingProbeSetup cubic_scaling_preset();

}  // namespace cwkb
