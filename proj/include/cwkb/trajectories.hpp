#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cwkb/geometry.hpp"
#include "cwkb/hamiltonian.hpp"
#include "cwkb/initial_action.hpp"

namespace cwkb {

struct DoublePhasePoint {
    CVec2 x;
    CVec2 y;
};

/* One solved double-phase-space trajectory, sampled on a uniform time grid,
   together with the action pieces accumulated along it:
     dyn_action    = int ( -x . dy/dt - Hd ) dt          (complex)
     deco_integral = int (1/2)[(l'.y)^2 + (l''.y)^2] dt  (complex)
   The full action is S = S0(y(0)) + dyn_action + i * deco_integral. */
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<DoublePhasePoint> points;
    complexd dyn_action{0.0};
    complexd deco_integral{0.0};
    CVec2 y_target{};
    double shoot_residual{0.0};
    int newton_iterations{0};
};

/* Real lane: same data for the lambda-free (real) characteristics. */
struct RealPhasePoint {
    Vec2 x;
    Vec2 y;
};

struct RealTrajectoryRecord {
    std::vector<double> times;
    std::vector<RealPhasePoint> points;
    double dyn_action{0.0};
    double deco_integral{0.0};
    Vec2 y_target{};
    double shoot_residual{0.0};
    int newton_iterations{0};
};

struct IntegrationOptions {
    double steps_per_unit{1000.0};
    int min_steps{2};
    double divergence_bound{1e8};
};

struct ShootingOptions {
    IntegrationOptions integration{};
    double tolerance{1e-10};
    int max_iterations{50};
    double fd_step{1e-6};
    /* Newton stops early once the residual stagnates (roundoff floor of the
       fixed-step endpoint map). The best iterate is then accepted when its
       residual is within stall_grace * tolerance, so a request slightly below
       the attainable floor degrades gracefully instead of erroring; anything
       above the band still throws. Set to 1 to demand the strict tolerance. */
    double stall_grace{8.0};
};

/* Classical RK4 integration of
     dy/dt = -dHc/dx,  dx/dt = +dHc/dy
   from (x0, y0) over [0, t]. Every grid point is recorded. Throws
   DivergenceError when any component magnitude exceeds the bound. */
TrajectoryRecord integrate_forward(const DoubleHamiltonian& dh, const CVec2& x0,
                                   const CVec2& y0, double t,
                                   const IntegrationOptions& opts = {});

/* Real characteristics: dy/dt = -dHd/dx, dx/dt = +dHd/dy, in real
   arithmetic (the dissipative drift does not act). */
RealTrajectoryRecord integrate_forward_real(const DoubleHamiltonian& dh, const Vec2& x0,
                                            const Vec2& y0, double t,
                                            const IntegrationOptions& opts = {});

/* Newton shooting for the trajectory that starts on the Lagrangian surface
   x(0) = -dS0/dy (y(0) free) and reaches chord y_target at time t. */
TrajectoryRecord solve_history(const DoubleHamiltonian& dh, const InitialAction& s0,
                               const CVec2& y_target, double t,
                               const ShootingOptions& opts = {});

/* Real-lane shooting; requires S0 real on real chords. */
RealTrajectoryRecord solve_history_real(const DoubleHamiltonian& dh, const InitialAction& s0,
                                        const Vec2& y_target, double t,
                                        const ShootingOptions& opts = {});

/* S(y, t) = S0(y(0)) + dyn_action + i deco_integral. */
complexd accumulate_action(const TrajectoryRecord& rec, const InitialAction& s0);
double accumulate_action_real(const RealTrajectoryRecord& rec, const InitialAction& s0);

/* Memoising wrapper around solve_history + accumulate_action, keyed on the
   exact (y_p, y_q, t) bits. Used by finite-difference diagnostics. */
class ActionCache {
  public:
    ActionCache(const DoubleHamiltonian& dh, const InitialAction& s0,
                const ShootingOptions& opts = {})
        : dh_(dh), s0_(s0), opts_(opts) {}

    complexd action(const Vec2& y, double t);

  private:
    const DoubleHamiltonian& dh_;
    const InitialAction& s0_;
    ShootingOptions opts_;
    std::map<std::tuple<double, double, double>, complexd> memo_;
};

/* Consistency diagnostics for the action generated by the trajectory family.

   sym_defect:  | d x_p / d y_q - d x_q / d y_p |  of x(y, t) = -dS/dy
   time_defect: max-norm of d x / d t - dHc/dy (x(y,t), y)

   Inner derivatives of S use step h, the outer derivatives use 2h. */
struct SchwartzProbeResult {
    double sym_defect{0.0};
    double time_defect{0.0};
};

SchwartzProbeResult schwartz_probe(const DoubleHamiltonian& dh, const InitialAction& s0,
                                   const Vec2& y, double t, double h = 1e-4,
                                   const ShootingOptions& opts = {});

/* Debug dump: tau plus real/imaginary parts of x and y per grid point. */
void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path);

}  // namespace cwkb
