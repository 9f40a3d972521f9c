#include "cwkb/complex_wkb.hpp"

#include <cmath>

#include "cwkb/errors.hpp"

namespace cwkb {

ChordValue chord_wkb(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y,
                     double t, double hbar, const ShootingOptions& opts) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const TrajectoryRecord rec = solve_history(dh, s0, CVec2(y), t, opts);
    const complexd S = accumulate_action(rec, s0);
    ChordValue out;
    out.y = y;
    out.t = t;
    out.action = S;
    out.deco = rec.deco_integral;
    out.value = std::exp(I_UNIT * S / hbar);
    return out;
}

double hj_residual(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y, double t,
                   double hbar, double h, const ShootingOptions& opts) {
    (void)hbar;  // the defect is measured on the action itself
    /* The time difference divides the shooting residual by 2h, so the solver
       must run far tighter than the defect being measured. */
    ShootingOptions tight = opts;
    tight.tolerance = std::min(opts.tolerance, 1e-13);
    ActionCache cache(dh, s0, tight);

    complexd dSdt;
    if (t >= h) {
        dSdt = (cache.action(y, t + h) - cache.action(y, t - h)) / (2.0 * h);
    } else {
        dSdt = (cache.action(y, t + h) - cache.action(y, t)) / h;
    }

    /* The generator is evaluated at the trajectory endpoint. Its agreement
       with -dS/dy is checked separately (grad_x_action_probe), and using the
       endpoint keeps this residual free of differencing error in y. */
    const TrajectoryRecord rec = solve_history(dh, s0, CVec2(y), t, tight);
    const CVec2 x = rec.points.back().x;
    return std::abs(dSdt + dh.eval_complex(x, CVec2(y)));
}

}  // namespace cwkb
