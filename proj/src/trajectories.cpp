#include "cwkb/trajectories.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cwkb/errors.hpp"
#include "cwkb/quadrature.hpp"

namespace cwkb {

namespace {

int step_count(double t, const IntegrationOptions& opts) {
    if (t < 0.0) throw NumericError("negative propagation time");
    int n = (int)std::ceil(opts.steps_per_unit * t);
    n = std::max(n, opts.min_steps);
    if (n % 2 != 0) ++n;  // keep the stored grid Simpson-friendly
    return n;
}

/* Equations of motion on raw scalars; complex lane includes the
   dissipative drift -i[(l'.y)l' + (l''.y)l''] in dx/dt. */
inline void rhs_complex(const DoubleHamiltonian& dh, const complexd& xp, const complexd& xq,
                        const complexd& yp, const complexd& yq, complexd& dxp, complexd& dxq,
                        complexd& dyp, complexd& dyq) {
    const complexd mp = xp + 0.5 * yq, mq = xq - 0.5 * yp;
    const complexd pp = xp - 0.5 * yq, pq = xq + 0.5 * yp;
    complexd gmp, gmq, gpp, gpq;
    dh.hamiltonian().gradient(mp, mq, gmp, gmq);
    dh.hamiltonian().gradient(pp, pq, gpp, gpq);
    const double g = dh.gamma();
    dyp = -(gmp - gpp - g * yp);
    dyq = -(gmq - gpq - g * yq);
    const Vec2& lr = dh.lambda_re();
    const Vec2& li = dh.lambda_im();
    const complexd a = lr.p * yp + lr.q * yq;
    const complexd b = li.p * yp + li.q * yq;
    dxp = -0.5 * (gmq + gpq) - g * xp - I_UNIT * (a * lr.p + b * li.p);
    dxq = 0.5 * (gmp + gpp) - g * xq - I_UNIT * (a * lr.q + b * li.q);
}

inline void rhs_real(const DoubleHamiltonian& dh, double xp, double xq, double yp, double yq,
                     double& dxp, double& dxq, double& dyp, double& dyq) {
    const double mp = xp + 0.5 * yq, mq = xq - 0.5 * yp;
    const double pp = xp - 0.5 * yq, pq = xq + 0.5 * yp;
    double gmp, gmq, gpp, gpq;
    dh.hamiltonian().gradient(mp, mq, gmp, gmq);
    dh.hamiltonian().gradient(pp, pq, gpp, gpq);
    const double g = dh.gamma();
    dyp = -(gmp - gpp - g * yp);
    dyq = -(gmq - gpq - g * yq);
    dxp = -0.5 * (gmq + gpq) - g * xp;
    dxq = 0.5 * (gmp + gpp) - g * xq;
}

template <typename S>
double mag4(S a, S b, S c, S d) {
    using std::abs;
    return std::max(std::max(abs(a), abs(b)), std::max(abs(c), abs(d)));
}

/* End point only (used by Newton iterations; no storage). */
void integrate_end_complex(const DoubleHamiltonian& dh, complexd& xp, complexd& xq, complexd& yp,
                           complexd& yq, double t, const IntegrationOptions& opts) {
    if (t == 0.0) return;
    const int n = step_count(t, opts);
    const double h = t / n;
    complexd k1[4], k2[4], k3[4], k4[4];
    for (int s = 0; s < n; ++s) {
        if (mag4(xp, xq, yp, yq) > opts.divergence_bound)
            throw DivergenceError("trajectory magnitude exceeded divergence bound");
        rhs_complex(dh, xp, xq, yp, yq, k1[0], k1[1], k1[2], k1[3]);
        rhs_complex(dh, xp + 0.5 * h * k1[0], xq + 0.5 * h * k1[1], yp + 0.5 * h * k1[2],
                    yq + 0.5 * h * k1[3], k2[0], k2[1], k2[2], k2[3]);
        rhs_complex(dh, xp + 0.5 * h * k2[0], xq + 0.5 * h * k2[1], yp + 0.5 * h * k2[2],
                    yq + 0.5 * h * k2[3], k3[0], k3[1], k3[2], k3[3]);
        rhs_complex(dh, xp + h * k3[0], xq + h * k3[1], yp + h * k3[2], yq + h * k3[3], k4[0],
                    k4[1], k4[2], k4[3]);
        xp += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        xq += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        yp += (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        yq += (h / 6.0) * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }
}

void integrate_end_real(const DoubleHamiltonian& dh, double& xp, double& xq, double& yp,
                        double& yq, double t, const IntegrationOptions& opts) {
    if (t == 0.0) return;
    const int n = step_count(t, opts);
    const double h = t / n;
    double k1[4], k2[4], k3[4], k4[4];
    for (int s = 0; s < n; ++s) {
        if (mag4(xp, xq, yp, yq) > opts.divergence_bound)
            throw DivergenceError("trajectory magnitude exceeded divergence bound");
        rhs_real(dh, xp, xq, yp, yq, k1[0], k1[1], k1[2], k1[3]);
        rhs_real(dh, xp + 0.5 * h * k1[0], xq + 0.5 * h * k1[1], yp + 0.5 * h * k1[2],
                 yq + 0.5 * h * k1[3], k2[0], k2[1], k2[2], k2[3]);
        rhs_real(dh, xp + 0.5 * h * k2[0], xq + 0.5 * h * k2[1], yp + 0.5 * h * k2[2],
                 yq + 0.5 * h * k2[3], k3[0], k3[1], k3[2], k3[3]);
        rhs_real(dh, xp + h * k3[0], xq + h * k3[1], yp + h * k3[2], yq + h * k3[3], k4[0], k4[1],
                 k4[2], k4[3]);
        xp += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        xq += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        yp += (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        yq += (h / 6.0) * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }
}

}  // namespace

TrajectoryRecord integrate_forward(const DoubleHamiltonian& dh, const CVec2& x0, const CVec2& y0,
                                   double t, const IntegrationOptions& opts) {
    TrajectoryRecord rec;
    complexd xp = x0.p, xq = x0.q, yp = y0.p, yq = y0.q;

    if (t == 0.0) {
        rec.times = {0.0};
        rec.points = {{x0, y0}};
        rec.y_target = y0;
        return rec;
    }

    const int n = step_count(t, opts);
    const double h = t / n;
    rec.times.reserve(n + 1);
    rec.points.reserve(n + 1);
    std::vector<complexd> fdyn, fdec;
    fdyn.reserve(n + 1);
    fdec.reserve(n + 1);

    complexd k1[4], k2[4], k3[4], k4[4];
    for (int s = 0; s <= n; ++s) {
        if (mag4(xp, xq, yp, yq) > opts.divergence_bound)
            throw DivergenceError("trajectory magnitude exceeded divergence bound");
        rec.times.push_back(s * h);
        const CVec2 x{xp, xq}, y{yp, yq};
        rec.points.push_back({x, y});

        // action integrands at the stored node: -x.dy/dt - Hd = x.dHd/dx - Hd
        fdyn.push_back(dot(x, dh.grad_x(x, y)) - dh.eval(x, y));
        fdec.push_back(dh.deco_rate(y));
        if (s == n) break;

        rhs_complex(dh, xp, xq, yp, yq, k1[0], k1[1], k1[2], k1[3]);
        rhs_complex(dh, xp + 0.5 * h * k1[0], xq + 0.5 * h * k1[1], yp + 0.5 * h * k1[2],
                    yq + 0.5 * h * k1[3], k2[0], k2[1], k2[2], k2[3]);
        rhs_complex(dh, xp + 0.5 * h * k2[0], xq + 0.5 * h * k2[1], yp + 0.5 * h * k2[2],
                    yq + 0.5 * h * k2[3], k3[0], k3[1], k3[2], k3[3]);
        rhs_complex(dh, xp + h * k3[0], xq + h * k3[1], yp + h * k3[2], yq + h * k3[3], k4[0],
                    k4[1], k4[2], k4[3]);
        xp += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        xq += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        yp += (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        yq += (h / 6.0) * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }

    rec.dyn_action = simpson_uniform(fdyn, h);
    rec.deco_integral = simpson_uniform(fdec, h);
    rec.y_target = rec.points.back().y;
    return rec;
}

RealTrajectoryRecord integrate_forward_real(const DoubleHamiltonian& dh, const Vec2& x0,
                                            const Vec2& y0, double t,
                                            const IntegrationOptions& opts) {
    RealTrajectoryRecord rec;
    double xp = x0.p, xq = x0.q, yp = y0.p, yq = y0.q;

    if (t == 0.0) {
        rec.times = {0.0};
        rec.points = {{x0, y0}};
        rec.y_target = y0;
        return rec;
    }

    const int n = step_count(t, opts);
    const double h = t / n;
    rec.times.reserve(n + 1);
    rec.points.reserve(n + 1);
    std::vector<double> fdyn, fdec;
    fdyn.reserve(n + 1);
    fdec.reserve(n + 1);

    double k1[4], k2[4], k3[4], k4[4];
    for (int s = 0; s <= n; ++s) {
        if (mag4(xp, xq, yp, yq) > opts.divergence_bound)
            throw DivergenceError("trajectory magnitude exceeded divergence bound");
        rec.times.push_back(s * h);
        const Vec2 x{xp, xq}, y{yp, yq};
        rec.points.push_back({x, y});
        fdyn.push_back(dot(x, dh.grad_x_real(x, y)) - dh.eval_real(x, y));
        fdec.push_back(dh.deco_rate_real(y));
        if (s == n) break;

        rhs_real(dh, xp, xq, yp, yq, k1[0], k1[1], k1[2], k1[3]);
        rhs_real(dh, xp + 0.5 * h * k1[0], xq + 0.5 * h * k1[1], yp + 0.5 * h * k1[2],
                 yq + 0.5 * h * k1[3], k2[0], k2[1], k2[2], k2[3]);
        rhs_real(dh, xp + 0.5 * h * k2[0], xq + 0.5 * h * k2[1], yp + 0.5 * h * k2[2],
                 yq + 0.5 * h * k2[3], k3[0], k3[1], k3[2], k3[3]);
        rhs_real(dh, xp + h * k3[0], xq + h * k3[1], yp + h * k3[2], yq + h * k3[3], k4[0], k4[1],
                 k4[2], k4[3]);
        xp += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        xq += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        yp += (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        yq += (h / 6.0) * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
    }

    rec.dyn_action = simpson_uniform(fdyn, h);
    rec.deco_integral = simpson_uniform(fdec, h);
    rec.y_target = rec.points.back().y;
    return rec;
}

namespace {

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fmt_chord(const CVec2& y, double t) {
    std::ostringstream os;
    os << "y = (" << y.p.real();
    if (y.p.imag() != 0.0) os << (y.p.imag() < 0 ? "" : "+") << y.p.imag() << "i";
    os << ", " << y.q.real();
    if (y.q.imag() != 0.0) os << (y.q.imag() < 0 ? "" : "+") << y.q.imag() << "i";
    os << "), t = " << t;
    return os.str();
}

/* One Newton solve in the complex lane; returns the converged y(0) or
   throws SolverError. */
CVec2 newton_shoot_complex(const DoubleHamiltonian& dh, const InitialAction& s0,
                           const CVec2& y_target, double t, const CVec2& seed,
                           const ShootingOptions& opts, int& iterations, double& residual) {
    complexd y0p = seed.p, y0q = seed.q;

    auto endpoint = [&](complexd ap, complexd aq, complexd& ep, complexd& eq) {
        const CVec2 x0 = -1.0 * s0.gradient(CVec2{ap, aq});
        complexd xp = x0.p, xq = x0.q, yp = ap, yq = aq;
        integrate_end_complex(dh, xp, xq, yp, yq, t, opts.integration);
        ep = yp - y_target.p;
        eq = yq - y_target.q;
    };

    complexd fp, fq;
    endpoint(y0p, y0q, fp, fq);
    residual = std::max(std::abs(fp), std::abs(fq));
    iterations = 0;

    complexd best_p = y0p, best_q = y0q;
    double best = residual;
    int stalled = 0;

    const double h = opts.fd_step;
    while (residual > opts.tolerance) {
        if (iterations >= opts.max_iterations)
            throw SolverError("shooting did not converge after " +
                                  std::to_string(opts.max_iterations) + " iterations at " +
                                  fmt_chord(y_target, t) + " (residual " + fmt_sci(residual) +
                                  ")",
                              residual);
        // Central finite-difference Jacobian; real steps suffice because the
        // endpoint map is holomorphic in y(0).
        complexd fpp, fpm, fqp, fqm;
        Mat2c Jm;
        endpoint(y0p + h, y0q, fpp, fqp);
        endpoint(y0p - h, y0q, fpm, fqm);
        Jm.a11 = (fpp - fpm) / (2.0 * h);
        Jm.a21 = (fqp - fqm) / (2.0 * h);
        endpoint(y0p, y0q + h, fpp, fqp);
        endpoint(y0p, y0q - h, fpm, fqm);
        Jm.a12 = (fpp - fpm) / (2.0 * h);
        Jm.a22 = (fqp - fqm) / (2.0 * h);

        const CVec2 delta = Jm.solve(CVec2{fp, fq});
        y0p -= delta.p;
        y0q -= delta.q;
        ++iterations;
        if (std::max(std::abs(y0p), std::abs(y0q)) > opts.integration.divergence_bound)
            throw SolverError("shooting iterate diverged at " + fmt_chord(y_target, t), residual);
        endpoint(y0p, y0q, fp, fq);
        residual = std::max(std::abs(fp), std::abs(fq));

        stalled = (residual < 0.9 * best) ? 0 : stalled + 1;
        if (residual < best) {
            best = residual;
            best_p = y0p;
            best_q = y0q;
        }
        if (stalled >= 3 && residual > opts.tolerance) {
            if (best <= opts.stall_grace * opts.tolerance) {
                residual = best;
                return CVec2{best_p, best_q};
            }
            throw SolverError("shooting stalled at residual " + fmt_sci(best) +
                                  " above tolerance " + fmt_sci(opts.tolerance) + " at " +
                                  fmt_chord(y_target, t),
                              best);
        }
    }
    return CVec2{y0p, y0q};
}

}  // namespace

TrajectoryRecord solve_history(const DoubleHamiltonian& dh, const InitialAction& s0,
                               const CVec2& y_target, double t, const ShootingOptions& opts) {
    if (t == 0.0) {
        TrajectoryRecord rec;
        rec.times = {0.0};
        rec.points = {{-1.0 * s0.gradient(y_target), y_target}};
        rec.y_target = y_target;
        return rec;
    }

    int iters = 0;
    double residual = 0.0;
    CVec2 y0{};
    try {
        y0 = newton_shoot_complex(dh, s0, y_target, t, y_target, opts, iters, residual);
    } catch (const SolverError&) {
        // Retry seeded by the coupling-free problem, whose root is often a
        // good approximation of the dissipative one.
        if (dh.coupling().is_zero()) throw;
        const DoubleHamiltonian closed(dh.hamiltonian(), LindbladCoupling{});
        int aux_iters = 0;
        double aux_res = 0.0;
        const CVec2 seed =
            newton_shoot_complex(closed, s0, y_target, t, y_target, opts, aux_iters, aux_res);
        y0 = newton_shoot_complex(dh, s0, y_target, t, seed, opts, iters, residual);
        iters += aux_iters;
    }

    const CVec2 x0 = -1.0 * s0.gradient(y0);
    TrajectoryRecord rec = integrate_forward(dh, x0, y0, t, opts.integration);
    rec.y_target = y_target;
    rec.newton_iterations = iters;
    rec.shoot_residual = norm_max(rec.points.back().y - y_target);
    return rec;
}

RealTrajectoryRecord solve_history_real(const DoubleHamiltonian& dh, const InitialAction& s0,
                                        const Vec2& y_target, double t,
                                        const ShootingOptions& opts) {
    if (!s0.real_on_real_chords())
        throw ConfigError("real-trajectory lane requires a real initial action");

    if (t == 0.0) {
        RealTrajectoryRecord rec;
        rec.times = {0.0};
        rec.points = {{-1.0 * s0.gradient_real(y_target), y_target}};
        rec.y_target = y_target;
        return rec;
    }

    double y0p = y_target.p, y0q = y_target.q;
    auto endpoint = [&](double ap, double aq, double& ep, double& eq) {
        const Vec2 x0 = -1.0 * s0.gradient_real(Vec2{ap, aq});
        double xp = x0.p, xq = x0.q, yp = ap, yq = aq;
        integrate_end_real(dh, xp, xq, yp, yq, t, opts.integration);
        ep = yp - y_target.p;
        eq = yq - y_target.q;
    };

    double fp, fq;
    endpoint(y0p, y0q, fp, fq);
    double residual = std::max(std::abs(fp), std::abs(fq));
    int iters = 0;
    double best_p = y0p, best_q = y0q, best = residual;
    int stalled = 0;
    const double h = opts.fd_step;
    while (residual > opts.tolerance) {
        if (iters >= opts.max_iterations)
            throw SolverError("real shooting did not converge at " +
                                  fmt_chord(CVec2(y_target), t) + " (residual " +
                                  fmt_sci(residual) + ")",
                              residual);
        double fpp, fpm, fqp, fqm;
        Mat2 Jm;
        endpoint(y0p + h, y0q, fpp, fqp);
        endpoint(y0p - h, y0q, fpm, fqm);
        Jm.a11 = (fpp - fpm) / (2.0 * h);
        Jm.a21 = (fqp - fqm) / (2.0 * h);
        endpoint(y0p, y0q + h, fpp, fqp);
        endpoint(y0p, y0q - h, fpm, fqm);
        Jm.a12 = (fpp - fpm) / (2.0 * h);
        Jm.a22 = (fqp - fqm) / (2.0 * h);

        const double det = Jm.det();
        if (std::abs(det) < 1e-300)
            throw SolverError("real shooting Jacobian is singular at " +
                                  fmt_chord(CVec2(y_target), t),
                              residual);
        const double dp = (Jm.a22 * fp - Jm.a12 * fq) / det;
        const double dq = (-Jm.a21 * fp + Jm.a11 * fq) / det;
        y0p -= dp;
        y0q -= dq;
        ++iters;
        if (std::max(std::abs(y0p), std::abs(y0q)) > opts.integration.divergence_bound)
            throw SolverError("real shooting iterate diverged at " + fmt_chord(CVec2(y_target), t),
                              residual);
        endpoint(y0p, y0q, fp, fq);
        residual = std::max(std::abs(fp), std::abs(fq));

        stalled = (residual < 0.9 * best) ? 0 : stalled + 1;
        if (residual < best) {
            best = residual;
            best_p = y0p;
            best_q = y0q;
        }
        if (stalled >= 3 && residual > opts.tolerance) {
            if (best <= opts.stall_grace * opts.tolerance) {
                y0p = best_p;
                y0q = best_q;
                break;
            }
            throw SolverError("real shooting stalled at residual " + fmt_sci(best) +
                                  " above tolerance " + fmt_sci(opts.tolerance) + " at " +
                                  fmt_chord(CVec2(y_target), t),
                              best);
        }
    }

    const Vec2 x0 = -1.0 * s0.gradient_real(Vec2{y0p, y0q});
    RealTrajectoryRecord rec = integrate_forward_real(dh, x0, Vec2{y0p, y0q}, t, opts.integration);
    rec.y_target = y_target;
    rec.newton_iterations = iters;
    const Vec2 miss = rec.points.back().y - y_target;
    rec.shoot_residual = std::max(std::abs(miss.p), std::abs(miss.q));
    return rec;
}

complexd accumulate_action(const TrajectoryRecord& rec, const InitialAction& s0) {
    if (rec.points.empty()) throw NumericError("empty trajectory record");
    return s0.value(rec.points.front().y) + rec.dyn_action + I_UNIT * rec.deco_integral;
}

double accumulate_action_real(const RealTrajectoryRecord& rec, const InitialAction& s0) {
    if (rec.points.empty()) throw NumericError("empty trajectory record");
    return s0.value(CVec2(rec.points.front().y)).real() + rec.dyn_action;
}

complexd ActionCache::action(const Vec2& y, double t) {
    const auto key = std::make_tuple(y.p, y.q, t);
    const auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const TrajectoryRecord rec = solve_history(dh_, s0_, CVec2(y), t, opts_);
    const complexd S = accumulate_action(rec, s0_);
    memo_.emplace(key, S);
    return S;
}

SchwartzProbeResult schwartz_probe(const DoubleHamiltonian& dh, const InitialAction& s0,
                                   const Vec2& y, double t, double h,
                                   const ShootingOptions& opts) {
    /* The nested stencils divide the chord-hit residual by ~4 h^2 H, so the
       probe needs the solver far tighter than the defects it measures. */
    ShootingOptions tight = opts;
    tight.tolerance = std::min(opts.tolerance, 1e-13);
    ActionCache cache(dh, s0, tight);

    // x(y, t) = -dS/dy by central differences with the inner step h.
    auto xM = [&](const Vec2& yy, double tt) -> CVec2 {
        const complexd Sp_p = cache.action({yy.p + h, yy.q}, tt);
        const complexd Sp_m = cache.action({yy.p - h, yy.q}, tt);
        const complexd Sq_p = cache.action({yy.p, yy.q + h}, tt);
        const complexd Sq_m = cache.action({yy.p, yy.q - h}, tt);
        return {-(Sp_p - Sp_m) / (2.0 * h), -(Sq_p - Sq_m) / (2.0 * h)};
    };

    SchwartzProbeResult out;

    // Outer derivatives use 2h so the stencils do not collide.
    const double H = 2.0 * h;
    const CVec2 xq_p = xM({y.p, y.q + H}, t);
    const CVec2 xq_m = xM({y.p, y.q - H}, t);
    const CVec2 xp_p = xM({y.p + H, y.q}, t);
    const CVec2 xp_m = xM({y.p - H, y.q}, t);
    const complexd dxp_dyq = (xq_p.p - xq_m.p) / (2.0 * H);
    const complexd dxq_dyp = (xp_p.q - xp_m.q) / (2.0 * H);
    out.sym_defect = std::abs(dxp_dyq - dxq_dyp);

    CVec2 dxdt{};
    if (t >= h) {
        const CVec2 xt_p = xM(y, t + h);
        const CVec2 xt_m = xM(y, t - h);
        dxdt = {(xt_p.p - xt_m.p) / (2.0 * h), (xt_p.q - xt_m.q) / (2.0 * h)};
    } else {
        const CVec2 xt_p = xM(y, t + h);
        const CVec2 xt_0 = xM(y, t);
        dxdt = {(xt_p.p - xt_0.p) / h, (xt_p.q - xt_0.q) / h};
    }
    /* At fixed chord the endpoint anchor obeys
         dx/dt = dHc/dy + (dx/dy) . dHc/dx,
       because the characteristic that reaches y changes with t; the second
       term transports the anchor along the shifting family. Its matrix
       columns are the outer stencils already computed above. */
    const CVec2 x_end = xM(y, t);
    const CVec2 flow = dh.grad_y_c(x_end, CVec2(y));
    const CVec2 gx = dh.grad_x(x_end, CVec2(y));
    const CVec2 col_p{(xp_p.p - xp_m.p) / (2.0 * H), (xp_p.q - xp_m.q) / (2.0 * H)};
    const CVec2 col_q{(xq_p.p - xq_m.p) / (2.0 * H), (xq_p.q - xq_m.q) / (2.0 * H)};
    const CVec2 transport{col_p.p * gx.p + col_p.q * gx.q, col_q.p * gx.p + col_q.q * gx.q};
    out.time_defect = norm_max(dxdt - (flow + transport));
    return out;
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open trajectory dump file: " + path);
    os << "tau,re_p,im_p,re_q,im_q,re_yp,im_yp,re_yq,im_yq\n";
    char line[320];
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
        const auto& pt = rec.points[i];
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.times[i],
                      pt.x.p.real(), pt.x.p.imag(), pt.x.q.real(), pt.x.q.imag(), pt.y.p.real(),
                      pt.y.p.imag(), pt.y.q.real(), pt.y.q.imag());
        os << line;
    }
}

}  // namespace cwkb
