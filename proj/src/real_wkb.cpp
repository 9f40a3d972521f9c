#include "cwkb/real_wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cwkb/errors.hpp"
#include "cwkb/quadrature.hpp"
#include "cwkb/threading.hpp"

namespace cwkb {

RealTrajectoryRecord real_history(const DoubleHamiltonian& dh, const InitialAction& s0,
                                  const Vec2& y, double t, const ShootingOptions& opts) {
    return solve_history_real(dh, s0, y, t, opts);
}

double decoherence_functional(const RealTrajectoryRecord& rec) { return rec.deco_integral; }

ChordValue chord_real_wkb(const DoubleHamiltonian& dh, const InitialAction& s0, const Vec2& y,
                          double t, double hbar, const ShootingOptions& opts) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const RealTrajectoryRecord rec = real_history(dh, s0, y, t, opts);
    const double S = accumulate_action_real(rec, s0);
    const double D = decoherence_functional(rec);
    ChordValue out;
    out.y = y;
    out.t = t;
    out.action = complexd{S, D};
    out.deco = D;
    out.value = std::exp(complexd{-D / hbar, S / hbar});
    return out;
}

MixedPropagatorValue mixed_propagator(const DoubleHamiltonian& dh, const Vec2& x, const Vec2& y,
                                      double t, double hbar, const ShootingOptions& opts) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const InitialAction s0 = InitialAction::plane_wave(x);
    const RealTrajectoryRecord rec = real_history(dh, s0, y, t, opts);
    MixedPropagatorValue out;
    out.x = x;
    out.y = y;
    out.t = t;
    out.phase_action = accumulate_action_real(rec, s0);
    out.deco = decoherence_functional(rec);
    out.value = std::exp(complexd{-out.deco / hbar, out.phase_action / hbar});
    return out;
}

namespace {

/* Full complex mixed exponent S + i D for the history anchored at x. */
complexd mixed_action(const DoubleHamiltonian& dh, const Vec2& x, const Vec2& y, double t,
                      const ShootingOptions& opts) {
    const InitialAction s0 = InitialAction::plane_wave(x);
    const RealTrajectoryRecord rec = real_history(dh, s0, y, t, opts);
    return complexd{accumulate_action_real(rec, s0), rec.deco_integral};
}

}  // namespace

double grad_x_action_probe(const DoubleHamiltonian& dh, const Vec2& x, const Vec2& y, double t,
                           double h, const ShootingOptions& opts) {
    const complexd dSdxp = (mixed_action(dh, {x.p + h, x.q}, y, t, opts) -
                            mixed_action(dh, {x.p - h, x.q}, y, t, opts)) /
                           (2.0 * h);
    const complexd dSdxq = (mixed_action(dh, {x.p, x.q + h}, y, t, opts) -
                            mixed_action(dh, {x.p, x.q - h}, y, t, opts)) /
                           (2.0 * h);
    const RealTrajectoryRecord rec =
        real_history(dh, InitialAction::plane_wave(x), y, t, opts);
    const Vec2 y0 = rec.points.front().y;
    return norm_max(CVec2{dSdxp + y0.p, dSdxq + y0.q});
}

complexd propagate_state_via_mixed(const DoubleHamiltonian& dh,
                                   const std::function<double(const Vec2&)>& w0,
                                   const SupportBox& box, const Vec2& y, double t, double hbar,
                                   const MixedQuadratureOptions& opts) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    if (!(box.p_max > box.p_min) || !(box.q_max > box.q_min))
        throw ConfigError("support box is empty");

    auto evaluate = [&](int n) -> complexd {
        std::vector<double> xs, ws;
        gauss_legendre(n, xs, ws);
        const double cp = 0.5 * (box.p_min + box.p_max), hp = 0.5 * (box.p_max - box.p_min);
        const double cq = 0.5 * (box.q_min + box.q_max), hq = 0.5 * (box.q_max - box.q_min);

        /* Node contributions are computed in parallel but summed serially in
           index order, so the result is independent of the thread count. */
        std::vector<complexd> vals((std::size_t)n * n, complexd{0.0});
        parallel_for((std::size_t)n * n, opts.threads, [&](std::size_t idx) {
            const int i = (int)(idx / n), j = (int)(idx % n);
            const Vec2 x{cp + hp * xs[i], cq + hq * xs[j]};
            const double w = w0(x);
            if (w == 0.0) return;
            vals[idx] = ws[i] * ws[j] * w * mixed_propagator(dh, x, y, t, hbar, opts.shooting).value;
        });
        complexd acc{0.0};
        for (const complexd& v : vals) acc += v;
        return hp * hq * acc;
    };

    complexd prev = evaluate(opts.initial_nodes);
    for (int n = 2 * opts.initial_nodes; n <= opts.max_nodes; n *= 2) {
        const complexd cur = evaluate(n);
        const double delta = std::abs(cur - prev);
        if (delta <= std::max(opts.abs_tol, opts.rel_tol * std::abs(cur))) return cur;
        prev = cur;
    }
    throw QuadratureError("state propagation quadrature did not converge by node doubling");
}

complexd gaussian_chord_evolution(const DoubleHamiltonian& dh, const Vec2& X, const Vec2& k,
                                  double c, const Vec2& y, double t, double hbar,
                                  const ShootingOptions& opts) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");

    const complexd SX = mixed_action(dh, X, y, t, opts);
    const RealTrajectoryRecord recX =
        real_history(dh, InitialAction::plane_wave(X), y, t, opts);
    const Vec2 y0X = recX.points.front().y;

    // M = d y(0) / d x by central differences, then symmetrised.
    const double hM = 1e-4 * (1.0 + std::max(std::abs(X.p), std::abs(X.q)));
    auto y0_at = [&](const Vec2& x) {
        return real_history(dh, InitialAction::plane_wave(x), y, t, opts).points.front().y;
    };
    const Vec2 ypp = y0_at({X.p + hM, X.q}), ypm = y0_at({X.p - hM, X.q});
    const Vec2 yqp = y0_at({X.p, X.q + hM}), yqm = y0_at({X.p, X.q - hM});
    Mat2 M{(ypp.p - ypm.p) / (2 * hM), (yqp.p - yqm.p) / (2 * hM),
           (ypp.q - ypm.q) / (2 * hM), (yqp.q - yqm.q) / (2 * hM)};
    const double asym = std::abs(M.a12 - M.a21);
    Mat2 Msym{M.a11, 0.5 * (M.a12 + M.a21), 0.5 * (M.a12 + M.a21), M.a22};
    if (asym > 1e-4 * (1.0 + std::abs(M.a11) + std::abs(M.a22)))
        throw NumericError("chord-map Jacobian is not symmetric; action is not a clean generating function here");

    // Expansion-validity probe at the Gaussian width sqrt(hbar): the cubic
    // remainder must stay well below the quadratic term.
    const double delta = std::sqrt(hbar);
    const double floor_val = 1e-12 * (1.0 + std::abs(SX));
    {
        const complexd Spp = mixed_action(dh, {X.p + delta, X.q}, y, t, opts);
        const complexd Spm = mixed_action(dh, {X.p - delta, X.q}, y, t, opts);
        const complexd Sqp = mixed_action(dh, {X.p, X.q + delta}, y, t, opts);
        const complexd Sqm = mixed_action(dh, {X.p, X.q - delta}, y, t, opts);
        const double second_p = std::abs(Spp + Spm - 2.0 * SX);
        const double second_q = std::abs(Sqp + Sqm - 2.0 * SX);
        // odd residual after removing the exact linear term dS/dx = -y(0)
        const double third_p = std::abs(Spp - Spm + 2.0 * delta * y0X.p);
        const double third_q = std::abs(Sqp - Sqm + 2.0 * delta * y0X.q);
        if (third_p > 0.1 * std::max(second_p, floor_val) ||
            third_q > 0.1 * std::max(second_q, floor_val))
            throw ExpansionError(
                "quadratic expansion of the mixed action is invalid at the Gaussian width");
    }

    const Mat2c A{1.0 + 0.5 * I_UNIT * Msym.a11, 0.5 * I_UNIT * Msym.a12,
                  0.5 * I_UNIT * Msym.a21, 1.0 + 0.5 * I_UNIT * Msym.a22};
    const CVec2 b{y0X.p + k.p, y0X.q + k.q};
    const CVec2 Ainv_b = A.solve(b);
    const complexd quad = dot(b, Ainv_b);
    const complexd detA = A.det();

    return std::exp(I_UNIT * (SX - (k.p * X.p + k.q * X.q) - c) / hbar) *
           std::exp(-quad / (4.0 * hbar)) / std::sqrt(detA);
}

complexd perturbation_error_estimate(const DoubleHamiltonian& dh, const InitialAction& s0,
                                     const Vec2& y, double t, const ShootingOptions& opts) {
    const RealTrajectoryRecord rec = real_history(dh, s0, y, t, opts);
    const Vec2 x0 = rec.points.front().x;
    const Vec2 y0 = rec.points.front().y;
    const Mat2c Hxx = dh.hess_x(CVec2(x0), CVec2(y0));
    const Vec2 lr = dh.lambda_re();
    const Vec2 li = dh.lambda_im();
    auto contract = [&](const Vec2& v) {
        return (Hxx.a11 * v.p * v.p + (Hxx.a12 + Hxx.a21) * v.p * v.q + Hxx.a22 * v.q * v.q);
    };
    const double ar = dot(lr, y);
    const double ai = dot(li, y);
    return (t * t * t / 6.0) * (ar * ar * contract(lr) + ai * ai * contract(li));
}

namespace {

struct FitResult {
    double slope{std::numeric_limits<double>::quiet_NaN()};
    double residual{std::numeric_limits<double>::quiet_NaN()};
};

/* Least-squares slope of log|v| against log u; RMS residual in log space. */
FitResult loglog_fit(const std::vector<double>& u, const std::vector<double>& v) {
    const std::size_t n = u.size();
    if (n < 2) return {};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(u[i]);
        ly[i] = std::log(v[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {};
    FitResult fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.slope * lx[i] + intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> out(n);
    const double r = std::pow(b / a, 1.0 / (n - 1));
    for (int i = 0; i < n; ++i) out[i] = a * std::pow(r, i);
    return out;
}

}  // namespace

ScalingReport scaling_probe(const ScalingProbeSetup& setup) {
    if (!setup.s0.real_on_real_chords())
        throw ConfigError("scaling probe requires a real initial action");

    auto coupling_at = [&](double l) {
        LindbladCoupling L;
        L.l_re = Vec2{l * setup.coupling_direction.p, l * setup.coupling_direction.q};
        L.l_im = Vec2{0.0, 0.0};
        return L;
    };

    auto measure = [&](double t, double l) -> ScalingRow {
        const DoubleHamiltonian dh(setup.hamiltonian, coupling_at(l));
        const TrajectoryRecord rc = solve_history(dh, setup.s0, CVec2(setup.y), t, setup.shooting);
        const complexd Sc = accumulate_action(rc, setup.s0);
        const RealTrajectoryRecord rr = solve_history_real(dh, setup.s0, setup.y, t, setup.shooting);
        const double Sr = accumulate_action_real(rr, setup.s0);
        const double D = rr.deco_integral;
        return {t, l, Sc - complexd{Sr, D}, D};
    };

    ScalingReport rep;
    for (double t : setup.t_list) rep.t_rows.push_back(measure(t, setup.l_ref));
    for (double l : setup.l_list) rep.l_rows.push_back(measure(setup.t_ref, l));

    // Leading-order Hessian contraction at the reference start point, per
    // unit coupling (diagnostic for degenerate sweeps).
    {
        const DoubleHamiltonian dh(setup.hamiltonian, coupling_at(1.0));
        const RealTrajectoryRecord rr =
            solve_history_real(dh, setup.s0, setup.y, setup.t_ref, setup.shooting);
        const Mat2c Hxx =
            dh.hess_x(CVec2(rr.points.front().x), CVec2(rr.points.front().y));
        const Vec2 lr = dh.lambda_re();
        rep.estimate_contraction =
            (Hxx.a11 * lr.p * lr.p + (Hxx.a12 + Hxx.a21) * lr.p * lr.q + Hxx.a22 * lr.q * lr.q)
                .real();
    }

    auto fit_rows = [&](const std::vector<ScalingRow>& rows, bool vs_t, bool& degenerate,
                        double& slope, double& residual) {
        std::vector<double> u, v;
        double peak = 0.0;
        for (const auto& r : rows) peak = std::max(peak, std::abs(r.dP));
        degenerate = peak < rep.degeneracy_floor;
        if (degenerate) return;
        for (const auto& r : rows) {
            const double m = std::abs(r.dP);
            if (m <= 0.0) continue;
            u.push_back(vs_t ? r.t : r.l);
            v.push_back(m);
        }
        const FitResult fit = loglog_fit(u, v);
        slope = fit.slope;
        residual = fit.residual;
    };

    fit_rows(rep.t_rows, true, rep.t_degenerate, rep.t_exponent, rep.t_fit_residual);
    fit_rows(rep.l_rows, false, rep.l_degenerate, rep.l_exponent, rep.l_fit_residual);

    {
        std::vector<double> u, v;
        for (const auto& r : rep.t_rows) {
            if (r.deco > 0.0) {
                u.push_back(r.t);
                v.push_back(r.deco);
            }
        }
        const FitResult fit = loglog_fit(u, v);
        rep.deco_exponent = fit.slope;
        rep.deco_fit_residual = fit.residual;
    }
    return rep;
}

ScalingProbeSetup quartic_scaling_preset() {
    ScalingProbeSetup s;
    s.hamiltonian = PolynomialHamiltonian({{0, 4, 0.25}});
    s.coupling_direction = Vec2{1.0, 0.0};
    s.s0 = InitialAction::plane_wave(Vec2{0.5, 0.5});
    s.y = Vec2{0.2, 1.0};
    s.t_list = geomspace(0.05, 0.4, 7);
    s.l_list = geomspace(0.05, 0.4, 7);
    s.t_ref = 0.2;
    s.l_ref = 0.2;
    s.hbar = 1.0;
    return s;
}

ScalingProbeSetup cubic_scaling_preset() {
    ScalingProbeSetup s = quartic_scaling_preset();
    s.hamiltonian = PolynomialHamiltonian({{3, 0, 1.0}});
    return s;
}

}  // namespace cwkb
