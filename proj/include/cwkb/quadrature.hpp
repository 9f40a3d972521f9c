#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "cwkb/errors.hpp"
#include "cwkb/geometry.hpp"

namespace cwkb {

/* Composite Simpson rule over uniformly spaced samples with spacing h.
   Requires an even interval count; an odd count is closed with a 3/8 rule
   on the final three intervals so stored trajectories of any length
   integrate at fourth order. */
template <typename T>
T simpson_uniform(const std::vector<T>& f, double h) {
    const std::size_t n = f.size();
    if (n == 0) throw QuadratureError("simpson: no samples");
    if (n == 1) return T{0.0};
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    if (n == 3) return (h / 3.0) * (f[0] + 4.0 * f[1] + f[2]);

    std::size_t intervals = n - 1;
    std::size_t m = intervals;       // intervals handled by the 1/3 rule
    bool tail38 = false;
    if (intervals % 2 != 0) {
        m = intervals - 3;
        tail38 = true;
    }

    T s{0.0};
    if (m > 0) {
        s = f[0] + f[m];
        for (std::size_t k = 1; k < m; k += 2) s += 4.0 * f[k];
        for (std::size_t k = 2; k < m; k += 2) s += 2.0 * f[k];
        s *= h / 3.0;
    }
    if (tail38) {
        const std::size_t b = m;
        s += (3.0 * h / 8.0) * (f[b] + 3.0 * f[b + 1] + 3.0 * f[b + 2] + f[b + 3]);
    }
    return s;
}

namespace detail {

template <typename F>
complexd adaptive_simpson_rec(const F& f, double a, double b, complexd fa, complexd fm,
                              complexd fb, complexd whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const complexd flm = f(lm), frm = f(rm);
    const complexd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const complexd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const complexd delta = left + right - whole;
    if (depth <= 0)
        throw QuadratureError("adaptive Simpson: maximum depth reached");
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/* Adaptive Simpson quadrature of a complex-valued integrand on [a, b],
   absolute tolerance tol. */
template <typename F>
complexd adaptive_simpson(const F& f, double a, double b, double tol = 1e-12,
                          int max_depth = 48) {
    if (a == b) return complexd{0.0};
    const complexd fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const complexd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

namespace detail {

/* 15-point Kronrod extension of 7-point Gauss on [-1, 1]. Stored as long
   double so extended-precision integrands keep the full rule accuracy; the
   constants are pinned by the exactness unit tests (degree 22). */
inline constexpr long double kGK15X[8] = {
    0.9914553711208126392069L, 0.9491079123427585245262L, 0.8648644233597690727897L,
    0.7415311855993944398639L, 0.5860872354676911302941L, 0.4058451513773971669066L,
    0.2077849550078984676007L, 0.0L};
inline constexpr long double kGK15WK[8] = {
    0.02293532201052922496373L, 0.0630920926299785532907L, 0.1047900103222501838399L,
    0.1406532597155259187452L, 0.1690047266392679028266L, 0.1903505780647854099133L,
    0.2044329400752988924142L, 0.209482141084727828013L};
inline constexpr long double kGK15WG[4] = {
    0.1294849661688696932706L, 0.2797053914892766679015L, 0.3818300505051189449504L,
    0.4179591836734693877551L};

/* One Gauss-Kronrod panel. The complex value type is deduced from the
   integrand so callers can integrate in double or long double. */
template <typename F>
void gk15_panel(const F& f, double a, double b, decltype(f(0.0))& kronrod,
                typename decltype(f(0.0))::value_type& err) {
    using C = decltype(f(0.0));
    using R = typename C::value_type;
    const R c = R(0.5) * (R(a) + R(b));
    const R hl = R(0.5) * (R(b) - R(a));
    C resk{R(0)}, resg{R(0)};
    for (int j = 0; j < 7; ++j) {
        const R x = hl * R(kGK15X[j]);
        const C fv = f(c - x) + f(c + x);
        resk += R(kGK15WK[j]) * fv;
        if (j % 2 == 1) resg += R(kGK15WG[j / 2]) * fv;
    }
    const C fc = f(c);
    resk += R(kGK15WK[7]) * fc;
    resg += R(kGK15WG[3]) * fc;
    kronrod = hl * resk;
    err = std::abs(hl * (resk - resg));
}

}  // namespace detail

/* Globally adaptive Gauss-Kronrod quadrature (bisection of the interval
   with the largest error estimate). Tolerance is
   max(abs_tol, rel_tol * |integral|). Integrates in the integrand's own
   complex type; pass a long-double integrand for extended precision. */
template <typename F>
decltype(std::declval<F>()(0.0)) adaptive_gauss_kronrod(const F& f, double a, double b,
                                                        double rel_tol = 1e-12,
                                                        double abs_tol = 0.0,
                                                        int max_panels = 4000) {
    using C = decltype(f(0.0));
    using R = typename C::value_type;
    struct Panel {
        double a, b;
        R err;
        C val;
    };
    std::vector<Panel> panels;
    Panel p0{a, b, R(0), {}};
    detail::gk15_panel(f, a, b, p0.val, p0.err);
    panels.push_back(p0);

    for (;;) {
        C total{R(0)};
        R err_total = R(0);
        std::size_t worst = 0;
        R worst_err = R(-1);
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].val;
            err_total += panels[i].err;
            if (panels[i].err > worst_err) {
                worst_err = panels[i].err;
                worst = i;
            }
        }
        const R tol = std::max(R(abs_tol), R(rel_tol) * std::abs(total));
        if (err_total <= tol) return total;
        if ((int)panels.size() >= max_panels)
            throw QuadratureError("adaptive Gauss-Kronrod: panel limit reached");

        const Panel split = panels[worst];
        const double m = 0.5 * (split.a + split.b);
        Panel l{split.a, m, R(0), {}}, r{m, split.b, R(0), {}};
        detail::gk15_panel(f, l.a, l.b, l.val, l.err);
        detail::gk15_panel(f, r.a, r.b, r.val, r.err);
        panels[worst] = l;
        panels.push_back(r);
    }
}

/* Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
   the Legendre recurrence. Deterministic; cached by the caller if needed. */
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw QuadratureError("gauss_legendre: order must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th positive root.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace cwkb
