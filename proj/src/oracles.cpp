#include "cwkb/oracles.hpp"

#include <cmath>

#include "cwkb/expm2.hpp"
#include "cwkb/quadrature.hpp"

namespace cwkb {

Vec2 quadratic_initial_chord(const QuadraticModel& m, const Vec2& y, double t) {
    const Mat2 J{0, -1, 1, 0};
    const Mat2 R = expm2(2.0 * t * (J * m.hmat));
    const double damp = std::exp(-m.coupling.gamma() * t);
    return damp * R.transpose().apply(y);
}

complexd exact_quadratic_chord(const QuadraticModel& m,
                               const std::function<complexd(const Vec2&)>& chi0, const Vec2& y,
                               double t, double hbar) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const Vec2 y0 = quadratic_initial_chord(m, y, t);

    const Mat2 J{0, -1, 1, 0};
    const Mat2 JH = J * m.hmat;
    const double gamma = m.coupling.gamma();
    const Vec2 lr = m.coupling.lambda_re();
    const Vec2 li = m.coupling.lambda_im();

    complexd damping{0.0};
    if (!m.coupling.is_zero() && t > 0.0) {
        auto integrand = [&](double s) -> complexd {
            const Mat2 Rs = expm2(2.0 * s * JH);
            const Vec2 v = std::exp(-gamma * s) * Rs.transpose().apply(y);
            const double a = dot(lr, v);
            const double b = dot(li, v);
            return a * a + b * b;
        };
        damping = adaptive_simpson(integrand, 0.0, t, 1e-12);
    }
    return chi0(y0) * std::exp(-damping / (2.0 * hbar));
}

complexd exact_cubic_cat_chord(const CatParams& cp, double l, const Vec2& y, double t,
                               double hbar, double c) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const double yp = y.p, yq = y.q;
    const complexd den = 1.0 + 3.0 * I_UNIT * c * t * yq;
    const double u = yp + cp.dQ;
    const double P = cp.P, Q = cp.Q;

    const complexd exponent =
        (4.0 * P * P - u * u - 4.0 * I_UNIT * P * u) / (4.0 * hbar * den) -
        (yq - cp.dP) * (yq - cp.dP) / (4.0 * hbar) - l * l * t * yq * yq / (2.0 * hbar) -
        P * P / hbar - I_UNIT * Q * yq / hbar - I_UNIT * c * t * yq * yq * yq / (4.0 * hbar);

    return std::exp(exponent) / std::sqrt(den);
}

complexd cubic_saddle_point_chord(const CatParams& cp, double l, const Vec2& y, double t,
                                  double hbar, double c) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const double yq = y.q;
    const complexd den = 1.0 + 3.0 * I_UNIT * c * t * yq;
    if (std::abs(den) < 1e-12)
        throw NumericError("saddle evaluation at a focal point: 1 + 3 i c t y_q vanished");

    const double u = y.p + cp.dQ;
    const complexd p0 = (cp.P - 0.5 * I_UNIT * u) / den;
    const CVec2 y0{y.p + 6.0 * p0 * c * t * yq, complexd{yq, 0.0}};

    const InitialAction s0 = InitialAction::cat(cp);
    const complexd S = s0.value(y0) +
                       t * (3.0 * c * p0 * p0 * yq - c * yq * yq * yq / 4.0 +
                            0.5 * I_UNIT * l * l * yq * yq);

    /* Continuously tracked branch of den^{-1/2}. For real chords the path
       tau -> 1 + 3 i c tau y_q never crosses the negative real axis, so the
       winding is zero; the tracking is defensive for reuse with complex
       deformations. */
    double theta = 0.0;
    complexd prev{1.0, 0.0};
    const int nsub = 64;
    for (int k = 1; k <= nsub; ++k) {
        const complexd cur = 1.0 + 3.0 * I_UNIT * c * (t * k / nsub) * yq;
        theta += std::arg(cur / prev);
        prev = cur;
    }
    const complexd root = std::exp(complexd{0.0, -0.5 * theta}) / std::sqrt(std::abs(den));

    return root * std::exp(I_UNIT * S / hbar);
}

complexd numeric_cubic_chord(const CubicQuadratureState& state, double l, const Vec2& y, double t,
                             double hbar, double c, double rel_tol) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const double yp = y.p, yq = y.q;
    const complexd prefactor =
        std::exp(complexd{-t * l * l * yq * yq / (2.0 * hbar), -c * t * yq * yq * yq / (4.0 * hbar)});

    if (state.kind == CubicQuadratureState::Kind::delta) {
        const double xp = state.x.p, xq = state.x.q;
        return prefactor *
               std::exp(-I_UNIT * (yq * xq + yp * xp + 3.0 * c * t * yq * xp * xp) / hbar);
    }

    const Vec2 ca = state.cp.center_a();
    const Vec2 cb = state.cp.center_b();

    const double hb = hbar;
    const double Pa = ca.p, Qa = ca.q, Pb = cb.p, Qb = cb.q;
    const double u = 0.5 * yq;
    const double amp = 1.0 / std::sqrt(M_PI * hb);

    /* Exponent of the full integrand at (complex) momentum p:
       psi_X(p) = (pi hbar)^{-1/4} exp(-(p - P_X)^2 / 2 hbar - i Q_X p / hbar)
       (this phase convention reproduces the initial pair chord with no extra
       constant phase), the kernel taken at p +/- y_q/2, times the cubic
       evolution oscillation. */
    auto expo = [&](const complexd& p) -> complexd {
        const complexd p1 = p + u, p2 = p - u;
        const complexd phase = -I_UNIT * (p1 * Qa - p2 * Qb) / hb;
        const complexd damp =
            -((p1 - Pa) * (p1 - Pa) + (p2 - Pb) * (p2 - Pb)) / (2.0 * hb);
        const complexd evo = -I_UNIT * (yp * p + 3.0 * c * t * yq * p * p) / hb;
        return phase + damp + evo;
    };

    /* On the real axis the oscillation cancels the envelope by tens of
       digits at far grid corners (|chi| ~ 1e-41 against an O(1e-9) envelope
       at t = 0.2, y = (3, 3)), beyond any fixed-precision quadrature. The
       integrand is an entire Gaussian, so the contour is shifted to the
       horizontal line through its stationary point, where the modulus peaks
       at the result's own scale and plain double precision delivers ~1e-12
       relative accuracy. The stationary point is measured from the exponent
       itself: exact central differences of a quadratic, audited below. */
    const complexd e0 = expo(complexd{0.0});
    const complexd ep = expo(complexd{1.0});
    const complexd em = expo(complexd{-1.0});
    const complexd alpha = 0.5 * (ep + em) - e0;
    const complexd beta = 0.5 * (ep - em);
    const complexd probe_at{0.37, 0.21};
    const complexd audit = expo(probe_at) - (alpha * probe_at * probe_at + beta * probe_at + e0);
    if (std::abs(audit) > 1e-9 * (1.0 + std::abs(expo(probe_at))))
        throw QuadratureError("momentum-integral exponent is not quadratic; contour shift invalid");
    if (alpha.real() >= 0.0)
        throw QuadratureError("momentum-integral envelope does not decay; contour shift invalid");
    const complexd pstar = -beta / (2.0 * alpha);

    // Re alpha = -1/hbar: the shifted-path modulus falls below 1e-16 of its
    // peak at |s| = w.
    const double w = std::sqrt(std::log(1e16) / -alpha.real());
    auto g = [&](double s) -> complexd { return std::exp(expo(pstar + s)); };
    const double scale = std::abs(g(0.0));
    const double abs_floor = 1e-17 * scale * 2.0 * w;
    const complexd integral = adaptive_gauss_kronrod(g, -w, w, rel_tol, abs_floor);
    return prefactor * amp * integral;
}

complexd exact_cubic_mixed_propagator(const Vec2& x, double l, const Vec2& y, double t,
                                      double hbar, double c) {
    if (hbar <= 0.0) throw ConfigError("hbar must be positive");
    const double yp = y.p, yq = y.q;
    return std::exp(complexd{-t * l * l * yq * yq / (2.0 * hbar), 0.0} +
                    -I_UNIT * (c * t * yq * yq * yq / 4.0 + yq * x.q + yp * x.p +
                               3.0 * c * t * yq * x.p * x.p) /
                        hbar);
}

}  // namespace cwkb
