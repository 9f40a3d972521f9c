#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "cwkb/errors.hpp"
#include "cwkb/geometry.hpp"

namespace cwkb {

/* One monomial c * p^dp * q^dq. */
struct Monomial {
    int dp{0};
    int dq{0};
    double c{0.0};
};

namespace detail {
template <typename Scalar>
Scalar pow_int(Scalar base, int n) {
    Scalar r{1.0};
    for (int k = 0; k < n; ++k) r *= base;
    return r;
}
}  // namespace detail

/* Polynomial classical Hamiltonian H(p, q) with real coefficients,
   evaluated exactly (term-wise) at real or complex arguments. */
class PolynomialHamiltonian {
  public:
    PolynomialHamiltonian() = default;

    explicit PolynomialHamiltonian(std::vector<Monomial> terms) : terms_(std::move(terms)) {
        for (const auto& m : terms_) {
            if (m.dp < 0 || m.dq < 0)
                throw ConfigError("monomial degree must be non-negative");
            if (!std::isfinite(m.c))
                throw ConfigError("monomial coefficient must be finite");
        }
    }

    const std::vector<Monomial>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& m : terms_)
            if (m.c != 0.0) d = std::max(d, m.dp + m.dq);
        return d;
    }

    /* True if every non-zero term has total degree exactly 2, so that
       H(x) = x . (M x) for the matrix returned by quadratic_matrix(). */
    bool is_pure_quadratic() const {
        bool any = false;
        for (const auto& m : terms_) {
            if (m.c == 0.0) continue;
            if (m.dp + m.dq != 2) return false;
            any = true;
        }
        return any;
    }

    /* Matrix M with H(p, q) = (p, q) . M (p, q); requires is_pure_quadratic(). */
    Mat2 quadratic_matrix() const {
        if (!is_pure_quadratic())
            throw ConfigError("Hamiltonian is not purely quadratic");
        Mat2 M{};
        for (const auto& m : terms_) {
            if (m.dp == 2) M.a11 += m.c;
            else if (m.dq == 2) M.a22 += m.c;
            else { M.a12 += 0.5 * m.c; M.a21 += 0.5 * m.c; }
        }
        return M;
    }

    /* True if H = c * p^3 exactly (single monomial up to zero terms). */
    bool pure_p_cubed(double& c_out) const {
        c_out = 0.0;
        for (const auto& m : terms_) {
            if (m.c == 0.0) continue;
            if (m.dp == 3 && m.dq == 0) c_out += m.c;
            else return false;
        }
        return c_out != 0.0;
    }

    template <typename Scalar>
    Scalar value(Scalar p, Scalar q) const {
        Scalar s{0.0};
        for (const auto& m : terms_)
            s += m.c * detail::pow_int(p, m.dp) * detail::pow_int(q, m.dq);
        return s;
    }

    template <typename Scalar>
    void gradient(Scalar p, Scalar q, Scalar& hp, Scalar& hq) const {
        hp = Scalar{0.0};
        hq = Scalar{0.0};
        for (const auto& m : terms_) {
            if (m.dp > 0)
                hp += m.c * double(m.dp) * detail::pow_int(p, m.dp - 1) * detail::pow_int(q, m.dq);
            if (m.dq > 0)
                hq += m.c * double(m.dq) * detail::pow_int(p, m.dp) * detail::pow_int(q, m.dq - 1);
        }
    }

    template <typename Scalar>
    void hessian(Scalar p, Scalar q, Scalar& hpp, Scalar& hpq, Scalar& hqq) const {
        hpp = Scalar{0.0};
        hpq = Scalar{0.0};
        hqq = Scalar{0.0};
        for (const auto& m : terms_) {
            if (m.dp > 1)
                hpp += m.c * double(m.dp) * double(m.dp - 1) *
                       detail::pow_int(p, m.dp - 2) * detail::pow_int(q, m.dq);
            if (m.dp > 0 && m.dq > 0)
                hpq += m.c * double(m.dp) * double(m.dq) *
                       detail::pow_int(p, m.dp - 1) * detail::pow_int(q, m.dq - 1);
            if (m.dq > 1)
                hqq += m.c * double(m.dq) * double(m.dq - 1) *
                       detail::pow_int(p, m.dp) * detail::pow_int(q, m.dq - 2);
        }
    }

  private:
    std::vector<Monomial> terms_;
};

/* Linear Lindblad coupling L = l . x_hat with l = l_re + i l_im.
   Derived quantities:
     gamma   = l_im wedge l_re   (dissipation coefficient)
     lambda  = J (l_re + i l_im) (drift/diffusion vector, lambda' + i lambda'') */
struct LindbladCoupling {
    Vec2 l_re{};
    Vec2 l_im{};

    double gamma() const { return wedge(l_im, l_re); }
    Vec2 lambda_re() const { return applyJ(l_re); }
    Vec2 lambda_im() const { return applyJ(l_im); }
    bool is_zero() const {
        return l_re.p == 0.0 && l_re.q == 0.0 && l_im.p == 0.0 && l_im.q == 0.0;
    }
};

/* The double-phase-space generator driving chord dynamics.

   Real part (chord symbol of the commutator plus dissipation):
     Hd(x, y) = H(x - Jy/2) - H(x + Jy/2) - gamma * x.y
   Complexified generator:
     Hc(x, y) = Hd(x, y) - (i/2) [ (lambda'.y)^2 + (lambda''.y)^2 ]

   Trajectories follow dy/dt = -dHc/dx, dx/dt = +dHc/dy. */
class DoubleHamiltonian {
  public:
    DoubleHamiltonian() = default;
    DoubleHamiltonian(PolynomialHamiltonian H, LindbladCoupling L)
        : H_(std::move(H)),
          L_(L),
          gamma_(L.gamma()),
          lam_re_(L.lambda_re()),
          lam_im_(L.lambda_im()) {}

    const PolynomialHamiltonian& hamiltonian() const { return H_; }
    const LindbladCoupling& coupling() const { return L_; }
    double gamma() const { return gamma_; }
    const Vec2& lambda_re() const { return lam_re_; }
    const Vec2& lambda_im() const { return lam_im_; }

    /* Chord tips x -/+ Jy/2 in (p, q) components. */
    template <typename Scalar>
    static void tips(Scalar xp, Scalar xq, Scalar yp, Scalar yq,
                     Scalar& mp, Scalar& mq, Scalar& pp, Scalar& pq) {
        mp = xp + 0.5 * yq;  // minus tip: x - Jy/2
        mq = xq - 0.5 * yp;
        pp = xp - 0.5 * yq;  // plus tip: x + Jy/2
        pq = xq + 0.5 * yp;
    }

    complexd eval(const CVec2& x, const CVec2& y) const {
        complexd mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        return H_.value(mp, mq) - H_.value(pp, pq) - gamma_ * dot(x, y);
    }

    complexd eval_complex(const CVec2& x, const CVec2& y) const {
        const complexd lr = dot(lam_re_, y);
        const complexd li = dot(lam_im_, y);
        return eval(x, y) - 0.5 * I_UNIT * (lr * lr + li * li);
    }

    /* d/dx of both Hd and Hc (the dissipator term carries no x). */
    CVec2 grad_x(const CVec2& x, const CVec2& y) const {
        complexd mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        complexd gmp, gmq, gpp, gpq;
        H_.gradient(mp, mq, gmp, gmq);
        H_.gradient(pp, pq, gpp, gpq);
        return {gmp - gpp - gamma_ * y.p, gmq - gpq - gamma_ * y.q};
    }

    /* d/dy of Hd: (J [grad H(x - Jy/2) + grad H(x + Jy/2)]) / 2 - gamma x. */
    CVec2 grad_y(const CVec2& x, const CVec2& y) const {
        complexd mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        complexd gmp, gmq, gpp, gpq;
        H_.gradient(mp, mq, gmp, gmq);
        H_.gradient(pp, pq, gpp, gpq);
        const complexd sp = gmp + gpp, sq = gmq + gpq;
        return {-0.5 * sq - gamma_ * x.p, 0.5 * sp - gamma_ * x.q};
    }

    /* d/dy of Hc: adds -i (lambda'.y) lambda' - i (lambda''.y) lambda''. */
    CVec2 grad_y_c(const CVec2& x, const CVec2& y) const {
        CVec2 g = grad_y(x, y);
        const complexd lr = dot(lam_re_, y);
        const complexd li = dot(lam_im_, y);
        g.p -= I_UNIT * (lr * lam_re_.p + li * lam_im_.p);
        g.q -= I_UNIT * (lr * lam_re_.q + li * lam_im_.q);
        return g;
    }

    /* d2/dx2 of Hd (and Hc): Hess H(x - Jy/2) - Hess H(x + Jy/2). */
    Mat2c hess_x(const CVec2& x, const CVec2& y) const {
        complexd mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        complexd mpp, mpq, mqq, ppp, ppq, pqq;
        H_.hessian(mp, mq, mpp, mpq, mqq);
        H_.hessian(pp, pq, ppp, ppq, pqq);
        return {mpp - ppp, mpq - ppq, mpq - ppq, mqq - pqq};
    }

    /* Real-arithmetic lane used by the real-trajectory dynamics: the same
       Hd derivatives, with the imaginary dissipative drift dropped. */
    double eval_real(const Vec2& x, const Vec2& y) const {
        double mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        return H_.value(mp, mq) - H_.value(pp, pq) - gamma_ * dot(x, y);
    }

    Vec2 grad_x_real(const Vec2& x, const Vec2& y) const {
        double mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        double gmp, gmq, gpp, gpq;
        H_.gradient(mp, mq, gmp, gmq);
        H_.gradient(pp, pq, gpp, gpq);
        return {gmp - gpp - gamma_ * y.p, gmq - gpq - gamma_ * y.q};
    }

    Vec2 grad_y_real(const Vec2& x, const Vec2& y) const {
        double mp, mq, pp, pq;
        tips(x.p, x.q, y.p, y.q, mp, mq, pp, pq);
        double gmp, gmq, gpp, gpq;
        H_.gradient(mp, mq, gmp, gmq);
        H_.gradient(pp, pq, gpp, gpq);
        return {-0.5 * (gmq + gpq) - gamma_ * x.p, 0.5 * (gmp + gpp) - gamma_ * x.q};
    }

    /* Decoherence-rate integrand (1/2)[(lambda'.y)^2 + (lambda''.y)^2],
       complex for complex chords, real and >= 0 for real chords. */
    complexd deco_rate(const CVec2& y) const {
        const complexd lr = dot(lam_re_, y);
        const complexd li = dot(lam_im_, y);
        return 0.5 * (lr * lr + li * li);
    }
    double deco_rate_real(const Vec2& y) const {
        const double lr = dot(lam_re_, y);
        const double li = dot(lam_im_, y);
        return 0.5 * (lr * lr + li * li);
    }

  private:
    PolynomialHamiltonian H_{};
    LindbladCoupling L_{};
    double gamma_{0.0};
    Vec2 lam_re_{};
    Vec2 lam_im_{};
};

}  // namespace cwkb
