#pragma once

#include <variant>
#include <vector>

#include "cwkb/geometry.hpp"

namespace cwkb {

/* Midpoint parameterisation of a two-Gaussian superposition:
   P, Q are the midpoints, dP = P_a - P_b, dQ = Q_a - Q_b. */
struct CatParams {
    double P{0}, Q{0}, dP{0}, dQ{0};

    Vec2 center_a() const { return {P + 0.5 * dP, Q + 0.5 * dQ}; }
    Vec2 center_b() const { return {P - 0.5 * dP, Q - 0.5 * dQ}; }

    static CatParams from_centers(const Vec2& a, const Vec2& b) {
        return {0.5 * (a.p + b.p), 0.5 * (a.q + b.q), a.p - b.p, a.q - b.q};
    }
    /* Parameters of the transposed (b, a) cross term. */
    CatParams swapped() const { return {P, Q, -dP, -dQ}; }
};

/* Generating function S0(y) of the initial chord function,
   chi0(y) = exp(i S0(y) / hbar). The initial Lagrangian surface is
   x0(y) = -dS0/dy. */
class InitialAction {
  public:
    struct PlaneWave {
        Vec2 x;
    };
    /* Cross term of a pair of coherent states:
       S0 = -Q y_q - P (y_p + dQ) + (i/4)(y_p + dQ)^2 + (i/4)(y_q - dP)^2.
       With dP = dQ = 0 this is a single Gaussian centred at (P, Q). */
    struct Cat {
        CatParams cp;
    };
    /* S0(y) = y . M y + v . y + s. */
    struct QuadraticForm {
        Mat2c M;
        CVec2 v;
        complexd s{0.0};
    };
    struct PolyTerm {
        int dyp{0}, dyq{0};
        complexd c{0.0};
    };
    struct CustomPoly {
        std::vector<PolyTerm> terms;
    };

    InitialAction() : kind_(PlaneWave{Vec2{}}) {}
    InitialAction(PlaneWave k) : kind_(k) {}
    InitialAction(Cat k) : kind_(k) {}
    InitialAction(QuadraticForm k) : kind_(k) {}
    InitialAction(CustomPoly k) : kind_(k) {}

    static InitialAction plane_wave(const Vec2& x) { return InitialAction(PlaneWave{x}); }
    static InitialAction cat(const CatParams& cp) { return InitialAction(Cat{cp}); }
    static InitialAction quadratic_form(const Mat2c& M, const CVec2& v, complexd s) {
        return InitialAction(QuadraticForm{M, v, s});
    }
    /* Gaussian centred at X: S0 = -X.y + (i/4) y.y. */
    static InitialAction gaussian(const Vec2& X) {
        Mat2c M{0.25 * I_UNIT, 0.0, 0.0, 0.25 * I_UNIT};
        return quadratic_form(M, CVec2{-X.p, -X.q}, 0.0);
    }
    static InitialAction custom(std::vector<PolyTerm> terms) {
        return InitialAction(CustomPoly{std::move(terms)});
    }

    complexd value(const CVec2& y) const {
        return std::visit([&](const auto& k) { return value_impl(k, y); }, kind_);
    }

    CVec2 gradient(const CVec2& y) const {
        return std::visit([&](const auto& k) { return gradient_impl(k, y); }, kind_);
    }

    /* Whether S0 is real-valued (with real gradient) on real chords; the
       real-trajectory lane requires this. */
    bool real_on_real_chords() const {
        if (std::holds_alternative<PlaneWave>(kind_)) return true;
        if (const auto* q = std::get_if<QuadraticForm>(&kind_)) {
            return q->M.a11.imag() == 0 && q->M.a12.imag() == 0 && q->M.a21.imag() == 0 &&
                   q->M.a22.imag() == 0 && q->v.p.imag() == 0 && q->v.q.imag() == 0 &&
                   q->s.imag() == 0;
        }
        if (const auto* c = std::get_if<CustomPoly>(&kind_)) {
            for (const auto& t : c->terms)
                if (t.c.imag() != 0.0) return false;
            return true;
        }
        return false;
    }

    double value_real(const Vec2& y) const { return value(CVec2(y)).real(); }
    Vec2 gradient_real(const Vec2& y) const {
        const CVec2 g = gradient(CVec2(y));
        return {g.p.real(), g.q.real()};
    }

    const PlaneWave* as_plane_wave() const { return std::get_if<PlaneWave>(&kind_); }
    const Cat* as_cat() const { return std::get_if<Cat>(&kind_); }

  private:
    static complexd value_impl(const PlaneWave& k, const CVec2& y) {
        return -(k.x.p * y.p + k.x.q * y.q);
    }
    static CVec2 gradient_impl(const PlaneWave& k, const CVec2&) {
        return {-k.x.p, -k.x.q};
    }

    static complexd value_impl(const Cat& k, const CVec2& y) {
        const complexd u = y.p + k.cp.dQ;
        const complexd v = y.q - k.cp.dP;
        return -k.cp.Q * y.q - k.cp.P * u + 0.25 * I_UNIT * (u * u + v * v);
    }
    static CVec2 gradient_impl(const Cat& k, const CVec2& y) {
        const complexd u = y.p + k.cp.dQ;
        const complexd v = y.q - k.cp.dP;
        return {-k.cp.P + 0.5 * I_UNIT * u, -k.cp.Q + 0.5 * I_UNIT * v};
    }

    static complexd value_impl(const QuadraticForm& k, const CVec2& y) {
        const CVec2 My = k.M.apply(y);
        return dot(y, My) + dot(k.v, y) + k.s;
    }
    static CVec2 gradient_impl(const QuadraticForm& k, const CVec2& y) {
        // d/dy (y . M y) = (M + M^T) y
        return {(k.M.a11 + k.M.a11) * y.p + (k.M.a12 + k.M.a21) * y.q + k.v.p,
                (k.M.a21 + k.M.a12) * y.p + (k.M.a22 + k.M.a22) * y.q + k.v.q};
    }

    static complexd value_impl(const CustomPoly& k, const CVec2& y) {
        complexd s{0.0};
        for (const auto& t : k.terms)
            s += t.c * detail_pow(y.p, t.dyp) * detail_pow(y.q, t.dyq);
        return s;
    }
    static CVec2 gradient_impl(const CustomPoly& k, const CVec2& y) {
        CVec2 g{};
        for (const auto& t : k.terms) {
            if (t.dyp > 0)
                g.p += t.c * double(t.dyp) * detail_pow(y.p, t.dyp - 1) * detail_pow(y.q, t.dyq);
            if (t.dyq > 0)
                g.q += t.c * double(t.dyq) * detail_pow(y.p, t.dyp) * detail_pow(y.q, t.dyq - 1);
        }
        return g;
    }

    static complexd detail_pow(complexd b, int n) {
        complexd r{1.0};
        for (int i = 0; i < n; ++i) r *= b;
        return r;
    }

    std::variant<PlaneWave, Cat, QuadraticForm, CustomPoly> kind_;
};

}  // namespace cwkb
