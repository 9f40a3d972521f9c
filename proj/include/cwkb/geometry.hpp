#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "cwkb/errors.hpp"

namespace cwkb {

using complexd = std::complex<double>;

inline constexpr complexd I_UNIT{0.0, 1.0};

/* Phase-space vector x = (p, q). The symplectic form is
   J = [[0, -1], [1, 0]] acting on (p, q) ordering. */
struct Vec2 {
    double p{0.0};
    double q{0.0};

    Vec2() = default;
    Vec2(double p_, double q_) : p(p_), q(q_) {
        if (!std::isfinite(p) || !std::isfinite(q))
            throw NumericError("phase-space vector has non-finite component");
    }
};

struct CVec2 {
    complexd p{0.0, 0.0};
    complexd q{0.0, 0.0};

    CVec2() = default;
    CVec2(complexd p_, complexd q_) : p(p_), q(q_) {
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) ||
            !std::isfinite(q.real()) || !std::isfinite(q.imag()))
            throw NumericError("complex phase-space vector has non-finite component");
    }
    CVec2(const Vec2& v) : p(v.p), q(v.q) {}
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.p + b.p, a.q + b.q}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.p - b.p, a.q - b.q}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a.p, s * a.q}; }

inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.p + b.p, a.q + b.q}; }
inline CVec2 operator-(const CVec2& a, const CVec2& b) { return {a.p - b.p, a.q - b.q}; }
inline CVec2 operator*(complexd s, const CVec2& a) { return {s * a.p, s * a.q}; }
inline CVec2 operator*(double s, const CVec2& a) { return {s * a.p, s * a.q}; }
inline CVec2 operator-(const CVec2& a) { return {-a.p, -a.q}; }

/* J x = (-q, p): rotates (p, q) by +90 degrees in the (p, q) plane. */
inline Vec2 applyJ(const Vec2& v) { return {-v.q, v.p}; }
inline CVec2 applyJ(const CVec2& v) { return {-v.q, v.p}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.p * b.p + a.q * b.q; }
inline complexd dot(const CVec2& a, const CVec2& b) { return a.p * b.p + a.q * b.q; }
inline complexd dot(const Vec2& a, const CVec2& b) { return a.p * b.p + a.q * b.q; }
inline complexd dot(const CVec2& a, const Vec2& b) { return a.p * b.p + a.q * b.q; }

/* Symplectic area a wedge b = (J a) . b = a_p b_q - b_p a_q. */
inline double wedge(const Vec2& a, const Vec2& b) { return a.p * b.q - b.p * a.q; }
inline complexd wedge(const CVec2& a, const CVec2& b) { return a.p * b.q - b.p * a.q; }

inline double norm_sq(const Vec2& v) { return v.p * v.p + v.q * v.q; }
inline double norm_max(const CVec2& v) {
    return std::max(std::abs(v.p), std::abs(v.q));
}

/* 2x2 real matrix, row-major m[row][col], rows/cols indexed (p, q). */
struct Mat2 {
    double a11{0}, a12{0}, a21{0}, a22{0};

    static Mat2 identity() { return {1, 0, 0, 1}; }

    Vec2 apply(const Vec2& v) const { return {a11 * v.p + a12 * v.q, a21 * v.p + a22 * v.q}; }
    CVec2 apply(const CVec2& v) const { return {a11 * v.p + a12 * v.q, a21 * v.p + a22 * v.q}; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

inline Mat2 operator*(const Mat2& A, const Mat2& B) {
    return {A.a11 * B.a11 + A.a12 * B.a21, A.a11 * B.a12 + A.a12 * B.a22,
            A.a21 * B.a11 + A.a22 * B.a21, A.a21 * B.a12 + A.a22 * B.a22};
}
inline Mat2 operator*(double s, const Mat2& A) {
    return {s * A.a11, s * A.a12, s * A.a21, s * A.a22};
}
inline Mat2 operator+(const Mat2& A, const Mat2& B) {
    return {A.a11 + B.a11, A.a12 + B.a12, A.a21 + B.a21, A.a22 + B.a22};
}

/* 2x2 complex matrix. */
struct Mat2c {
    complexd a11{0}, a12{0}, a21{0}, a22{0};

    static Mat2c identity() { return {1, 0, 0, 1}; }

    CVec2 apply(const CVec2& v) const { return {a11 * v.p + a12 * v.q, a21 * v.p + a22 * v.q}; }
    complexd det() const { return a11 * a22 - a12 * a21; }

    /* Solve M z = rhs by direct 2x2 inversion. */
    CVec2 solve(const CVec2& rhs) const {
        const complexd d = det();
        if (std::abs(d) < 1e-300)
            throw NumericError("singular 2x2 system");
        return {(a22 * rhs.p - a12 * rhs.q) / d, (-a21 * rhs.p + a11 * rhs.q) / d};
    }
};

inline Mat2c operator+(const Mat2c& A, const Mat2c& B) {
    return {A.a11 + B.a11, A.a12 + B.a12, A.a21 + B.a21, A.a22 + B.a22};
}
inline Mat2c operator-(const Mat2c& A, const Mat2c& B) {
    return {A.a11 - B.a11, A.a12 - B.a12, A.a21 - B.a21, A.a22 - B.a22};
}
inline Mat2c operator*(complexd s, const Mat2c& A) {
    return {s * A.a11, s * A.a12, s * A.a21, s * A.a22};
}

}  // namespace cwkb
