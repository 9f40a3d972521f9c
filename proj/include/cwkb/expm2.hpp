#pragma once

#include <cmath>

#include "cwkb/geometry.hpp"

namespace cwkb {

/* Closed-form exponential of a real 2x2 matrix.

   Write M = mu I + A with mu = tr(M)/2, so A is trace-free and
   A^2 = d I with d = ((a11 - a22)/2)^2 + a12 a21. Then
     exp(M) = e^mu [ cosh(s) I + sinhc(s) A ],  s = sqrt(d)   (d > 0)
     exp(M) = e^mu [ cos(w)  I + sinc(w)  A ],  w = sqrt(-d)  (d < 0)
   with the series limit used near d = 0. */
inline Mat2 expm2(const Mat2& M) {
    const double mu = 0.5 * (M.a11 + M.a22);
    const double b11 = M.a11 - mu, b22 = M.a22 - mu;
    const double d = b11 * b11 + M.a12 * M.a21;

    double ch, shc;  // cosh(s), sinh(s)/s with s^2 = d (analytic in d)
    const double ad = std::abs(d);
    if (ad < 1e-8) {
        // cosh(sqrt(d)) = 1 + d/2 + d^2/24 + ...; sinhc = 1 + d/6 + d^2/120 + ...
        ch = 1.0 + d / 2.0 + d * d / 24.0;
        shc = 1.0 + d / 6.0 + d * d / 120.0;
    } else if (d > 0.0) {
        const double s = std::sqrt(d);
        ch = std::cosh(s);
        shc = std::sinh(s) / s;
    } else {
        const double w = std::sqrt(-d);
        ch = std::cos(w);
        shc = std::sin(w) / w;
    }
    const double e = std::exp(mu);
    return {e * (ch + shc * b11), e * shc * M.a12,
            e * shc * M.a21,      e * (ch + shc * b22)};
}

}  // namespace cwkb
