#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace relaynet::detail {

struct TailEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// Third-order Taylor coefficients c[i][j] of an integrand h(A, B) around
/// A = B = 0, where A and B are the two hop terms a*|x-r|^-alpha and
/// b*|x-d|^-alpha. Only entries with i + j <= 3 are used.
using TaylorCoefficients = std::array<std::array<double, 4>, 4>;

/// Integral over |x - c| > R of |x - z|^(-2s), with |z - c| = offset < R.
/// The angular mean of |x - z|^(-2s) on the circle |x - c| = rho is
/// rho^(-2s) * 2F1(s, s; 1; offset^2 / rho^2), which integrates term by term.
inline double power_tail(double s, double offset, double radius) {
    const double ratio2 = (offset / radius) * (offset / radius);
    double coeff = 1.0;  // ((s)_k / k!)^2
    double geom = 1.0;   // (offset / R)^(2k)
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double term = coeff * geom / (2.0 * s + 2.0 * k - 2.0);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum))
            break;
        const double r = (s + k) / (k + 1.0);
        coeff *= r * r;
        geom *= ratio2;
    }
    return 2.0 * std::numbers::pi * std::pow(radius, 2.0 - 2.0 * s) * sum;
}

/// Sum over k >= 4 of (m)_k / k! * t^k: bounds the part of the two-centre
/// product expansion beyond second order (Gegenbauer terms are bounded by
/// their value at 1, and the two series multiply to the (1-t)^-m series).
inline double product_remainder(double m, double t) {
    double term = 1.0;
    for (int k = 1; k <= 3; ++k)
        term *= (m + k - 1.0) / k * t;
    double sum = 0.0;
    for (int k = 4; k < 400; ++k) {
        term *= (m + k - 1.0) / k * t;
        sum += term;
        if (term <= 1e-18 * sum)
            break;
    }
    return sum;
}

/// Analytic estimate of the integral of h over |x - c| > R, where the two
/// singular points sit at c + offset*u and c - offset*u.
/// Pure powers of A or B use the exact angular series. For a mixed product
/// |x-r|^(-2 s1) |x-d|^(-2 s2) the angular mean is
/// rho^(-2S) (1 + (s1 - s2)^2 (offset/rho)^2 + O((offset/rho)^4)), S = s1 + s2;
/// the fourth-order part goes into the error, with the Taylor remainder.
inline TailEstimate far_field_tail(const TaylorCoefficients& c, double a, double b, double alpha,
                                   double offset, double radius) {
    TailEstimate t;
    const double ratio = offset / radius;
    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; i + j <= 3; ++j) {
            const int n = i + j;
            if (n == 0 || c[i][j] == 0.0)
                continue;
            const double weight = c[i][j] * std::pow(a, i) * std::pow(b, j);
            if (weight == 0.0)
                continue;
            if (i == 0 || j == 0) {
                t.value += weight * power_tail(0.5 * n * alpha, offset, radius);
            } else {
                const double big_s = 0.5 * n * alpha;
                const double ds = 0.5 * (i - j) * alpha;
                const double lead =
                    weight * 2.0 * std::numbers::pi * std::pow(radius, 2.0 - 2.0 * big_s) / (2.0 * big_s - 2.0);
                const double second = weight * 2.0 * std::numbers::pi * ds * ds * offset * offset *
                                      std::pow(radius, -2.0 * big_s) / (2.0 * big_s);
                t.value += lead + second;
                t.error += std::abs(lead) * product_remainder(2.0 * big_s, ratio);
            }
        }
    }
    const double reach = radius - offset;
    t.error += 32.0 * std::pow(a + b, 4) * 2.0 * std::numbers::pi * std::pow(reach, 2.0 - 4.0 * alpha) /
               (4.0 * alpha - 2.0);
    return t;
}

} // namespace relaynet::detail
