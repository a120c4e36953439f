#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "sosdim/errors.hpp"

namespace sosdim {

namespace detail {

// Series for the lower regularized incomplete gamma P(a, x); good for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for the upper regularized Q(a, x); good for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized upper incomplete gamma function Q(a, x).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw InvalidInput("gamma_q: shape must be positive");
    if (!(x >= 0.0)) throw InvalidInput("gamma_q: argument must be non-negative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return std::clamp(1.0 - detail::gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(detail::gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

/// P(chi^2_df > x).
inline double chisq_sf(double x, double df) {
    if (!(x >= 0.0)) throw InvalidInput("chisq_sf: x must be non-negative");
    if (!(df > 0.0)) throw InvalidInput("chisq_sf: degrees of freedom must be positive");
    return gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace sosdim
