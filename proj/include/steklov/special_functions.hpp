/*
 * steklov/special_functions.hpp — the scalar spectral map t, its monotonicity
 * certificate theta, and the inverse h.
 *
 *   t(s)     = 2 s^3 (sinh s cosh s + s) / (sinh^2 s - s^2),        s > 0
 *   theta(s) = -s^3 + 3 s sinh^2 s + 3 sinh^3 s cosh s
 *              - 3 s^2 sinh s cosh s - 2 s^3 cosh^2 s
 *   h(t)     = inverse of t on [1, +inf)
 *
 * t maps a dimensionless frequency s = eta * l_n to the cube of a Steklov
 * eigenvalue (up to the 1/(rho^3 l_n^3) weight applied by the spectrum layer).
 * It satisfies t(s) > 2 s^3 everywhere, t(s)/s^3 -> 2 as s -> +inf, and
 *
 *   t'(s) = 2 s^2 theta(s) / (sinh^2 s - s^2)^2,
 *
 * with theta(s) >= 0 certifying that t is increasing on [1, +inf); h is only
 * defined on that branch, i.e. for t >= t(1) = 14.76487068523617...
 *
 * Numerics. Hyperbolics in the textbook forms overflow early (sinh^2 near
 * s = 355, sinh^3 cosh near s = 177), so the canonical evaluations factor out
 * the leading exponential:
 *
 *   t(s)     = 2 s^3 N(s)/D(s),   N = 1 - e^{-4s} + 4 s e^{-2s},
 *                                 D = 1 + e^{-4s} - (2 + 4 s^2) e^{-2s}
 *   theta(s) = e^{4s} [ 3/16 + c2 e^{-2s} + c0 e^{-4s} + cm2 e^{-6s}
 *                       - (3/16) e^{-8s} ],
 *     c2  = -s^3/2 - 3 s^2/4 + 3 s/4 - 3/8,
 *     c0  = -2 s^3 - 3 s/2,
 *     cm2 = -s^3/2 + 3 s^2/4 + 3 s/4 + 3/8.
 *
 * Both numerator and denominator of t vanish to O(s^4) at the origin. The
 * factored exponentials cancel against O(1) terms there (relative error grows
 * like s^-4), while the sinh form only loses O(s^-2), so evaluation is staged:
 * below s = 0.08 the series
 *
 *   t(s) = 12 + (12/5) s^2 + (64/175) s^4 - (4/7875) s^6 + O(s^8)
 *
 * is used by both modes, the sinh form covers [0.08, 0.5), and the factored
 * form takes over from 0.5 on. Worst-case relative error over the staging is
 * about 1e-13 near the series seam.
 *
 * theta cancels to (4/15) s^7 at the origin; its relative accuracy degrades
 * below s ~ 0.5. The certificate range of interest is [1, +inf).
 */

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace steklov {

// Evaluation strategy for t. Stable (the canonical path) uses the factored
// exponential forms above and stays finite for s up to at least 1e4; Naive is
// the direct sinh/cosh form, kept for cross-testing, and overflows near
// s = 355. Both switch to the small-s series below 0.08.
enum class EvalMode { Naive, Stable };

// theta_fn returns the exact value up to this point; beyond it the exact
// value no longer fits in a double (overflow near s = 177.8) and the result
// is returned scaled by e^{-4s}. The scaling is a positive factor, so sign
// queries and the monotonicity certificate are unaffected.
inline constexpr double theta_scale_cutoff = 170.0;

namespace detail {

inline constexpr double t_series_threshold = 0.08;
inline constexpr double t_factored_threshold = 0.5;

inline void require_positive_finite(double s, const char* where) {
    if (!std::isfinite(s) || !(s > 0.0))
        throw std::domain_error(std::string(where) + ": argument must be positive and finite");
}

// Series of t about s = 0 (four terms, error O(s^8)).
inline double t_series_small(double s) {
    const double s2 = s * s;
    return 12.0 + s2 * (12.0 / 5.0 + s2 * (64.0 / 175.0 - s2 * (4.0 / 7875.0)));
}

// D(s) = 4 e^{-2s} (sinh^2 s - s^2); positive for every s > 0.
inline double t_denominator_ratio(double s, double e2) {
    return (1.0 + e2 * e2) - (2.0 + 4.0 * s * s) * e2;
}

// e^{-4s} * theta(s), assembled from the grouped exponential coefficients.
inline double theta_scaled_by_exp4(double s) {
    const double e2  = std::exp(-2.0 * s);
    const double c2  = ((-0.5 * s - 0.75) * s + 0.75) * s - 0.375;
    const double c0  = (-2.0 * s * s - 1.5) * s;
    const double cm2 = ((-0.5 * s + 0.75) * s + 0.75) * s + 0.375;
    return 3.0 / 16.0 + e2 * (c2 + e2 * (c0 + e2 * (cm2 - e2 * (3.0 / 16.0))));
}

}  // namespace detail

// t(s) for s > 0. Throws std::domain_error for non-positive or non-finite s.
inline double t_fn(double s, EvalMode mode = EvalMode::Stable) {
    detail::require_positive_finite(s, "t_fn");
    if (s < detail::t_series_threshold) return detail::t_series_small(s);
    if (mode == EvalMode::Naive || s < detail::t_factored_threshold) {
        const double sh = std::sinh(s);
        const double ch = std::cosh(s);
        return 2.0 * s * s * s * (sh * ch + s) / (sh * sh - s * s);
    }
    const double e2  = std::exp(-2.0 * s);
    const double num = (1.0 - e2 * e2) + 4.0 * s * e2;
    const double den = detail::t_denominator_ratio(s, e2);
    return 2.0 * s * s * s * num / den;
}

// Smallest t in the invertible range: t(1), the left endpoint of the branch
// on which h_fn is defined.
inline double h_domain_min() {
    static const double t1 = t_fn(1.0);
    return t1;
}

// theta(s) for s > 0; positive on [1, +inf). Exact for s <= theta_scale_cutoff,
// scaled by e^{-4s} beyond it (see the cutoff note above).
inline double theta_fn(double s) {
    detail::require_positive_finite(s, "theta_fn");
    const double scaled = detail::theta_scaled_by_exp4(s);
    if (s > theta_scale_cutoff) return scaled;
    return std::exp(4.0 * s) * scaled;
}

// t'(s) = 32 s^2 * (e^{-4s} theta) / D^2. Both factors are O(1), so the
// derivative is finite wherever 2 s^3 itself is.
inline double t_derivative(double s) {
    detail::require_positive_finite(s, "t_derivative");
    if (s < detail::t_series_threshold) {
        const double s2 = s * s;
        return s * (24.0 / 5.0 + s2 * (256.0 / 175.0 - s2 * (24.0 / 7875.0)));
    }
    const double e2  = std::exp(-2.0 * s);
    const double den = detail::t_denominator_ratio(s, e2);
    return 32.0 * s * s * detail::theta_scaled_by_exp4(s) / (den * den);
}

// Inverse of t on [1, +inf): returns s >= 1 with t(s) = t to relative 1e-13.
// Newton iteration with the analytic derivative, seeded by the asymptotic
// guess (t/2)^{1/3} (always an upper bracket since t(s) > 2 s^3), with
// bisection whenever a step leaves the bracket. Throws std::domain_error for
// t below t(1): the function is only proven monotone from s = 1 on.
inline double h_fn(double t) {
    if (!std::isfinite(t)) throw std::domain_error("h_fn: t must be finite");
    const double t1 = h_domain_min();
    if (t < t1 * (1.0 - 1e-12))
        throw std::domain_error("h_fn: t below t(1); the inverse is defined on [t(1), +inf) only");
    if (t <= t1) return 1.0;

    double lo = 1.0;
    double hi = std::cbrt(0.5 * t);
    double s  = hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = t_fn(s) - t;
        if (f == 0.0) return s;
        if (f > 0.0) hi = s; else lo = s;
        double next = s - f / t_derivative(s);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-13 * next) return next;
        s = next;
    }
    return s;
}

}  // namespace steklov
