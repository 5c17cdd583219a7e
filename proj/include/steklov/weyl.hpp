/*
 * steklov/weyl.hpp — tau sweeps of the counting function against its leading
 * Weyl coefficient, the eigenvalue-asymptotics inversion, and remainder
 * diagnostics.
 *
 *   ratio(tau)            = A(tau) / tau^{n-1}  ->  W
 *   remainder(tau)        = A(tau) - W tau^{n-1}
 *   scaled_remainder(tau) = remainder / tau^{n-2}
 *   lambda_k              ~ 16^{1/3} pi (k / (omega_{n-1} |face| rho^{n-1}))^{1/(n-1)}
 *
 * The remainder summary reports a maximum and a log-log slope fit; a finite
 * grid cannot certify an asymptotic order, so these are diagnostics, not
 * assertions (the one provable case, n = 2, reduces to floor arithmetic and
 * stays bounded).
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "steklov/counting.hpp"
#include "steklov/parallel.hpp"
#include "steklov/weyl_constants.hpp"

namespace steklov {

struct WeylRow {
    double tau = 0.0;
    std::uint64_t count = 0;
    double ratio = 0.0;
    double weyl_constant = 0.0;
    double relative_gap = 0.0;
    double remainder = 0.0;
    double scaled_remainder = 0.0;
};

struct WeylSweep {
    double weyl_constant = 0.0;
    std::vector<WeylRow> rows;
};

namespace detail {

inline void require_increasing_grid(std::span<const double> taus, const char* where) {
    if (taus.empty()) throw std::domain_error(std::string(where) + ": tau grid must be non-empty");
    double prev = 0.0;
    for (double tau : taus) {
        if (!std::isfinite(tau) || !(tau > prev))
            throw std::domain_error(std::string(where) + ": tau grid must be positive and strictly increasing");
        prev = tau;
    }
}

}  // namespace detail

// Geometric grid from min to max with the given resolution (the final point
// is max exactly).
inline std::vector<double> geometric_grid(double min, double max, int points_per_decade) {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min > 0.0) || !(min < max))
        throw std::domain_error("geometric_grid: need 0 < min < max");
    if (points_per_decade < 1) throw std::domain_error("geometric_grid: points_per_decade must be >= 1");
    std::vector<double> grid;
    const double step = 1.0 / static_cast<double>(points_per_decade);
    for (int j = 0;; ++j) {
        const double v = min * std::pow(10.0, static_cast<double>(j) * step);
        if (v >= max * (1.0 - 1e-12)) break;
        grid.push_back(v);
    }
    grid.push_back(max);
    return grid;
}

// Evaluates the counting function over the grid. Rows are ordered by tau;
// tau points are distributed across workers, so worker count never changes
// the result. For rho = 0 every count is 0 and gaps are reported as 0.
inline WeylSweep weyl_sweep(const SteklovProblem& problem, std::span<const double> taus,
                            int workers = 1) {
    detail::require_increasing_grid(taus, "weyl_sweep");
    const int n = problem.box.dim();
    const double weyl = weyl_constant_biharmonic(problem);
    WeylSweep sweep;
    sweep.weyl_constant = weyl;
    sweep.rows.resize(taus.size());
    run_chunked(static_cast<std::int64_t>(taus.size()), workers,
                [&](int, std::int64_t begin, std::int64_t end) {
                    for (std::int64_t i = begin; i < end; ++i) {
                        const double tau = taus[static_cast<std::size_t>(i)];
                        WeylRow row;
                        row.tau = tau;
                        row.count = count_direct(problem, tau, 1);
                        const double power = std::pow(tau, static_cast<double>(n - 1));
                        row.ratio = static_cast<double>(row.count) / power;
                        row.weyl_constant = weyl;
                        row.relative_gap = weyl > 0.0 ? std::abs(row.ratio - weyl) / weyl : 0.0;
                        row.remainder = static_cast<double>(row.count) - weyl * power;
                        row.scaled_remainder = row.remainder / std::pow(tau, static_cast<double>(n - 2));
                        sweep.rows[static_cast<std::size_t>(i)] = row;
                    }
                });
    return sweep;
}

struct CorollaryRow {
    std::uint64_t k = 0;
    double lambda_k = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
};

// lambda_k against the inverted counting asymptotics with the weighted face
// area in place of the boundary measure. The ratio sequence approaches 1.
inline std::vector<CorollaryRow> corollary_check(const SteklovProblem& problem,
                                                 std::uint64_t k_max) {
    if (k_max < 1) throw std::domain_error("corollary_check: k_max must be >= 1");
    const int n = problem.box.dim();
    const double weighted_area =
        problem.box.base_area() * std::pow(problem.rho, static_cast<double>(n - 1));
    const double omega = unit_ball_volume(n - 1);
    const double front = std::cbrt(16.0) * pi;
    auto modes = smallest_eigenvalues(problem, k_max);
    std::vector<CorollaryRow> rows;
    rows.reserve(modes.size());
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        CorollaryRow row;
        row.k = k;
        row.lambda_k = modes[k - 1].lambda;
        row.predicted = front * std::pow(static_cast<double>(k) / (omega * weighted_area),
                                         1.0 / static_cast<double>(n - 1));
        row.ratio = row.lambda_k / row.predicted;
        rows.push_back(row);
    }
    return rows;
}

struct RemainderSummary {
    double max_scaled_remainder = 0.0;
    double slope_fit = 0.0;   // least-squares slope of log10|remainder| vs log10 tau
    std::size_t fitted_rows = 0;
};

// Remainder diagnostics over a grid spanning at least a factor of 30 in tau
// (about a decade and a half; anything narrower gives the slope fit no lever
// arm). Rows with |remainder| < 1e-9 are excluded from the fit (a near-exact
// crossing carries no order information).
inline RemainderSummary remainder_report(const SteklovProblem& problem,
                                         std::span<const double> taus, int workers = 1) {
    detail::require_increasing_grid(taus, "remainder_report");
    if (taus.back() / taus.front() < 30.0 * (1.0 - 1e-12))
        throw std::domain_error("remainder_report: grid must span at least a factor of 30 in tau");
    const WeylSweep sweep = weyl_sweep(problem, taus, workers);
    RemainderSummary summary;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (const WeylRow& row : sweep.rows) {
        const double scaled = std::abs(row.scaled_remainder);
        if (scaled > summary.max_scaled_remainder) summary.max_scaled_remainder = scaled;
        const double r = std::abs(row.remainder);
        if (r < 1e-9) continue;
        const double x = std::log10(row.tau);
        const double y = std::log10(r);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++used;
    }
    summary.fitted_rows = used;
    if (used >= 2) {
        const double denom = static_cast<double>(used) * sxx - sx * sx;
        if (denom > 0.0) summary.slope_fit = (static_cast<double>(used) * sxy - sx * sy) / denom;
    }
    return summary;
}

}  // namespace steklov
