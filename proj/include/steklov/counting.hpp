/*
 * steklov/counting.hpp — exact eigenvalue counting by lattice enumeration.
 *
 * A mode m contributes lambda^3 <= tau^3 exactly when t(eta_m l_n) <= T0 with
 * T0 = rho^3 l_n^3 tau^3. Two equivalent counting routes are provided:
 *
 *   count_direct  — enumerates the admissible lattice inside a conservatively
 *                   inflated ellipsoid and tests every mode through t itself,
 *                   so the integer result never depends on inverse tolerance;
 *   count_radius  — counts lattice points of the ellipsoid
 *                   sum (m_i / l_i)^2 <= [h(T0) / (pi l_n)]^2.
 *
 * Tie rule: the comparison is closed, and a mode within relative 1e-9 of the
 * shell is counted as inside; the radius route applies the same window mapped
 * through the inverse (cbrt(1 + 1e-9) on the radius).
 *
 * The octant volume V = omega_{n-1} 2^{-(n-1)} (prod l_i) R^{n-1} and the
 * positive-octant surface T of the mode ellipsoid bracket the free count:
 * V <= A^f + 1 <= V + sqrt(n-1) T. Surface measures: n = 2 endpoint count
 * (T = 1), n = 3 quarter-ellipse arc, n = 4 octant area, both by adaptive
 * quadrature; the returned estimate is inflated by relative 1e-6 so the
 * bracket's upper side only widens.
 *
 * Counting supports n in {2, 3, 4} (desk scale); eigenvalue formulas in
 * box_spectrum.hpp have no such limit.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "steklov/box_spectrum.hpp"
#include "steklov/parallel.hpp"
#include "steklov/special_functions.hpp"
#include "steklov/weyl_constants.hpp"

namespace steklov {

class unsupported_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_counting_dim(const BoxDomain& box, const char* where) {
    if (box.dim() > 4)
        throw unsupported_error(std::string(where) + ": counting supports dimensions 2..4");
}

inline void require_tau(double tau, const char* where) {
    if (!std::isfinite(tau) || !(tau > 0.0))
        throw std::domain_error(std::string(where) + ": tau must be positive and finite");
}

// Relative window around the counting shell; modes this close to equality
// are treated as inside (the comparison lambda <= tau is closed).
inline constexpr double shell_window = 1e-9;

// Enumerates admissible modes with sum (m_i / l_i)^2 <= r2 at lattice levels
// level..n-2, with partial the sum over earlier levels. visit(m, q) receives
// the full index and its sum.
template <class Visit>
void enumerate_modes(const BoxDomain& box, ProblemVariant variant, double r2,
                     int level, double partial, long nonzero, std::vector<int>& m,
                     Visit&& visit) {
    const int last = box.dim() - 2;
    const double l = box.side(level);
    const int start = (variant == ProblemVariant::LateralDirichlet) ? 1 : 0;
    for (int k = start;; ++k) {
        const double r = static_cast<double>(k) / l;
        const double q = partial + r * r;
        if (q > r2) break;
        m[static_cast<std::size_t>(level)] = k;
        const long nz = nonzero + (k > 0 ? 1 : 0);
        if (level == last) {
            if (nz > 0) visit(m, q);
        } else {
            enumerate_modes(box, variant, r2, level + 1, q, nz, m, visit);
        }
    }
}

// Counts admissible modes satisfying pred(m); the outermost index is
// partitioned across workers with a deterministic integer reduction.
template <class Pred>
std::uint64_t count_admissible(const BoxDomain& box, ProblemVariant variant, double r2,
                               int workers, Pred&& pred) {
    const int start = (variant == ProblemVariant::LateralDirichlet) ? 1 : 0;
    const double l0 = box.side(0);
    std::int64_t top = 0;
    while (true) {
        const double r = static_cast<double>(start + top) / l0;
        if (r * r > r2) break;
        ++top;
    }
    if (top <= 0) return 0;

    workers = resolve_workers(workers);
    std::vector<std::uint64_t> partials(static_cast<std::size_t>(std::min<std::int64_t>(workers, top)), 0);
    run_chunked(top, workers, [&](int chunk, std::int64_t begin, std::int64_t end) {
        std::uint64_t local = 0;
        std::vector<int> m(static_cast<std::size_t>(box.dim() - 1), 0);
        auto visit = [&](const std::vector<int>& mode, double q) {
            if (pred(mode, q)) ++local;
        };
        for (std::int64_t j = begin; j < end; ++j) {
            const int k = static_cast<int>(start + j);
            const double r = static_cast<double>(k) / l0;
            const double q = r * r;
            if (q > r2) continue;
            m[0] = k;
            if (box.dim() == 2) {
                if (k > 0) visit(m, q);
            } else {
                enumerate_modes(box, variant, r2, 1, q, k > 0 ? 1 : 0, m, visit);
            }
        }
        partials[static_cast<std::size_t>(chunk)] = local;
    });
    std::uint64_t total = 0;
    for (std::uint64_t p : partials) total += p;
    return total;
}

inline double shell_limit(const SteklovProblem& p, double tau) {
    return cube(p.rho) * cube(p.box.height()) * cube(tau);
}

}  // namespace detail

// Exact A(tau): admissible modes with eigenvalue_cubed <= tau^3, decided
// mode-by-mode through t (no inverse in the decision path). Multiplicities
// are counted as lattice points.
inline std::uint64_t count_direct(const SteklovProblem& problem, double tau, int workers = 1) {
    detail::require_counting_dim(problem.box, "count_direct");
    detail::require_tau(tau, "count_direct");
    const double t0 = detail::shell_limit(problem, tau);
    if (!(t0 >= h_domain_min())) return 0;
    const double l_n = problem.box.height();
    const double radius = h_fn(t0) / (pi * l_n);
    const double r2 = radius * (1.0 + 1e-9) * radius * (1.0 + 1e-9);
    const double limit = t0 * (1.0 + detail::shell_window);
    return detail::count_admissible(
        problem.box, problem.variant, r2, workers,
        [&](const std::vector<int>& m, double) {
            const double u = mode_frequency(problem.box, ModeIndex{m}) * l_n;
            return t_fn(u) <= limit;
        });
}

// Same count through the inverse: lattice points of the ellipsoid of scale
// R = h(T0)/(pi l_n) with semi-axes l_i R. Returns 0 when T0 < t(1).
inline std::uint64_t count_radius(const SteklovProblem& problem, double tau, int workers = 1) {
    detail::require_counting_dim(problem.box, "count_radius");
    detail::require_tau(tau, "count_radius");
    const double t0 = detail::shell_limit(problem, tau);
    if (!(t0 >= h_domain_min())) return 0;
    const double l_n = problem.box.height();
    const double radius = h_fn(t0) / (pi * l_n);
    const double rpad = radius * (1.0 + 1e-9);
    const double rwin = radius * std::cbrt(1.0 + detail::shell_window);
    const double qmax = rwin * rwin;
    return detail::count_admissible(
        problem.box, problem.variant, rpad * rpad, workers,
        [&](const std::vector<int>&, double q) { return q <= qmax; });
}

// V = omega_{n-1} 2^{-(n-1)} (prod_{i<n} l_i) radius^{n-1}: volume of the
// mode ellipsoid's positive octant.
inline double ellipsoid_octant_volume(const BoxDomain& box, double radius) {
    if (!std::isfinite(radius) || radius < 0.0)
        throw std::domain_error("ellipsoid_octant_volume: radius must be >= 0");
    const int d = box.dim() - 1;
    return unit_ball_volume(d) * std::pow(0.5, static_cast<double>(d)) * box.base_area() *
           std::pow(radius, static_cast<double>(d));
}

namespace detail {

// Adaptive Simpson on [a, b] to the given relative tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol * (std::abs(left + right) + 1e-300))
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

// Surface measure of the positive-octant part of the mode ellipsoid boundary:
// n = 2: endpoint count 1; n = 3: quarter-ellipse arc; n = 4: octant area of
// the ellipsoid with semi-axes l_i radius. Inflated by relative 1e-6 so the
// value is always an upper estimate. Throws unsupported_error for n > 4.
inline double octant_surface_estimate(const BoxDomain& box, double radius) {
    if (!std::isfinite(radius) || radius < 0.0)
        throw std::domain_error("octant_surface_estimate: radius must be >= 0");
    const int n = box.dim();
    if (n > 4) throw unsupported_error("octant_surface_estimate: supported for dimensions 2..4");
    constexpr double inflation = 1.0 + 1e-6;
    if (n == 2) return inflation;
    if (n == 3) {
        const double a = box.side(0) * radius;
        const double b = box.side(1) * radius;
        if (radius == 0.0) return 0.0;
        const double arc = detail::integrate(
            [&](double th) {
                const double sa = a * std::sin(th);
                const double cb = b * std::cos(th);
                return std::sqrt(sa * sa + cb * cb);
            },
            0.0, 0.5 * pi, 1e-9);
        return arc * inflation;
    }
    const double a = box.side(0) * radius;
    const double b = box.side(1) * radius;
    const double c = box.side(2) * radius;
    if (radius == 0.0) return 0.0;
    // Octant area via r(th, ph) = (a sin th cos ph, b sin th sin ph, c cos th):
    // |r_th x r_ph| = sin th sqrt(b^2 c^2 sin^2 th cos^2 ph
    //                 + a^2 c^2 sin^2 th sin^2 ph + a^2 b^2 cos^2 th).
    const double area = detail::integrate(
        [&](double th) {
            const double st = std::sin(th);
            const double ct = std::cos(th);
            return detail::integrate(
                [&](double ph) {
                    const double cp = std::cos(ph);
                    const double sp = std::sin(ph);
                    const double g = b * c * st * cp * (b * c * st * cp) +
                                     a * c * st * sp * (a * c * st * sp) +
                                     a * b * ct * (a * b * ct);
                    return st * std::sqrt(g);
                },
                0.0, 0.5 * pi, 1e-9);
        },
        0.0, 0.5 * pi, 1e-8);
    return area * inflation;
}

// One counting-report row; bracket fields compare against count_direct + 1.
struct CountReport {
    double tau = 0.0;
    std::uint64_t count_direct = 0;
    std::uint64_t count_radius = 0;
    double radius = 0.0;            // h(rho^3 l_n^3 tau^3) / (pi l_n), 0 when undefined
    double volume_estimate = 0.0;
    double surface_estimate = 0.0;
    double bracket_low = 0.0;       // V
    double bracket_high = 0.0;      // V + sqrt(n-1) T
    bool bracket_applicable = false;
    bool bracket_ok = true;
    double lower_slack = 0.0;       // (count + 1) - bracket_low
    double upper_slack = 0.0;       // bracket_high - (count + 1)
};

// Assembles counts, ellipsoid scale, V and T and evaluates the bracket for
// any variant; the sandwich is only marked applicable for LateralFree with
// radius >= 1.
inline CountReport assemble_count_report(const SteklovProblem& problem, double tau,
                                         int workers = 1) {
    detail::require_counting_dim(problem.box, "assemble_count_report");
    detail::require_tau(tau, "assemble_count_report");
    CountReport report;
    report.tau = tau;
    report.count_direct = count_direct(problem, tau, workers);
    report.count_radius = count_radius(problem, tau, workers);
    const double t0 = detail::shell_limit(problem, tau);
    if (t0 >= h_domain_min())
        report.radius = h_fn(t0) / (pi * problem.box.height());
    report.volume_estimate = ellipsoid_octant_volume(problem.box, report.radius);
    report.surface_estimate = octant_surface_estimate(problem.box, report.radius);
    report.bracket_low = report.volume_estimate;
    report.bracket_high = report.volume_estimate +
                          std::sqrt(static_cast<double>(problem.box.dim() - 1)) * report.surface_estimate;
    report.bracket_applicable =
        (problem.variant == ProblemVariant::LateralFree) && report.radius >= 1.0;
    const double count_plus_one = static_cast<double>(report.count_direct) + 1.0;
    report.lower_slack = count_plus_one - report.bracket_low;
    report.upper_slack = report.bracket_high - count_plus_one;
    if (report.bracket_applicable)
        report.bracket_ok = report.lower_slack >= 0.0 && report.upper_slack >= 0.0;
    return report;
}

// The sandwich V <= A^f + 1 <= V + sqrt(n-1) T for the free variant;
// bracket_ok carries the verdict, slack fields the margins.
inline CountReport bracket_check(const SteklovProblem& problem, double tau, int workers = 1) {
    if (problem.variant != ProblemVariant::LateralFree)
        throw std::domain_error("bracket_check: the count bracket applies to the lateral-free variant");
    return assemble_count_report(problem, tau, workers);
}

namespace detail {

struct ModeCandidate {
    double t_value;
    double lambda_cubed;
    double freq;
    std::vector<int> m;
};

}  // namespace detail

// The k smallest eigenpairs (with lattice multiplicity), sorted by
// (lambda^3, lexicographic mode order). Certified by adaptive enclosure:
// starting from the Weyl estimate the threshold grows by 25% until at least
// k modes are enclosed and the k-th sits strictly inside.
inline std::vector<SteklovMode> smallest_eigenvalues(const SteklovProblem& problem,
                                                     std::uint64_t k) {
    detail::require_counting_dim(problem.box, "smallest_eigenvalues");
    if (k < 1) throw std::domain_error("smallest_eigenvalues: k must be >= 1");
    if (problem.rho == 0.0)
        throw std::domain_error("smallest_eigenvalues: zero density has an empty spectrum");

    const double l_n = problem.box.height();
    const int n = problem.box.dim();
    const double weyl = weyl_constant_biharmonic(problem);
    double tau_enc = std::pow(static_cast<double>(k) / weyl, 1.0 / static_cast<double>(n - 1));

    for (int round = 0; round < 400; ++round) {
        const double t_enc = detail::shell_limit(problem, tau_enc);
        if (t_enc >= h_domain_min()) {
            const double radius = h_fn(t_enc) / (pi * l_n);
            const double r2 = radius * (1.0 + 1e-9) * radius * (1.0 + 1e-9);
            std::vector<detail::ModeCandidate> candidates;
            const double rho3l3 = detail::cube(problem.rho) * detail::cube(l_n);
            detail::count_admissible(
                problem.box, problem.variant, r2, 1,
                [&](const std::vector<int>& m, double) {
                    const double freq = mode_frequency(problem.box, ModeIndex{m});
                    const double tv = t_fn(freq * l_n);
                    if (tv <= t_enc) {
                        candidates.push_back(detail::ModeCandidate{tv, tv / rho3l3, freq, m});
                        return true;
                    }
                    return false;
                });
            if (candidates.size() >= k) {
                std::sort(candidates.begin(), candidates.end(),
                          [](const detail::ModeCandidate& a, const detail::ModeCandidate& b) {
                              if (a.lambda_cubed != b.lambda_cubed)
                                  return a.lambda_cubed < b.lambda_cubed;
                              return a.m < b.m;
                          });
                if (candidates[k - 1].t_value <= t_enc * (1.0 - 1e-9)) {
                    std::vector<SteklovMode> result;
                    result.reserve(k);
                    for (std::uint64_t j = 0; j < k; ++j) {
                        auto& c = candidates[j];
                        result.push_back(SteklovMode{problem, ModeIndex{std::move(c.m)}, c.freq,
                                                     c.lambda_cubed, std::cbrt(c.lambda_cubed)});
                    }
                    return result;
                }
            }
        }
        tau_enc *= 1.25;
    }
    throw std::runtime_error("smallest_eigenvalues: enclosure did not converge");
}

// The k-th smallest eigenvalue (k >= 1), ties in lexicographic mode order.
inline SteklovMode kth_eigenvalue(const SteklovProblem& problem, std::uint64_t k) {
    auto modes = smallest_eigenvalues(problem, k);
    return std::move(modes.back());
}

}  // namespace steklov
