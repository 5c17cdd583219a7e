/*
 * steklov/box_spectrum.hpp — closed-form biharmonic Steklov eigenpairs on an
 * n-dimensional box D = { 0 <= x_i <= l_i }.
 *
 * The spectral weight rho sits on the base face { x_n = 0 }; the top face
 * { x_n = l_n } is clamped. Two lateral boundary conditions are solvable in
 * product form:
 *
 *   LateralDirichlet:  u = lap u = 0 on lateral faces
 *                      u = c * prod sin(m_i pi x_i / l_i) * Y(x_n), m_i >= 1
 *   LateralFree:       du/dn = d(lap u)/dn = 0 on lateral faces
 *                      u = c * prod cos(m_i pi x_i / l_i) * Y(x_n), m_i >= 0,
 *                      sum m_i != 0
 *
 * with the one-dimensional profile (eta^2 = sum (m_i pi / l_i)^2, u = eta l_n)
 *
 *   Y(x) = cosh(eta x) - K sinh(eta x) + eta K x cosh(eta x) - S x sinh(eta x),
 *   K = (sinh u cosh u + u) / (sinh^2 u - u^2),   S = eta sinh^2 u / (...),
 *
 * normalised to Y(0) = 1, Y'(0) = 0, Y(l_n) = Y'(l_n) = 0. The profile solves
 * Y'''' - 2 eta^2 Y'' + eta^4 Y = 0 and carries the eigenvalue through
 * Y'''(0) = 2 eta^3 K, giving
 *
 *   lambda^3 = t(eta l_n) / (rho^3 l_n^3).
 *
 * Evaluation uses the exponential basis e^{eta(x - l_n)}, e^{-eta x} with
 * coefficients assembled from e^{-2u} ratios, which keeps every intermediate
 * bounded and makes the clamped-end zeros exact to rounding at any frequency
 * (the textbook cosh/sinh assembly loses the endpoint to cancellation already
 * near u = 20). Relative accuracy degrades below u ~ 0.5 (the coefficient
 * denominator cancels to O(u^4)); admissible box modes always have u >= pi.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steklov/special_functions.hpp"

namespace steklov {

inline constexpr double pi = std::numbers::pi_v<double>;

namespace detail {

inline double cube(double v) { return v * v * v; }

}  // namespace detail

// Rectangular box with sides (l_1, ..., l_n), n >= 2. Construction enforces
// l_i <= l_n for i < n, so every admissible mode frequency satisfies
// eta * l_n >= pi and all t evaluations stay on the proven monotone branch.
class BoxDomain {
public:
    explicit BoxDomain(std::vector<double> sides) : sides_(std::move(sides)) {
        if (sides_.size() < 2)
            throw std::invalid_argument("BoxDomain: at least two sides required");
        for (double l : sides_)
            if (!std::isfinite(l) || !(l > 0.0))
                throw std::invalid_argument("BoxDomain: sides must be positive and finite");
        for (std::size_t i = 0; i + 1 < sides_.size(); ++i)
            if (sides_[i] > sides_.back())
                throw std::invalid_argument("BoxDomain: lateral sides must not exceed the height l_n");
    }

    int dim() const { return static_cast<int>(sides_.size()); }
    double side(int i) const { return sides_.at(static_cast<std::size_t>(i)); }
    double height() const { return sides_.back(); }  // l_n
    std::span<const double> sides() const { return sides_; }
    std::span<const double> lateral_sides() const {
        return std::span<const double>(sides_).first(sides_.size() - 1);
    }

    // Area of the weighted base face, prod_{i<n} l_i.
    double base_area() const {
        double a = 1.0;
        for (std::size_t i = 0; i + 1 < sides_.size(); ++i) a *= sides_[i];
        return a;
    }

    friend bool operator==(const BoxDomain&, const BoxDomain&) = default;

private:
    std::vector<double> sides_;
};

enum class ProblemVariant { LateralDirichlet, LateralFree };

// Lateral mode numbers (m_1, ..., m_{n-1}).
struct ModeIndex {
    std::vector<int> m;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

inline bool admissible(const ModeIndex& mode, ProblemVariant variant) {
    long sum = 0;
    for (int mi : mode.m) {
        if (mi < 0) return false;
        if (variant == ProblemVariant::LateralDirichlet && mi < 1) return false;
        sum += mi;
    }
    return sum >= 1;
}

// Box + lateral variant + constant base density rho. rho = 0 is allowed and
// means an empty spectrum (counts are zero, eigenvalue queries throw);
// negative or non-finite rho is rejected.
struct SteklovProblem {
    SteklovProblem(BoxDomain box_, ProblemVariant variant_, double rho_)
        : box(std::move(box_)), variant(variant_), rho(rho_) {
        if (!std::isfinite(rho) || rho < 0.0)
            throw std::invalid_argument("SteklovProblem: rho must be finite and >= 0");
    }

    BoxDomain box;
    ProblemVariant variant;
    double rho;

    friend bool operator==(const SteklovProblem&, const SteklovProblem&) = default;
};

// One eigenpair.
struct SteklovMode {
    SteklovProblem problem;
    ModeIndex mode;
    double freq;          // eta (or beta), units 1/length
    double lambda_cubed;
    double lambda;
};

// eta = sqrt( sum (m_i pi / l_i)^2 ). Throws for a size mismatch, negative
// entries, or the all-zero mode.
inline double mode_frequency(const BoxDomain& box, const ModeIndex& mode) {
    if (static_cast<int>(mode.m.size()) != box.dim() - 1)
        throw std::invalid_argument("mode_frequency: mode index must have dim-1 entries");
    double q = 0.0;
    long sum = 0;
    for (std::size_t i = 0; i < mode.m.size(); ++i) {
        if (mode.m[i] < 0) throw std::domain_error("mode_frequency: mode numbers must be >= 0");
        const double r = static_cast<double>(mode.m[i]) * pi / box.side(static_cast<int>(i));
        q += r * r;
        sum += mode.m[i];
    }
    if (sum == 0) throw std::domain_error("mode_frequency: the all-zero mode has no frequency");
    return std::sqrt(q);
}

// lambda^3 = t(eta l_n) / (rho^3 l_n^3); the same formula serves both
// variants, which differ only in the admissible mode set.
inline double eigenvalue_cubed(const SteklovProblem& problem, const ModeIndex& mode) {
    if (!admissible(mode, problem.variant))
        throw std::domain_error("eigenvalue_cubed: mode not admissible for this variant");
    if (problem.rho == 0.0)
        throw std::domain_error("eigenvalue_cubed: zero density has an empty spectrum");
    const double l_n = problem.box.height();
    const double u = mode_frequency(problem.box, mode) * l_n;
    return t_fn(u) / (detail::cube(problem.rho) * detail::cube(l_n));
}

inline SteklovMode make_mode(const SteklovProblem& problem, ModeIndex mode) {
    const double freq = mode_frequency(problem.box, mode);
    const double lc = eigenvalue_cubed(problem, mode);
    return SteklovMode{problem, std::move(mode), freq, lc, std::cbrt(lc)};
}

namespace detail {

// Profile in the exponential basis:
//   Y(x) = e^{eta(x-L)} (p0 + p1 eta x) + e^{-eta x} (q0 + q1 eta x)
// with (u = eta L, e2u = e^{-2u}, DK = 1 + e2u^2 - (2 + 4u^2) e2u):
//   p0 = -e^{-u} (1 + 2u + 2u^2 - e2u) / DK,   p1 = e^{-u} (1 + 2u - e2u) / DK,
//   q0 = (1 + (2u - 1 - 2u^2) e2u) / DK,       q1 = (1 + (2u - 1) e2u) / DK.
// The k-th derivative is
//   eta^k [ e^{eta(x-L)} (p0 + p1 eta x + k p1)
//           + (-1)^k e^{-eta x} (q0 + q1 eta x - k q1) ].
struct ProfilePlan {
    double eta, length, u;
    double p0, p1, q0, q1;

    static ProfilePlan make(double eta, double length) {
        const double u = eta * length;
        const double e2u = std::exp(-2.0 * u);
        const double dk = (1.0 + e2u * e2u) - (2.0 + 4.0 * u * u) * e2u;
        const double emu = std::exp(-u);
        ProfilePlan p;
        p.eta = eta;
        p.length = length;
        p.u = u;
        p.p0 = -emu * (1.0 + 2.0 * u + 2.0 * u * u - e2u) / dk;
        p.p1 = emu * (1.0 + 2.0 * u - e2u) / dk;
        p.q0 = (1.0 + ((2.0 * u - 1.0) - 2.0 * u * u) * e2u) / dk;
        p.q1 = (1.0 + (2.0 * u - 1.0) * e2u) / dk;
        return p;
    }

    double value(double x) const {
        const double gx = eta * x;
        return std::exp(eta * (x - length)) * (p0 + p1 * gx) +
               std::exp(-gx) * (q0 + q1 * gx);
    }

    double derivative(double x, int order) const {
        const double gx = eta * x;
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;
        double scale = 1.0;
        for (int k = 0; k < order; ++k) scale *= eta;
        const double kd = static_cast<double>(order);
        return scale * (std::exp(eta * (x - length)) * (p0 + p1 * gx + kd * p1) +
                        sign * std::exp(-gx) * (q0 + q1 * gx - kd * q1));
    }
};

inline void require_profile_args(double eta, double l_n, double x_n, const char* where) {
    if (!std::isfinite(eta) || !(eta > 0.0))
        throw std::domain_error(std::string(where) + ": frequency must be positive and finite");
    if (!std::isfinite(l_n) || !(l_n > 0.0))
        throw std::domain_error(std::string(where) + ": l_n must be positive and finite");
    if (!std::isfinite(x_n) || x_n < 0.0 || x_n > l_n)
        throw std::domain_error(std::string(where) + ": x_n must lie in [0, l_n]");
}

}  // namespace detail

// Clamped-top profile with Y(0) = 1, Y'(0) = 0, Y(l_n) = Y'(l_n) = 0.
inline double profile_Y(double eta, double l_n, double x_n) {
    detail::require_profile_args(eta, l_n, x_n, "profile_Y");
    return detail::ProfilePlan::make(eta, l_n).value(x_n);
}

// Same closed form with beta in place of eta (the free-lateral profile).
inline double profile_Z(double beta, double l_n, double x_n) {
    detail::require_profile_args(beta, l_n, x_n, "profile_Z");
    return detail::ProfilePlan::make(beta, l_n).value(x_n);
}

// Exact k-th derivative of the profile, k in 1..4 (coefficients
// differentiated analytically, not finite differences).
inline double profile_derivative(double eta, double l_n, double x_n, int order) {
    detail::require_profile_args(eta, l_n, x_n, "profile_derivative");
    if (order < 1 || order > 4)
        throw std::domain_error("profile_derivative: order must be in 1..4");
    return detail::ProfilePlan::make(eta, l_n).derivative(x_n, order);
}

namespace detail {

// Lateral factor sin/cos(k x) and derivatives of order 0..3.
inline double lateral_factor(ProblemVariant v, double k, double x, int order) {
    const double kx = k * x;
    if (v == ProblemVariant::LateralDirichlet) {
        switch (order) {
            case 0: return std::sin(kx);
            case 1: return k * std::cos(kx);
            case 2: return -k * k * std::sin(kx);
            default: return -k * k * k * std::cos(kx);
        }
    }
    switch (order) {
        case 0: return std::cos(kx);
        case 1: return -k * std::sin(kx);
        case 2: return -k * k * std::cos(kx);
        default: return k * k * k * std::sin(kx);
    }
}

inline void require_point_in_box(const BoxDomain& box, std::span<const double> x, const char* where) {
    if (static_cast<int>(x.size()) != box.dim())
        throw std::invalid_argument(std::string(where) + ": point must have dim coordinates");
    for (int i = 0; i < box.dim(); ++i)
        if (!std::isfinite(x[static_cast<std::size_t>(i)]) ||
            x[static_cast<std::size_t>(i)] < 0.0 || x[static_cast<std::size_t>(i)] > box.side(i))
            throw std::domain_error(std::string(where) + ": point outside the closed box");
}

// prod over lateral axes of the factor (derivative of order d on axis `diff_axis`,
// order 0 elsewhere), evaluated at the lateral coordinates of x.
inline double lateral_product(const SteklovProblem& p, const ModeIndex& mode,
                              std::span<const double> x, int diff_axis, int diff_order) {
    double prod = 1.0;
    for (int i = 0; i + 1 < p.box.dim(); ++i) {
        const double k = static_cast<double>(mode.m[static_cast<std::size_t>(i)]) * pi / p.box.side(i);
        const int ord = (i == diff_axis) ? diff_order : 0;
        prod *= lateral_factor(p.variant, k, x[static_cast<std::size_t>(i)], ord);
    }
    return prod;
}

}  // namespace detail

// Product eigenfunction with c = 1, evaluated at a point of the closed box.
inline double eigenfunction_eval(const SteklovProblem& problem, const ModeIndex& mode,
                                 std::span<const double> x) {
    if (!admissible(mode, problem.variant))
        throw std::domain_error("eigenfunction_eval: mode not admissible for this variant");
    detail::require_point_in_box(problem.box, x, "eigenfunction_eval");
    const double eta = mode_frequency(problem.box, mode);
    const auto plan = detail::ProfilePlan::make(eta, problem.box.height());
    return detail::lateral_product(problem, mode, x, -1, 0) * plan.value(x.back());
}

// Scaled residuals of every condition the product eigenfunction must satisfy.
// All entries are dimensionless: values are scaled against max|u| = 1 on the
// base face, j-th normal derivatives against eta^j, and the base eigenvalue
// condition against lambda^3 rho^3 itself.
struct ResidualReport {
    double flux = 0.0;        // base face: |d(lap u)/dx_n - lambda^3 rho^3 u| / (lambda^3 rho^3)
    double base_slope = 0.0;  // base face: |du/dx_n| / eta
    double top_value = 0.0;   // top face: |u|
    double top_slope = 0.0;   // top face: |du/dx_n| / eta
    double lateral = 0.0;     // lateral faces: variant's conditions, scaled by eta powers
    double ode = 0.0;         // interior: |Y'''' - 2 eta^2 Y'' + eta^4 Y| / (sum of term magnitudes)

    double max_scaled() const {
        double m = flux;
        if (base_slope > m) m = base_slope;
        if (top_value > m) m = top_value;
        if (top_slope > m) m = top_slope;
        if (lateral > m) m = lateral;
        if (ode > m) m = ode;
        return m;
    }
};

// Verifies one eigenpair against its boundary-value problem on sampled faces
// (11 points per lateral axis plus the face centre on the base; 5 x 7 grids
// on lateral faces) and the profile equation at 21 interior stations.
inline ResidualReport steklov_residual(const SteklovProblem& problem, const ModeIndex& mode) {
    if (!admissible(mode, problem.variant))
        throw std::domain_error("steklov_residual: mode not admissible for this variant");
    if (problem.rho == 0.0)
        throw std::domain_error("steklov_residual: zero density has an empty spectrum");

    const int n = problem.box.dim();
    const double l_n = problem.box.height();
    const double eta = mode_frequency(problem.box, mode);
    const auto plan = detail::ProfilePlan::make(eta, l_n);
    const double lam3rho3 = eigenvalue_cubed(problem, mode) * detail::cube(problem.rho);

    const double y0 = plan.value(0.0);
    const double y1_0 = plan.derivative(0.0, 1);
    const double y3_0 = plan.derivative(0.0, 3);
    const double y_L = plan.value(l_n);
    const double y1_L = plan.derivative(l_n, 1);

    ResidualReport report;

    // Base-face grid: flux condition and the vanishing normal derivative.
    // u = X * Y with Y(0) = 1, so max|u| on the base face is 1 at c = 1.
    {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
        const int steps = 10;
        bool done = false;
        auto probe = [&](std::span<const double> pt) {
            const double X = detail::lateral_product(problem, mode, pt, -1, 0);
            const double flux = X * (y3_0 - eta * eta * y1_0);
            const double r = std::abs(flux - lam3rho3 * X * y0) / lam3rho3;
            if (r > report.flux) report.flux = r;
            const double slope = std::abs(X * y1_0) / eta;
            if (slope > report.base_slope) report.base_slope = slope;
        };
        while (!done) {
            for (int i = 0; i < n - 1; ++i)
                x[static_cast<std::size_t>(i)] =
                    problem.box.side(i) * static_cast<double>(idx[static_cast<std::size_t>(i)]) / steps;
            probe(x);
            int level = 0;
            for (;;) {
                if (level == n - 1) { done = true; break; }
                if (++idx[static_cast<std::size_t>(level)] <= steps) break;
                idx[static_cast<std::size_t>(level)] = 0;
                ++level;
            }
        }
        for (int i = 0; i < n - 1; ++i) x[static_cast<std::size_t>(i)] = 0.5 * problem.box.side(i);
        probe(x);

        // Top-face conditions ride on the same lateral grid scale: |X| <= 1.
        report.top_value = std::abs(y_L);
        report.top_slope = std::abs(y1_L) / eta;
    }

    // Lateral faces: 5 points per remaining lateral axis x 7 heights.
    for (int face_axis = 0; face_axis + 1 < n; ++face_axis) {
        for (double face_coord : {0.0, problem.box.side(face_axis)}) {
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            x[static_cast<std::size_t>(face_axis)] = face_coord;
            std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
            bool done = false;
            while (!done) {
                for (int i = 0, slot = 0; i + 1 < n; ++i) {
                    if (i == face_axis) continue;
                    x[static_cast<std::size_t>(i)] =
                        problem.box.side(i) * (static_cast<double>(idx[static_cast<std::size_t>(slot)]) / 4.0);
                    ++slot;
                }
                for (int j = 0; j < 7; ++j) {
                    const double xn = l_n * static_cast<double>(j) / 6.0;
                    x[static_cast<std::size_t>(n - 1)] = xn;
                    const double y = plan.value(xn);
                    const double y2 = plan.derivative(xn, 2);
                    const double lap_profile = y2 - eta * eta * y;
                    double r;
                    if (problem.variant == ProblemVariant::LateralDirichlet) {
                        const double X = detail::lateral_product(problem, mode, x, -1, 0);
                        r = std::abs(X * y);                                       // u = 0
                        const double rl = std::abs(X * lap_profile) / (eta * eta); // lap u = 0
                        if (rl > r) r = rl;
                    } else {
                        const double dX = detail::lateral_product(problem, mode, x, face_axis, 1);
                        r = std::abs(dX * y) / eta;                                  // du/dn = 0
                        const double rl = std::abs(dX * lap_profile) / (eta * eta * eta);  // d(lap u)/dn = 0
                        if (rl > r) r = rl;
                    }
                    if (r > report.lateral) report.lateral = r;
                }
                int level = 0;
                const int lateral_axes = n - 2;
                for (;;) {
                    if (level >= lateral_axes) { done = true; break; }
                    if (++idx[static_cast<std::size_t>(level)] <= 4) break;
                    idx[static_cast<std::size_t>(level)] = 0;
                    ++level;
                }
            }
        }
    }

    // Interior profile equation at 21 uniform stations.
    for (int j = 0; j <= 20; ++j) {
        const double xn = l_n * static_cast<double>(j) / 20.0;
        const double y = plan.value(xn);
        const double y2 = plan.derivative(xn, 2);
        const double y4 = plan.derivative(xn, 4);
        const double e2 = eta * eta;
        const double resid = std::abs(y4 - 2.0 * e2 * y2 + e2 * e2 * y);
        const double scale = std::abs(y4) + 2.0 * e2 * std::abs(y2) + e2 * e2 * std::abs(y);
        const double r = resid / (scale > 0.0 ? scale : 1.0);
        if (r > report.ode) report.ode = r;
    }

    return report;
}

// Maps a Neumann eigenvalue alpha of the (n-1)-dimensional base to the
// Steklov eigenvalue cube of the cylinder base x [0, l_n]:
//   gamma^3 = t(l_n sqrt(alpha)) / (rho^3 l_n^3).
// Requires l_n sqrt(alpha) >= 1 so the argument stays on the monotone branch.
inline double neumann_to_steklov(double alpha, double l_n, double rho) {
    if (!std::isfinite(alpha) || !(alpha > 0.0))
        throw std::domain_error("neumann_to_steklov: alpha must be positive and finite");
    if (!std::isfinite(l_n) || !(l_n > 0.0))
        throw std::domain_error("neumann_to_steklov: l_n must be positive and finite");
    if (!std::isfinite(rho) || !(rho > 0.0))
        throw std::domain_error("neumann_to_steklov: rho must be positive and finite");
    const double arg = l_n * std::sqrt(alpha);
    if (arg < 1.0)
        throw std::domain_error("neumann_to_steklov: l_n*sqrt(alpha) below the monotone range");
    return t_fn(arg) / (detail::cube(rho) * detail::cube(l_n));
}

}  // namespace steklov
