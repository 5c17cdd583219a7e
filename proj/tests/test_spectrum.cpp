#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "steklov/box_spectrum.hpp"
#include "steklov/counting.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace steklov;

namespace {

constexpr double kPi = std::numbers::pi;

SteklovProblem unit_square(ProblemVariant v = ProblemVariant::LateralDirichlet, double rho = 1.0) {
    return SteklovProblem(BoxDomain({1.0, 1.0}), v, rho);
}

// frozen from 50-digit evaluation
constexpr double t_at_pi = 68.796199583376509;
constexpr double lambda_at_pi = 4.0975237790802765;
constexpr double y_mid_pi = 0.42495344797152829;       // Y(1/2), eta = pi, l_n = 1
constexpr double lam3_box122_m21 = 543.32915590271404;  // l = (1,2,2), m = (2,1), rho = 1

}  // namespace

TEST_CASE("BoxDomain validation") {
    CHECK_THROWS_AS(BoxDomain({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain({1.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain({2.0, 1.0}), std::invalid_argument);  // lateral side above l_n
    CHECK_NOTHROW(BoxDomain({1.0, 1.0}));
    CHECK_NOTHROW(BoxDomain({0.5, 1.0, 1.0}));
    const BoxDomain box({0.5, 0.25, 2.0});
    CHECK(box.dim() == 3);
    CHECK(box.height() == 2.0);
    CHECK_THAT(box.base_area(), WithinRel(0.125, 1e-15));
}

TEST_CASE("SteklovProblem validation") {
    CHECK_THROWS_AS(SteklovProblem(BoxDomain({1.0, 1.0}), ProblemVariant::LateralFree, -1.0),
                    std::invalid_argument);
    CHECK_NOTHROW(SteklovProblem(BoxDomain({1.0, 1.0}), ProblemVariant::LateralFree, 0.0));
}

TEST_CASE("mode admissibility") {
    CHECK(admissible(ModeIndex{{1}}, ProblemVariant::LateralDirichlet));
    CHECK_FALSE(admissible(ModeIndex{{0}}, ProblemVariant::LateralDirichlet));
    CHECK(admissible(ModeIndex{{0, 1}}, ProblemVariant::LateralFree));
    CHECK_FALSE(admissible(ModeIndex{{0, 0}}, ProblemVariant::LateralFree));
    CHECK_FALSE(admissible(ModeIndex{{1, 0}}, ProblemVariant::LateralDirichlet));
}

TEST_CASE("mode_frequency") {
    CHECK_THAT(mode_frequency(BoxDomain({1.0, 1.0}), ModeIndex{{1}}), WithinRel(kPi, 1e-15));
    CHECK_THAT(mode_frequency(BoxDomain({1.0, 1.0, 2.0}), ModeIndex{{1, 1}}),
               WithinRel(kPi * std::sqrt(2.0), 1e-15));
    CHECK_THAT(mode_frequency(BoxDomain({1.0, 2.0, 2.0}), ModeIndex{{2, 1}}),
               WithinRel(kPi * std::sqrt(4.25), 1e-15));
    CHECK_THROWS_AS(mode_frequency(BoxDomain({1.0, 1.0, 1.0}), ModeIndex{{0, 0}}), std::domain_error);
    CHECK_THROWS_AS(mode_frequency(BoxDomain({1.0, 1.0}), ModeIndex{{1, 1}}), std::invalid_argument);
}

TEST_CASE("eigenvalue_cubed: frozen values and scaling") {
    const auto p = unit_square();
    CHECK_THAT(eigenvalue_cubed(p, ModeIndex{{1}}), WithinRel(t_at_pi, 1e-13));
    CHECK_THAT(std::cbrt(eigenvalue_cubed(p, ModeIndex{{1}})), WithinRel(lambda_at_pi, 1e-13));

    // rho^3 in the denominator
    const auto p2 = unit_square(ProblemVariant::LateralDirichlet, 2.0);
    CHECK_THAT(eigenvalue_cubed(p2, ModeIndex{{1}}),
               WithinRel(eigenvalue_cubed(p, ModeIndex{{1}}) / 8.0, 1e-15));

    // frequency coincidence: free cube mode (1,0) equals the n = 2 case
    const SteklovProblem cube(BoxDomain({1.0, 1.0, 1.0}), ProblemVariant::LateralFree, 1.0);
    CHECK_THAT(eigenvalue_cubed(cube, ModeIndex{{1, 0}}), WithinRel(t_at_pi, 1e-13));

    const SteklovProblem box122(BoxDomain({1.0, 2.0, 2.0}), ProblemVariant::LateralFree, 1.0);
    CHECK_THAT(eigenvalue_cubed(box122, ModeIndex{{2, 1}}), WithinRel(lam3_box122_m21, 1e-12));

    CHECK_THROWS_AS(eigenvalue_cubed(p, ModeIndex{{0}}), std::domain_error);
    CHECK_THROWS_AS(eigenvalue_cubed(cube, ModeIndex{{0, 0}}), std::domain_error);
    const SteklovProblem zero_rho(BoxDomain({1.0, 1.0}), ProblemVariant::LateralFree, 0.0);
    CHECK_THROWS_AS(eigenvalue_cubed(zero_rho, ModeIndex{{1}}), std::domain_error);
}

TEST_CASE("lambda scales as 1/rho for both variants") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> rho_dist(0.25, 4.0);
    const std::array<std::vector<double>, 3> boxes = {
        std::vector<double>{1.0, 1.0}, {0.5, 1.0, 1.0}, {1.0, 0.75, 0.5, 1.25}};
    for (const auto& sides : boxes) {
        for (auto variant : {ProblemVariant::LateralDirichlet, ProblemVariant::LateralFree}) {
            const SteklovProblem base(BoxDomain(sides), variant, 1.0);
            std::vector<int> m(sides.size() - 1, 1);
            const double lam1 = std::cbrt(eigenvalue_cubed(base, ModeIndex{m}));
            for (int i = 0; i < 5; ++i) {
                const double rho = rho_dist(rng);
                const SteklovProblem scaled(BoxDomain(sides), variant, rho);
                const double lam = std::cbrt(eigenvalue_cubed(scaled, ModeIndex{m}));
                REQUIRE_THAT(lam * rho, WithinRel(lam1, 1e-12));
            }
        }
    }
}

TEST_CASE("profile: boundary normalisation") {
    for (double u : {std::numbers::pi, 2.0 * kPi, 10.0, 30.0, 100.0, 1000.0}) {
        CAPTURE(u);
        const double l_n = 1.0;
        REQUIRE_THAT(profile_Y(u, l_n, 0.0), WithinAbs(1.0, 1e-13));
        REQUIRE_THAT(profile_Y(u, l_n, l_n), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(profile_derivative(u, l_n, 0.0, 1), WithinAbs(0.0, 1e-12 * u));
        REQUIRE_THAT(profile_derivative(u, l_n, l_n, 1), WithinAbs(0.0, 1e-12 * u));
    }
    // non-unit heights
    REQUIRE_THAT(profile_Y(2.0, 3.0, 3.0), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(profile_Y(2.0, 3.0, 0.0), WithinAbs(1.0, 1e-13));
}

TEST_CASE("profile: frozen midpoint and oracle agreement") {
    CHECK_THAT(profile_Y(kPi, 1.0, 0.5), WithinRel(y_mid_pi, 1e-12));

    std::mt19937_64 rng(8181);
    std::uniform_real_distribution<double> u_dist(0.6, 40.0);
    std::uniform_real_distribution<double> len_dist(0.3, 3.0);
    std::uniform_real_distribution<double> x_dist(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const double length = len_dist(rng);
        const double eta = u_dist(rng) / length;
        const double x = x_dist(rng) * length;
        CAPTURE(eta, length, x);
        const auto coeffs = oracle::profile_coefficients(oracle::real(eta), oracle::real(length));
        const double expected = oracle::to_double(oracle::profile_derivative(coeffs, oracle::real(x), 0));
        REQUIRE_THAT(profile_Y(eta, length, x), WithinAbs(expected, 1e-12 * (1.0 + std::abs(expected))));
        for (int order = 1; order <= 4; ++order) {
            const double want =
                oracle::to_double(oracle::profile_derivative(coeffs, oracle::real(x), order));
            const double scale = std::pow(eta, order);  // derivative magnitudes are O(eta^k)
            REQUIRE_THAT(profile_derivative(eta, length, x, order),
                         WithinAbs(want, 1e-11 * (scale + std::abs(want))));
        }
    }
}

TEST_CASE("profile_Z is the same closed form") {
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(profile_Z(2.0 * kPi, 1.0, x) == profile_Y(2.0 * kPi, 1.0, x));
    }
    CHECK_THAT(profile_Z(2.0 * kPi, 1.0, 1.0), WithinAbs(0.0, 1e-9));
}

TEST_CASE("profile: third derivative at the base carries the eigenvalue") {
    for (double u : {kPi, 7.0, 20.0, 60.0, 200.0}) {
        for (double l_n : {1.0, 0.5, 2.5}) {
            const double eta = u / l_n;
            CAPTURE(eta, l_n);
            const double got = profile_derivative(eta, l_n, 0.0, 3);
            const double expected = t_fn(u) / (l_n * l_n * l_n);  // Y'''(0) = t(u)/l_n^3 = 2 eta^3 K
            REQUIRE_THAT(got, WithinRel(expected, 1e-10));
        }
    }
}

TEST_CASE("profile: the quartic ODE holds at random stations") {
    std::mt19937_64 rng(3131);
    std::uniform_real_distribution<double> x_dist(0.0, 1.0);
    for (double u : {kPi, 12.0, 47.0, 300.0}) {
        const double l_n = 1.25;
        const double eta = u / l_n;
        const double e2 = eta * eta;
        for (int i = 0; i < 20; ++i) {
            const double x = x_dist(rng) * l_n;
            CAPTURE(u, x);
            const double y = profile_Y(eta, l_n, x);
            const double y2 = profile_derivative(eta, l_n, x, 2);
            const double y4 = profile_derivative(eta, l_n, x, 4);
            const double resid = std::abs(y4 - 2.0 * e2 * y2 + e2 * e2 * y);
            const double scale = std::abs(y4) + 2.0 * e2 * std::abs(y2) + e2 * e2 * std::abs(y);
            REQUIRE(resid <= 1e-9 * (scale > 0.0 ? scale : 1.0));
        }
    }
}

TEST_CASE("profile: domain errors") {
    CHECK_THROWS_AS(profile_Y(kPi, 1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(profile_Y(kPi, 1.0, 1.1), std::domain_error);
    CHECK_THROWS_AS(profile_Y(0.0, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(profile_derivative(kPi, 1.0, 0.5, 0), std::domain_error);
    CHECK_THROWS_AS(profile_derivative(kPi, 1.0, 0.5, 5), std::domain_error);
}

TEST_CASE("eigenfunction: boundary zeros and separable value") {
    const auto p = unit_square();
    const ModeIndex m{{1}};
    // lateral faces (dirichlet): the sine factor vanishes
    CHECK_THAT(eigenfunction_eval(p, m, std::array{0.0, 0.5}), WithinAbs(0.0, 1e-12));
    CHECK_THAT(eigenfunction_eval(p, m, std::array{1.0, 0.5}), WithinAbs(0.0, 1e-12));
    // clamped top
    CHECK_THAT(eigenfunction_eval(p, m, std::array{0.3, 1.0}), WithinAbs(0.0, 1e-12));
    // centre: sin(pi/2) * Y(1/2)
    CHECK_THAT(eigenfunction_eval(p, m, std::array{0.5, 0.5}), WithinRel(y_mid_pi, 1e-12));
    // base trace equals the lateral factor
    CHECK_THAT(eigenfunction_eval(p, m, std::array{0.25, 0.0}),
               WithinRel(std::sin(kPi * 0.25), 1e-12));

    const SteklovProblem cube(BoxDomain({1.0, 1.0, 1.0}), ProblemVariant::LateralFree, 1.0);
    CHECK_THAT(eigenfunction_eval(cube, ModeIndex{{1, 0}}, std::array{0.0, 0.7, 0.0}),
               WithinRel(1.0, 1e-12));  // cos(0) * cos(0) * Y(0)

    CHECK_THROWS_AS(eigenfunction_eval(p, m, std::array{1.5, 0.5}), std::domain_error);
    CHECK_THROWS_AS(eigenfunction_eval(p, m, std::array{-0.1, 0.5}), std::domain_error);
}

TEST_CASE("steklov_residual: analytic identities hold to 1e-9") {
    const auto check = [](const SteklovProblem& p, const ModeIndex& m) {
        const ResidualReport rep = steklov_residual(p, m);
        CAPTURE(rep.flux, rep.ode, rep.lateral, rep.top_value, rep.top_slope, rep.base_slope);
        REQUIRE(rep.max_scaled() <= 1e-9);
    };
    check(unit_square(), ModeIndex{{1}});
    check(unit_square(ProblemVariant::LateralFree), ModeIndex{{3}});
    check(SteklovProblem(BoxDomain({1.0, 1.0, 1.0}), ProblemVariant::LateralDirichlet, 1.0),
          ModeIndex{{2, 3}});
    check(SteklovProblem(BoxDomain({1.0, 2.0, 2.0}), ProblemVariant::LateralFree, 1.0),
          ModeIndex{{0, 4}});
    check(SteklovProblem(BoxDomain({0.5, 1.0, 0.75, 1.0}), ProblemVariant::LateralFree, 1.0),
          ModeIndex{{1, 0, 2}});
    check(SteklovProblem(BoxDomain({1.0, 1.0, 1.0, 1.0}), ProblemVariant::LateralDirichlet, 1.0),
          ModeIndex{{1, 1, 1}});
}

TEST_CASE("steklov_residual: extreme frequencies stay clean") {
    // boundary-layer regime: the profile is a pure decaying exponential to
    // double precision, and every identity still closes
    const auto r = steklov_residual(unit_square(), ModeIndex{{200}});
    CHECK(r.max_scaled() <= 1e-9);
    const auto r4 = steklov_residual(
        SteklovProblem(BoxDomain({0.25, 0.5, 1.0, 1.0}), ProblemVariant::LateralFree, 2.0),
        ModeIndex{{7, 3, 11}});
    CHECK(r4.max_scaled() <= 1e-9);
}

TEST_CASE("steklov_residual: invariant under density rescaling") {
    const ModeIndex m{{2, 1}};
    const BoxDomain box({1.0, 1.0, 1.0});
    const auto r1 = steklov_residual(SteklovProblem(box, ProblemVariant::LateralDirichlet, 1.0), m);
    const auto r3 = steklov_residual(SteklovProblem(box, ProblemVariant::LateralDirichlet, 3.0), m);
    CHECK_THAT(r3.flux, WithinAbs(r1.flux, 1e-12));
    CHECK(r3.ode == r1.ode);
    CHECK(r3.lateral == r1.lateral);
}

TEST_CASE("neumann_to_steklov") {
    // consistency with the free cube mode (1,0,...): alpha = (pi/l)^2
    const SteklovProblem cube(BoxDomain({1.0, 1.0, 1.0}), ProblemVariant::LateralFree, 1.0);
    CHECK_THAT(neumann_to_steklov(kPi * kPi, 1.0, 1.0),
               WithinRel(eigenvalue_cubed(cube, ModeIndex{{1, 0}}), 1e-13));

    // strictly increasing in alpha on the admissible range
    double prev = neumann_to_steklov(1.0, 1.0, 1.0);
    for (double alpha = 1.5; alpha < 400.0; alpha *= 1.5) {
        const double cur = neumann_to_steklov(alpha, 1.0, 1.0);
        REQUIRE(cur > prev);
        prev = cur;
    }

    // cube-base Neumann eigenvalues reproduce the free spectrum
    const double l = 1.0, l_n = 1.0, rho = 1.0;
    std::vector<double> alphas;
    for (int m1 = 0; m1 <= 6; ++m1)
        for (int m2 = 0; m2 <= 6; ++m2) {
            if (m1 + m2 == 0) continue;
            alphas.push_back((m1 * kPi / l) * (m1 * kPi / l) + (m2 * kPi / l) * (m2 * kPi / l));
        }
    std::sort(alphas.begin(), alphas.end());
    std::vector<double> mapped;
    mapped.reserve(alphas.size());
    for (double a : alphas) mapped.push_back(neumann_to_steklov(a, l_n, rho));
    for (std::size_t i = 0; i + 1 < mapped.size(); ++i) REQUIRE(mapped[i] <= mapped[i + 1]);
    // the mapped sequence reproduces the free spectrum of the cylinder
    const auto free_modes = smallest_eigenvalues(cube, 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CAPTURE(i);
        REQUIRE_THAT(mapped[i], WithinRel(free_modes[i].lambda_cubed, 1e-13));
    }

    CHECK_THROWS_AS(neumann_to_steklov(0.5, 1.0, 1.0), std::domain_error);  // l_n sqrt(alpha) < 1
    CHECK_THROWS_AS(neumann_to_steklov(-1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(neumann_to_steklov(4.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("eigenvalue route matches the literal closed form") {
    // the full textbook expression, evaluated naively in double
    const auto literal = [](double eta, double l_n, double rho) {
        const double u = eta * l_n;
        const double sh = std::sinh(u);
        const double ch = std::cosh(u);
        return 2.0 * eta * eta * eta * (sh * ch + u) /
               ((sh * sh - u * u) * rho * rho * rho);
    };
    std::mt19937_64 rng(7777);
    std::uniform_real_distribution<double> side(0.3, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double l1 = side(rng);
        const double l2 = side(rng);
        const double ln = 1.0;
        const SteklovProblem p(BoxDomain({l1, l2, ln}), ProblemVariant::LateralFree, 1.0);
        const ModeIndex m{{static_cast<int>(1 + i % 4), static_cast<int>(i % 3)}};
        if (!admissible(m, p.variant)) continue;
        const double eta = mode_frequency(p.box, m);
        if (eta * ln > 300.0) continue;  // literal form would overflow
        CAPTURE(l1, l2, eta);
        REQUIRE_THAT(eigenvalue_cubed(p, m), WithinRel(literal(eta, ln, 1.0), 1e-12));
    }
}
