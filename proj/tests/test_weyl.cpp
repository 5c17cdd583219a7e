#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "steklov/weyl.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace steklov;

namespace {

constexpr double kPi = std::numbers::pi;

// frozen from 50-digit arithmetic
constexpr double weyl_n2_unit = 0.25264272409001358;   // 2 / (16^{1/3} pi)
constexpr double weyl_n3_unit = 0.050130665749074891;  // 1 / (16^{2/3} pi)

SteklovProblem unit_problem(int n, ProblemVariant v = ProblemVariant::LateralFree, double rho = 1.0) {
    return SteklovProblem(BoxDomain(std::vector<double>(static_cast<std::size_t>(n), 1.0)), v, rho);
}

}  // namespace

TEST_CASE("unit_ball_volume") {
    CHECK_THAT(unit_ball_volume(1), WithinRel(2.0, 1e-15));
    CHECK_THAT(unit_ball_volume(2), WithinRel(kPi, 1e-15));
    CHECK_THAT(unit_ball_volume(3), WithinRel(4.0 * kPi / 3.0, 1e-15));
    for (int d = 1; d <= 12; ++d) {
        CAPTURE(d);
        const double gamma_form = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        REQUIRE_THAT(unit_ball_volume(d), WithinRel(gamma_form, 1e-13));
    }
    CHECK_THROWS_AS(unit_ball_volume(0), std::domain_error);
    CHECK_THROWS_AS(unit_ball_volume(-2), std::domain_error);
}

TEST_CASE("weyl constants") {
    CHECK_THAT(weyl_constant_biharmonic(unit_problem(2)), WithinRel(weyl_n2_unit, 1e-14));
    CHECK_THAT(weyl_constant_biharmonic(unit_problem(3)), WithinRel(weyl_n3_unit, 1e-14));
    CHECK_THAT(weyl_constant_harmonic(unit_problem(2)), WithinRel(1.0 / kPi, 1e-14));

    // zero density contributes nothing
    CHECK(weyl_constant_biharmonic(unit_problem(2, ProblemVariant::LateralFree, 0.0)) == 0.0);

    // face area and density weights
    const SteklovProblem p(BoxDomain({0.5, 2.0, 2.0}), ProblemVariant::LateralFree, 3.0);
    CHECK_THAT(weyl_constant_biharmonic(p), WithinRel(weyl_n3_unit * 9.0, 1e-13));
}

TEST_CASE("harmonic/biharmonic constant ratio is 2^{(n-1)/3}") {
    for (int n = 2; n <= 6; ++n) {
        const SteklovProblem p(BoxDomain(std::vector<double>(static_cast<std::size_t>(n), 1.0)),
                               ProblemVariant::LateralFree, 1.7);
        CAPTURE(n);
        REQUIRE_THAT(weyl_constant_harmonic(p) / weyl_constant_biharmonic(p),
                     WithinRel(std::pow(2.0, (n - 1) / 3.0), 1e-13));
    }
}

TEST_CASE("geometric_grid") {
    const auto grid = geometric_grid(10.0, 1000.0, 40);
    REQUIRE(grid.size() == 81);
    CHECK(grid.front() == 10.0);
    CHECK(grid.back() == 1000.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) REQUIRE(grid[i] < grid[i + 1]);
    CHECK_THROWS_AS(geometric_grid(10.0, 5.0, 40), std::domain_error);
    CHECK_THROWS_AS(geometric_grid(10.0, 100.0, 0), std::domain_error);
}

TEST_CASE("weyl_sweep: row consistency") {
    const auto p = unit_problem(2);
    const auto grid = geometric_grid(10.0, 200.0, 10);
    const WeylSweep sweep = weyl_sweep(p, grid);
    REQUIRE(sweep.rows.size() == grid.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const WeylRow& row = sweep.rows[i];
        REQUIRE(row.tau == grid[i]);
        REQUIRE(row.weyl_constant == sweep.weyl_constant);
        // integer reconstruction of the count from the ratio
        const double back = row.ratio * row.tau;
        REQUIRE(std::llround(back) == static_cast<long long>(row.count));
        REQUIRE_THAT(row.remainder, WithinAbs(static_cast<double>(row.count) - row.weyl_constant * row.tau, 1e-9));
    }
    // worker count never changes rows
    const WeylSweep par = weyl_sweep(p, grid, 4);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        REQUIRE(par.rows[i].count == sweep.rows[i].count);
        REQUIRE(par.rows[i].ratio == sweep.rows[i].ratio);
    }
}

TEST_CASE("weyl_sweep: grid validation") {
    const auto p = unit_problem(2);
    CHECK_THROWS_AS(weyl_sweep(p, std::vector<double>{}), std::domain_error);
    CHECK_THROWS_AS(weyl_sweep(p, std::vector<double>{2.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(weyl_sweep(p, std::vector<double>{1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(weyl_sweep(p, std::vector<double>{-1.0, 1.0}), std::domain_error);
}

TEST_CASE("weyl_sweep: convergence on decade grids") {
    {
        const auto p = unit_problem(2);
        const auto sweep = weyl_sweep(p, geometric_grid(10.0, 1000.0, 40));
        REQUIRE(sweep.rows.back().relative_gap <= 0.02);
        REQUIRE(sweep.rows.back().relative_gap < sweep.rows.front().relative_gap);
    }
    {
        const auto p = unit_problem(3);
        const auto sweep = weyl_sweep(p, geometric_grid(5.0, 200.0, 40));
        REQUIRE(sweep.rows.back().relative_gap <= 0.05);
    }
}

TEST_CASE("weyl_sweep: zero density") {
    const auto p = unit_problem(2, ProblemVariant::LateralFree, 0.0);
    const auto sweep = weyl_sweep(p, geometric_grid(10.0, 100.0, 5));
    for (const auto& row : sweep.rows) {
        REQUIRE(row.count == 0);
        REQUIRE(row.ratio == 0.0);
        REQUIRE(row.relative_gap == 0.0);
        REQUIRE(row.remainder == 0.0);
    }
}

TEST_CASE("variants converge to the same constant") {
    const auto grid = geometric_grid(5.0, 200.0, 20);
    const auto free_sweep = weyl_sweep(unit_problem(3, ProblemVariant::LateralFree), grid);
    const auto dir_sweep = weyl_sweep(unit_problem(3, ProblemVariant::LateralDirichlet), grid);
    const double gap_front = std::abs(free_sweep.rows.front().ratio - dir_sweep.rows.front().ratio);
    const double gap_back = std::abs(free_sweep.rows.back().ratio - dir_sweep.rows.back().ratio);
    REQUIRE(gap_back < gap_front);
    REQUIRE(gap_back <= 0.02);
}

TEST_CASE("corollary_check: inversion of the counting asymptotics") {
    const auto p = unit_problem(2, ProblemVariant::LateralDirichlet);
    const auto rows = corollary_check(p, 1000);
    REQUIRE(rows.size() == 1000);
    CHECK_THAT(rows.back().ratio, WithinAbs(1.0, 0.02));

    // n = 2 converges to machine precision almost immediately
    REQUIRE(std::abs(rows.back().ratio - 1.0) <= 1e-10);

    // the late-window deviation shrinks as k grows (n = 3, where the approach
    // to the asymptote is actually gradual)
    const auto rows3 = corollary_check(unit_problem(3, ProblemVariant::LateralFree), 1000);
    auto window_dev = [&](std::size_t k) {
        double dev = 0.0;
        for (std::size_t j = k / 2; j < k; ++j)
            dev = std::max(dev, std::abs(rows3[j].ratio - 1.0));
        return dev;
    };
    REQUIRE(window_dev(1000) < window_dev(500));
    REQUIRE(window_dev(500) < window_dev(250));

    // joint density scaling cancels in the ratio
    const auto scaled = corollary_check(unit_problem(2, ProblemVariant::LateralDirichlet, 2.0), 50);
    const auto base = corollary_check(p, 50);
    for (std::size_t i = 0; i < 50; ++i) {
        REQUIRE_THAT(scaled[i].lambda_k * 2.0, WithinRel(base[i].lambda_k, 1e-12));
        REQUIRE_THAT(scaled[i].ratio, WithinRel(base[i].ratio, 1e-12));
    }
    CHECK_THROWS_AS(corollary_check(p, 0), std::domain_error);
}

TEST_CASE("remainder_report") {
    {
        const auto p = unit_problem(2, ProblemVariant::LateralDirichlet);
        const auto grid = geometric_grid(10.0, 2000.0, 40);
        const RemainderSummary summary = remainder_report(p, grid);
        CAPTURE(summary.max_scaled_remainder, summary.slope_fit);
        REQUIRE(summary.max_scaled_remainder <= 2.0);
        REQUIRE(summary.slope_fit <= 0.3);
    }
    {
        const auto p = unit_problem(3);
        const RemainderSummary summary = remainder_report(p, geometric_grid(5.0, 200.0, 40));
        CAPTURE(summary.max_scaled_remainder, summary.slope_fit);
        REQUIRE(summary.slope_fit <= 1.3);
    }
    {
        const auto p = unit_problem(2, ProblemVariant::LateralFree, 0.0);
        const RemainderSummary summary = remainder_report(p, geometric_grid(10.0, 1500.0, 10));
        REQUIRE(summary.max_scaled_remainder == 0.0);
        REQUIRE(summary.fitted_rows == 0);
        REQUIRE(summary.slope_fit == 0.0);
    }
    CHECK_THROWS_AS(remainder_report(unit_problem(2), geometric_grid(10.0, 200.0, 10)),
                    std::domain_error);
}
