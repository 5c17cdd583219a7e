// steklov/weyl_constants.hpp — unit-ball volumes and the leading Weyl
// coefficients for the box problems.
//
//   biharmonic:  A(tau) ~ W tau^{n-1},  W = omega_{n-1} (16^{1/3} pi)^{-(n-1)}
//                                           * (prod_{i<n} l_i) * rho^{n-1}
//   harmonic :   B(tau) ~ W_h tau^{n-1}, W_h = omega_{n-1} (2 pi)^{-(n-1)}
//                                           * (prod_{i<n} l_i) * rho^{n-1}
//
// W_h / W = 2^{(n-1)/3} exactly; the harmonic constant is provided for
// comparison only.

#pragma once

#include <cmath>
#include <stdexcept>

#include "steklov/box_spectrum.hpp"

namespace steklov {

// omega_d = pi^{d/2} / Gamma(d/2 + 1) via the rational recursion
// omega_1 = 2, omega_2 = pi, omega_d = omega_{d-2} * 2 pi / d.
inline double unit_ball_volume(int d) {
    if (d < 1) throw std::domain_error("unit_ball_volume: dimension must be >= 1");
    double v = (d % 2 == 1) ? 2.0 : pi;
    for (int j = (d % 2 == 1) ? 3 : 4; j <= d; j += 2) v *= 2.0 * pi / static_cast<double>(j);
    return v;
}

inline double weyl_constant_biharmonic(const SteklovProblem& problem) {
    const int d = problem.box.dim() - 1;
    const double scale = std::cbrt(16.0) * pi;
    return unit_ball_volume(d) * std::pow(scale, -static_cast<double>(d)) *
           problem.box.base_area() * std::pow(problem.rho, static_cast<double>(d));
}

inline double weyl_constant_harmonic(const SteklovProblem& problem) {
    const int d = problem.box.dim() - 1;
    return unit_ball_volume(d) * std::pow(2.0 * pi, -static_cast<double>(d)) *
           problem.box.base_area() * std::pow(problem.rho, static_cast<double>(d));
}

}  // namespace steklov
