#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace credinfo {

inline constexpr double kDefaultQuadratureTolerance = 1e-8;

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) with a global absolute error target.
///
/// Infinite bounds are mapped onto a finite interval with x = a + t/(1-t)
/// (and its mirror images); the Kronrod nodes never touch t = 1, so no
/// explicit cutoff is applied there.  Integrals against Gaussian weights in the
/// pricers are instead truncated at kGaussianCutoff standard deviations, which
/// drops less than 2e-17 of probability mass.
///
/// Throws NumericalFailure when `max_intervals` subdivisions do not reach `tol`.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                                    std::size_t max_intervals = 4000);

/// Value of integrate_adaptive; std::invalid_argument when a > b or tol <= 0.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kDefaultQuadratureTolerance);

inline constexpr double kGaussianCutoff = 8.5;

/// Nodes and weights with sum_i w_i g(x_i) ~ E[g(Z)], Z ~ N(0, 1).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Probabilists' Gauss-Hermite rule of order n (n >= 1).
GaussHermiteRule gauss_hermite(std::size_t n);

}  // namespace credinfo
