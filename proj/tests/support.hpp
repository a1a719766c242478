#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library: normals come from std::erfc, paths from a local RNG.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ref {

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// First-passage survival of nu s + sigma W_s above -y over [0, h].
inline double survival(double y, double nu, double sigma, double h) {
    const double s = sigma * std::sqrt(h);
    return Phi((y + nu * h) / s) - std::exp(-2.0 * nu * y / (sigma * sigma)) * Phi((-y + nu * h) / s);
}

/// Minimum of a Brownian bridge from a to b with variance v, sampled by
/// inverting P(min <= m) = exp(-2 (a - m)(b - m) / v).
inline double bridge_min(double a, double b, double v, double u) {
    return 0.5 * (a + b - std::sqrt((b - a) * (b - a) - 2.0 * v * std::log(u)));
}

struct Estimate {
    double mean;
    double se;
};

/// Sample mean and standard error of a Bernoulli count.
inline Estimate proportion(std::uint64_t hits, std::uint64_t n) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

inline bool within(double value, double reference, double se, double k = 3.0) {
    return std::abs(value - reference) <= k * se;
}

}  // namespace ref
