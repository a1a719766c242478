#include "credinfo/analytic_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace credinfo {
namespace {

// Exponent of the reflected term.  The negative sign is the one the
// bridge-corrected Monte Carlo confirms; the flipped build exists only as a
// negative control for the validation suite.
double reflection_exponent(double nu, double y, double sigma) {
#ifdef CREDINFO_FLIP_REFLECTION_SIGN
    return 2.0 * nu * y / (sigma * sigma);
#else
    return -2.0 * nu * y / (sigma * sigma);
#endif
}

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_norm_cdf(double x) {
    if (x > -30.0) return std::log(norm_cdf(x));
    // asymptotic Mills-ratio expansion
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double survival_prob(double y, double nu, double sigma, double h) {
    if (!(sigma > 0.0)) throw std::invalid_argument("survival_prob: sigma must be > 0");
    if (h < 0.0 || std::isnan(h)) throw std::invalid_argument("survival_prob: horizon must be >= 0");
    if (y < 0.0 || std::isnan(y)) throw std::invalid_argument("survival_prob: log-distance must be >= 0");
    if (h == 0.0) return 1.0;
    if (y == 0.0) return 0.0;
    const double s = sigma * std::sqrt(h);
    const double direct = norm_cdf((y + nu * h) / s);
    const double reflected = std::exp(reflection_exponent(nu, y, sigma) + log_norm_cdf((-y + nu * h) / s));
    return std::clamp(direct - reflected, 0.0, 1.0);
}

double hitting_time_density(double y, double nu, double sigma, double s) {
    if (!(sigma > 0.0)) throw std::invalid_argument("hitting_time_density: sigma must be > 0");
    if (!(y > 0.0)) throw std::invalid_argument("hitting_time_density: log-distance must be > 0");
    if (!(s > 0.0)) throw std::invalid_argument("hitting_time_density: time must be > 0");
    const double drift = y + nu * s;
    return y / (sigma * std::sqrt(2.0 * std::numbers::pi * s * s * s)) *
           std::exp(-drift * drift / (2.0 * sigma * sigma * s));
}

double joint_density_terminal_min(double z, double y, double nu, double sigma, double h) {
    if (!(sigma > 0.0)) throw std::invalid_argument("joint_density_terminal_min: sigma must be > 0");
    if (!(y > 0.0)) throw std::invalid_argument("joint_density_terminal_min: log-distance must be > 0");
    if (!(h > 0.0)) throw std::invalid_argument("joint_density_terminal_min: horizon must be > 0");
    if (z <= -y) return 0.0;
    const double s = sigma * std::sqrt(h);
    const double w1 = (z - nu * h) / s;
    const double w2 = (z + 2.0 * y - nu * h) / s;
    const double k = -2.0 * nu * y / (sigma * sigma);
    const double value = kInvSqrt2Pi * (std::exp(-0.5 * w1 * w1) - std::exp(k - 0.5 * w2 * w2)) / s;
    return std::max(0.0, value);
}

}  // namespace credinfo
