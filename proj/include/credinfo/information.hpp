#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace credinfo {

/// Discrete law of the default barrier L: P(L = levels[i]) = weights[i].
class BarrierLaw {
public:
    /// Levels strictly increasing and positive, weights positive summing to 1
    /// (within 1e-12).  Throws std::invalid_argument otherwise.
    BarrierLaw(std::vector<double> levels, std::vector<double> weights);

    static BarrierLaw constant(double level);
    /// L = low with probability alpha, high otherwise.
    static BarrierLaw binomial(double low, double high, double alpha);

    std::size_t size() const { return levels_.size(); }
    double level(std::size_t i) const { return levels_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Index of an exact level value; std::invalid_argument if absent.
    std::size_t index_of(double level) const;
    /// X_0 > L almost surely: every level must lie below x0.
    void check_below(double x0) const;

private:
    std::vector<double> levels_;
    std::vector<double> weights_;
};

/// L independent of F: the conditional density is identically 1.
struct IndependentDensity {};

/// Two-level barrier revealed by the sign of B_{t0} - c: L = low if
/// B_{t0} <= c, high otherwise.  The conditional density is
/// p_t(high) = Phi((B_t - c)/sqrt(t0 - t)) / Phi(-c/sqrt(t0)) for t < t0.
struct BrownianSignal {
    double t0 = 2.0;
    double c = 0.0;
};

using DensityModel = std::variant<IndependentDensity, BrownianSignal>;

/// Barrier law plus the conditional density of L given F_t.
struct BarrierModel {
    BarrierLaw law;
    DensityModel density = IndependentDensity{};

    /// For BrownianSignal: exactly two levels and weights equal to
    /// (Phi(c/sqrt t0), Phi(-c/sqrt t0)) within 1e-9.
    void validate() const;
    bool independent() const { return std::holds_alternative<IndependentDensity>(density); }
    /// Signal horizon, +inf for the independent model.
    double density_horizon() const;
};

/// Barrier law implied by a signal: (low, high) with weights P(B_{t0} <= c), P(B_{t0} > c).
BarrierLaw signal_law(double low, double high, const BrownianSignal& signal);

/// Jacod density p_t(l_i) at Brownian value b.  DomainViolation for the
/// signal model at t >= t0.
double density(const BarrierModel& model, std::size_t level_index, double t, double b);
/// Same, addressed by level value.
double density_at(const BarrierModel& model, double level, double t, double b);
double log_density(const BarrierModel& model, std::size_t level_index, double t, double b);

/// rho^M_t(l_i) = beta_t(l_i) / p_t(l_i), the Ito coefficient of log p in dB.
double rho_manager(const BarrierModel& model, std::size_t level_index, double t, double b);

/// Insider noise eps_t = W_{u(t)} with u(t) = sigma_eps^2 / (1 + t): a
/// time-changed Brownian motion with backwardly independent increments.
class NoiseModel {
public:
    explicit NoiseModel(double sigma_eps);

    double sigma_eps() const { return sigma_eps_; }
    /// Variance schedule u(t).
    double variance(double t) const;
    /// Marginal density q_t(x) of eps_t.
    double density(double t, double x) const;
    double log_density(double t, double x) const;
    /// Variance of eps_theta - eps_t, u(t) - u(theta); std::invalid_argument if theta < t.
    double increment_variance(double t, double theta) const;

    /// Model whose marginal variance at time t equals `variance`.
    static NoiseModel with_variance_at(double t, double variance);

private:
    double sigma_eps_;
};

/// Normalized insider weights alpha_i p_t(l_i) q_t(l_t - l_i) over all levels,
/// computed in log space.  NumericalFailure if every weight vanishes.
std::vector<double> insider_weights(const BarrierModel& model, const NoiseModel& noise, double t, double b,
                                    double noisy_level);

/// rho^I_t = E[rho^M_t(L) | F_t, L_t = noisy_level].
double rho_insider(const BarrierModel& model, const NoiseModel& noise, double t, double b, double noisy_level);

/// One draw of L.
double sample_barrier(const BarrierLaw& law, std::uint64_t seed);
/// n independent draws of L; reproducible per (seed, n).
std::vector<double> sample_barriers(const BarrierLaw& law, std::size_t n, std::uint64_t seed, unsigned workers = 0);

/// eps on a non-decreasing time grid, sampled as W at the decreasing times
/// u(t_k).
std::vector<double> sample_noise_path(const NoiseModel& noise, std::span<const double> grid, std::uint64_t seed);
/// n paths, row-major (path * grid.size() + k).
std::vector<double> sample_noise_paths(const NoiseModel& noise, std::span<const double> grid, std::size_t n,
                                       std::uint64_t seed, unsigned workers = 0);

}  // namespace credinfo
