#include "credinfo/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "credinfo/analytic_kernels.hpp"
#include "credinfo/errors.hpp"
#include "credinfo/parallel.hpp"

namespace credinfo {

BarrierLaw::BarrierLaw(std::vector<double> levels, std::vector<double> weights)
    : levels_(std::move(levels)), weights_(std::move(weights)) {
    if (levels_.empty()) throw std::invalid_argument("BarrierLaw: at least one level required");
    if (levels_.size() != weights_.size()) throw std::invalid_argument("BarrierLaw: levels and weights differ in size");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i] > 0.0) || !std::isfinite(levels_[i])) throw std::invalid_argument("BarrierLaw: levels must be > 0");
        if (i > 0 && !(levels_[i] > levels_[i - 1])) throw std::invalid_argument("BarrierLaw: levels must be strictly increasing");
        if (!(weights_[i] > 0.0)) throw std::invalid_argument("BarrierLaw: weights must be > 0");
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("BarrierLaw: weights must sum to 1");
}

BarrierLaw BarrierLaw::constant(double level) { return BarrierLaw({level}, {1.0}); }

BarrierLaw BarrierLaw::binomial(double low, double high, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("BarrierLaw: alpha must lie in (0, 1)");
    return BarrierLaw({low, high}, {alpha, 1.0 - alpha});
}

std::size_t BarrierLaw::index_of(double level) const {
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i] == level) return i;
    throw std::invalid_argument("BarrierLaw: value is not a level of the law");
}

void BarrierLaw::check_below(double x0) const {
    if (!(levels_.back() < x0)) {
        std::ostringstream msg;
        msg << "BarrierLaw: level " << levels_.back() << " is not below x0 = " << x0;
        throw std::invalid_argument(msg.str());
    }
}

BarrierLaw signal_law(double low, double high, const BrownianSignal& signal) {
    if (!(signal.t0 > 0.0)) throw std::invalid_argument("BrownianSignal: t0 must be > 0");
    const double alpha = norm_cdf(signal.c / std::sqrt(signal.t0));
    return BarrierLaw({low, high}, {alpha, 1.0 - alpha});
}

void BarrierModel::validate() const {
    if (const auto* signal = std::get_if<BrownianSignal>(&density)) {
        if (!(signal->t0 > 0.0)) throw std::invalid_argument("BrownianSignal: t0 must be > 0");
        if (!std::isfinite(signal->c)) throw std::invalid_argument("BrownianSignal: c must be finite");
        if (law.size() != 2) throw std::invalid_argument("BrownianSignal: requires exactly two levels");
        const double alpha = norm_cdf(signal->c / std::sqrt(signal->t0));
        if (std::abs(law.weight(0) - alpha) > 1e-9)
            throw std::invalid_argument("BrownianSignal: barrier weights inconsistent with P(B_t0 <= c)");
    }
}

double BarrierModel::density_horizon() const {
    if (const auto* signal = std::get_if<BrownianSignal>(&density)) return signal->t0;
    return std::numeric_limits<double>::infinity();
}

namespace {

const BrownianSignal* signal_of(const BarrierModel& model, std::size_t level_index, double t) {
    if (level_index >= model.law.size()) throw std::invalid_argument("density: level index out of range");
    if (t < 0.0) throw std::invalid_argument("density: t must be >= 0");
    const auto* signal = std::get_if<BrownianSignal>(&model.density);
    if (signal && !(t < signal->t0)) throw DomainViolation("density: signal density undefined at t >= t0");
    return signal;
}

}  // namespace

double log_density(const BarrierModel& model, std::size_t level_index, double t, double b) {
    const BrownianSignal* signal = signal_of(model, level_index, t);
    if (!signal) return 0.0;
    const double d = (b - signal->c) / std::sqrt(signal->t0 - t);
    const double d0 = -signal->c / std::sqrt(signal->t0);
    // level 0 is revealed by B_{t0} <= c, level 1 by B_{t0} > c
    return level_index == 1 ? log_norm_cdf(d) - log_norm_cdf(d0) : log_norm_cdf(-d) - log_norm_cdf(-d0);
}

double density(const BarrierModel& model, std::size_t level_index, double t, double b) {
    return std::exp(log_density(model, level_index, t, b));
}

double density_at(const BarrierModel& model, double level, double t, double b) {
    return density(model, model.law.index_of(level), t, b);
}

double rho_manager(const BarrierModel& model, std::size_t level_index, double t, double b) {
    const BrownianSignal* signal = signal_of(model, level_index, t);
    if (!signal) return 0.0;
    const double root = std::sqrt(signal->t0 - t);
    const double d = (b - signal->c) / root;
    const double log_phi = -0.5 * d * d - 0.5 * std::log(2.0 * std::numbers::pi);
    if (level_index == 1) return std::exp(log_phi - log_norm_cdf(d)) / root;
    return -std::exp(log_phi - log_norm_cdf(-d)) / root;
}

NoiseModel::NoiseModel(double sigma_eps) : sigma_eps_(sigma_eps) {
    if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)) throw std::invalid_argument("NoiseModel: sigma_eps must be > 0");
}

NoiseModel NoiseModel::with_variance_at(double t, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("NoiseModel: variance must be > 0");
    return NoiseModel(std::sqrt(variance * (1.0 + t)));
}

double NoiseModel::variance(double t) const {
    if (t < 0.0) throw std::invalid_argument("NoiseModel: t must be >= 0");
    return sigma_eps_ * sigma_eps_ / (1.0 + t);
}

double NoiseModel::log_density(double t, double x) const {
    const double v = variance(t);
    return -0.5 * x * x / v - 0.5 * std::log(2.0 * std::numbers::pi * v);
}

double NoiseModel::density(double t, double x) const { return std::exp(log_density(t, x)); }

double NoiseModel::increment_variance(double t, double theta) const {
    if (theta < t) throw std::invalid_argument("NoiseModel: increment requires theta >= t");
    return std::max(0.0, variance(t) - variance(theta));
}

std::vector<double> insider_weights(const BarrierModel& model, const NoiseModel& noise, double t, double b,
                                    double noisy_level) {
    const std::size_t n = model.law.size();
    std::vector<double> logw(n);
    for (std::size_t i = 0; i < n; ++i)
        logw[i] = std::log(model.law.weight(i)) + log_density(model, i, t, b) +
                  noise.log_density(t, noisy_level - model.law.level(i));
    const double top = *std::max_element(logw.begin(), logw.end());
    if (!std::isfinite(top)) throw NumericalFailure("insider_weights: all weights vanish");
    double total = 0.0;
    for (double& w : logw) {
        w = std::exp(w - top);
        total += w;
    }
    for (double& w : logw) w /= total;
    return logw;
}

double rho_insider(const BarrierModel& model, const NoiseModel& noise, double t, double b, double noisy_level) {
    if (model.independent()) return 0.0;
    const auto w = insider_weights(model, noise, t, b, noisy_level);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * rho_manager(model, i, t, b);
    return acc;
}

namespace {

double draw_level(const BarrierLaw& law, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < law.size(); ++i) {
        cumulative += law.weight(i);
        if (u < cumulative) return law.level(i);
    }
    return law.levels().back();
}

}  // namespace

std::vector<double> sample_barriers(const BarrierLaw& law, std::size_t n, std::uint64_t seed, unsigned workers) {
    std::vector<double> out(n);
    for_each_block(n, workers, [&](std::size_t block, std::size_t first, std::size_t last) {
        auto rng = block_engine(seed, Stream::Barrier, block);
        std::uniform_real_distribution<double> uniform;
        for (std::size_t i = first; i < last; ++i) out[i] = draw_level(law, uniform(rng));
    });
    return out;
}

double sample_barrier(const BarrierLaw& law, std::uint64_t seed) { return sample_barriers(law, 1, seed, 1).front(); }

std::vector<double> sample_noise_paths(const NoiseModel& noise, std::span<const double> grid, std::size_t n,
                                       std::uint64_t seed, unsigned workers) {
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (grid[k] < grid[k - 1]) throw std::invalid_argument("sample_noise_path: grid must be non-decreasing");
    const std::size_t width = grid.size();
    std::vector<double> out(n * width);
    if (width == 0) return out;
    for_each_block(n, workers, [&](std::size_t block, std::size_t first, std::size_t last) {
        auto rng = block_engine(seed, Stream::Noise, block);
        std::normal_distribution<double> normal;
        for (std::size_t p = first; p < last; ++p) {
            double* eps = out.data() + p * width;
            // W at the smallest time u(t_last) first, then outward in u-time
            double u_prev = noise.variance(grid[width - 1]);
            double w = std::sqrt(u_prev) * normal(rng);
            eps[width - 1] = w;
            for (std::size_t k = width - 1; k-- > 0;) {
                const double u = noise.variance(grid[k]);
                w += std::sqrt(std::max(0.0, u - u_prev)) * normal(rng);
                eps[k] = w;
                u_prev = u;
            }
        }
    });
    return out;
}

std::vector<double> sample_noise_path(const NoiseModel& noise, std::span<const double> grid, std::uint64_t seed) {
    return sample_noise_paths(noise, grid, 1, seed, 1);
}

}  // namespace credinfo
