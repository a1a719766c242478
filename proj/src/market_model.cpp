#include "credinfo/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "credinfo/parallel.hpp"

namespace credinfo {

void GbmParams::validate() const {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw std::invalid_argument("GbmParams: x0 must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("GbmParams: sigma must be > 0");
    if (!std::isfinite(mu)) throw std::invalid_argument("GbmParams: mu must be finite");
}

MarketState MarketState::initial(const GbmParams& params) {
    return MarketState{0.0, params.x0, params.x0, 0.0};
}

MarketState MarketState::observed(const GbmParams& params, double t, double x, double x_min) {
    if (t < 0.0) throw std::invalid_argument("MarketState: t must be >= 0");
    if (!(x > 0.0) || !(x_min > 0.0)) throw std::invalid_argument("MarketState: values must be > 0");
    if (x_min > x || x_min > params.x0) throw std::invalid_argument("MarketState: x_min exceeds x or x0");
    return MarketState{t, x, x_min, brownian_from_value(params, t, x)};
}

double brownian_from_value(const GbmParams& params, double t, double x) {
    return (std::log(x / params.x0) - params.nu() * t) / params.sigma;
}

double sample_bridge_min(double a, double b, double variance, double u) {
    const double d = b - a;
    return 0.5 * (a + b - std::sqrt(d * d - 2.0 * variance * std::log(u)));
}

double bridge_survival(double a, double b, double level, double variance) {
    if (a <= level || b <= level) return 0.0;
    if (variance <= 0.0) return 1.0;
    return -std::expm1(-2.0 * (a - level) * (b - level) / variance);
}

PathSet::PathSet(GbmParams params, std::vector<double> grid, std::size_t n_paths, std::uint64_t seed)
    : params_(params), grid_(std::move(grid)), n_paths_(n_paths), seed_(seed),
      values_(n_paths * grid_.size()), mins_(n_paths * grid_.size()) {}

std::size_t PathSet::index_of(double t) const {
    const auto it = std::lower_bound(grid_.begin(), grid_.end(), t - 1e-12);
    if (it == grid_.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("PathSet: time is not a grid point");
    return static_cast<std::size_t>(it - grid_.begin());
}

PathSet simulate_paths(const GbmParams& params, double horizon, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, unsigned workers) {
    params.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_paths: horizon must be > 0");
    if (n_steps < 1) throw std::invalid_argument("simulate_paths: n_steps must be >= 1");
    if (n_paths < 1) throw std::invalid_argument("simulate_paths: n_paths must be >= 1");

    std::vector<double> grid(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) grid[k] = horizon * static_cast<double>(k) / static_cast<double>(n_steps);

    PathSet out(params, grid, n_paths, seed);
    const std::size_t width = grid.size();
    const double log_x0 = std::log(params.x0);
    const double nu = params.nu();
    const double sigma = params.sigma;

    for_each_block(n_paths, workers, [&](std::size_t block, std::size_t first, std::size_t last) {
        auto rng = block_engine(seed, Stream::FirmPaths, block);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        for (std::size_t p = first; p < last; ++p) {
            double* values = out.values_.data() + p * width;
            double* mins = out.mins_.data() + p * width;
            double log_x = log_x0;
            double log_min = log_x0;
            values[0] = params.x0;
            mins[0] = params.x0;
            for (std::size_t k = 1; k < width; ++k) {
                const double dt = grid[k] - grid[k - 1];
                const double next = log_x + nu * dt + sigma * std::sqrt(dt) * normal(rng);
                const double u = 1.0 - uniform(rng);
                const double step_min = sample_bridge_min(log_x, next, sigma * sigma * dt, u);
                log_min = std::min(log_min, step_min);
                log_x = next;
                values[k] = std::exp(log_x);
                mins[k] = std::min(mins[k - 1], std::exp(log_min));
            }
        }
    });
    return out;
}

MarketState state_at(const PathSet& paths, std::size_t path, double t) {
    if (path >= paths.n_paths()) throw std::invalid_argument("state_at: path index out of range");
    const std::size_t k = paths.index_of(t);
    const double x = paths.value(path, k);
    return MarketState{paths.grid()[k], x, paths.running_min(path, k), brownian_from_value(paths.params(), paths.grid()[k], x)};
}

}  // namespace credinfo
