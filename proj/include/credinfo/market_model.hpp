#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace credinfo {

/// Black-Scholes firm value dX/X = mu dt + sigma dB.
struct GbmParams {
    double x0 = 4.0;
    double mu = 0.05;
    double sigma = 0.2;

    /// Drift of log X: mu - sigma^2 / 2.
    double nu() const { return mu - 0.5 * sigma * sigma; }
    /// Throws std::invalid_argument unless x0 > 0 and sigma > 0.
    void validate() const;

    bool operator==(const GbmParams&) const = default;
};

/// The F_t-measurable data every pricer conditions on: time, firm value,
/// running minimum and the driving Brownian motion.
struct MarketState {
    double t = 0.0;
    double x = 0.0;
    double x_min = 0.0;
    double b = 0.0;

    static MarketState initial(const GbmParams& params);
    /// Builds a state from observed firm values, inverting B_t from X_t.
    static MarketState observed(const GbmParams& params, double t, double x, double x_min);
};

/// B_t = (ln(x / x0) - nu t) / sigma.
double brownian_from_value(const GbmParams& params, double t, double x);

/// Minimum of a Brownian bridge over one step, sampled exactly.
/// `a` and `b` are the endpoint values, `variance` the step variance and `u`
/// a uniform draw in (0, 1].
double sample_bridge_min(double a, double b, double variance, double u);

/// Probability that a Brownian bridge from a to b (both above `level`) with
/// the given variance stays strictly above `level`.
double bridge_survival(double a, double b, double level, double variance);

/// Simulated firm-value paths on a uniform grid.  Immutable once built.
class PathSet {
public:
    PathSet(GbmParams params, std::vector<double> grid, std::size_t n_paths, std::uint64_t seed);

    const GbmParams& params() const { return params_; }
    const std::vector<double>& grid() const { return grid_; }
    std::size_t n_paths() const { return n_paths_; }
    std::size_t n_points() const { return grid_.size(); }
    std::uint64_t seed() const { return seed_; }

    double value(std::size_t path, std::size_t k) const { return values_[path * grid_.size() + k]; }
    double running_min(std::size_t path, std::size_t k) const { return mins_[path * grid_.size() + k]; }

    /// Grid index of `t`; throws std::invalid_argument when t is not a grid point.
    std::size_t index_of(double t) const;

    bool operator==(const PathSet&) const = default;

private:
    friend PathSet simulate_paths(const GbmParams&, double, std::size_t, std::size_t, std::uint64_t, unsigned);

    GbmParams params_;
    std::vector<double> grid_;
    std::size_t n_paths_;
    std::uint64_t seed_;
    std::vector<double> values_;
    std::vector<double> mins_;
};

/// Exact log-normal stepping with bridge-sampled intra-step minima, so that
/// running_min is distributed as the continuous-time running minimum.
/// Output depends on (params, horizon, n_steps, n_paths, seed) only; `workers`
/// (0 = hardware concurrency) affects speed, not values.
PathSet simulate_paths(const GbmParams& params, double horizon, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, unsigned workers = 0);

/// (t, X_t, X_t*, B_t) of one path at a grid time.  No interpolation.
MarketState state_at(const PathSet& paths, std::size_t path, double t);

}  // namespace credinfo
