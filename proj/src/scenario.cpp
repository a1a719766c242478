#include "credinfo/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace credinfo {

PriceSeries run_scenario(const ScenarioSpec& spec) {
    spec.market.validate_for(spec.claim);
    spec.delayed.validate();
    spec.market.barrier.law.index_of(spec.barrier);
    if (!(spec.horizon > 0.0) || spec.horizon > spec.claim.maturity + 1e-12)
        throw std::invalid_argument("scenario: horizon must lie in (0, maturity]");

    const PathSet paths = simulate_paths(spec.market.firm, spec.horizon, spec.steps, 1, spec.seed, 1);
    const auto& grid = paths.grid();
    const auto eps = sample_noise_path(spec.noise, grid, spec.seed);
    const double dt = spec.horizon / static_cast<double>(spec.steps);

    PriceSeries out;
    out.barrier = spec.barrier;
    const std::size_t m = grid.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double t = grid[k];
        const MarketState state = state_at(paths, 0, t);
        const bool dead = state.x_min <= spec.barrier;
        if (dead && !out.default_time) out.default_time = t;
        const double noisy = spec.barrier + eps[k];

        out.times.push_back(t);
        out.firm_value.push_back(state.x);
        out.running_min.push_back(state.x_min);
        out.defaulted.push_back(dead ? 1 : 0);
        out.noisy_barrier.push_back(noisy);
        if (dead) {
            out.manager.push_back(0.0);
            out.progressive.push_back(0.0);
            out.delayed.push_back(0.0);
            out.insider.push_back(0.0);
            continue;
        }
        out.manager.push_back(price_manager_P(spec.market, state, spec.barrier, spec.claim));
        out.progressive.push_back(price_progressive(spec.market, state, spec.claim));
        const double t_obs = spec.delayed.observation_time(t);
        const auto k_obs = std::min(k, static_cast<std::size_t>(std::floor(t_obs / dt + 1e-9)));
        const MarketState observed = state_at(paths, 0, grid[k_obs]);
        out.delayed.push_back(price_delayed(spec.market, observed, t, spec.claim, false));
        out.insider.push_back(price_insider_P(spec.market, spec.noise, state, noisy, spec.claim));
    }
    return out;
}

namespace {

void write_rows(const PriceSeries& s, std::ostream& out, char sep) {
    out << std::setprecision(12);
    for (std::size_t k = 0; k < s.times.size(); ++k)
        out << s.times[k] << sep << s.firm_value[k] << sep << s.running_min[k] << sep << int(s.defaulted[k]) << sep
            << s.manager[k] << sep << s.progressive[k] << sep << s.delayed[k] << sep << s.insider[k] << '\n';
}

}  // namespace

void write_scenario_csv(const PriceSeries& series, std::ostream& out) {
    out << "t,firm_value,running_min,default,V_manager,V_progressive,V_delayed,V_insider\n";
    write_rows(series, out, ',');
}

void write_scenario_dat(const PriceSeries& series, std::ostream& out) {
    out << "# t firm_value running_min default V_manager V_progressive V_delayed V_insider\n";
    out << "# barrier " << std::setprecision(12) << series.barrier << '\n';
    write_rows(series, out, ' ');
}

}  // namespace credinfo
