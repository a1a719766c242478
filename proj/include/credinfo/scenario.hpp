#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "credinfo/pricers.hpp"

namespace credinfo {

/// One simulated firm path priced along a uniform grid by every agent.
struct ScenarioSpec {
    Market market;
    Claim claim;
    DelayedInfo delayed;
    NoiseModel noise{1.0};
    double barrier = 1.0;  // realized L
    double horizon = 1.0;  // <= claim maturity
    std::size_t steps = 500;
    std::uint64_t seed = 2024;
};

/// Prices are 0 at and after the default time.
struct PriceSeries {
    std::vector<double> times;
    std::vector<double> firm_value;
    std::vector<double> running_min;
    std::vector<char> defaulted;
    std::vector<double> manager;
    std::vector<double> progressive;
    std::vector<double> delayed;
    std::vector<double> insider;
    std::vector<double> noisy_barrier;
    std::optional<double> default_time;
    double barrier = 0.0;
};

/// Deterministic per (spec, seed).  The delayed agent sees the firm at the
/// latest grid time not after its observation time.
PriceSeries run_scenario(const ScenarioSpec& spec);

/// Header t,firm_value,running_min,default,V_manager,V_progressive,V_delayed,V_insider.
void write_scenario_csv(const PriceSeries& series, std::ostream& out);
/// Same columns, whitespace separated, '#' header, for gnuplot.
void write_scenario_dat(const PriceSeries& series, std::ostream& out);

}  // namespace credinfo
