#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "credinfo/mc_oracle.hpp"
#include "credinfo/scenario.hpp"

namespace credinfo {

/// Fully validated engine configuration.  Every field has a default; see the
/// README for the JSON schema.
struct Config {
    Market market;
    Claim claim = make_zcb(1.0, 1.0);
    DelayedInfo delayed{0.01, {}};
    NoiseModel noise{1.0};
    /// "low", "high", "sample" or a level value.
    std::string realized = "low";
    double horizon = 1.0;
    std::size_t steps = 500;
    std::uint64_t scenario_seed = 2024;
    std::uint64_t oracle_seed = 11;
    std::size_t oracle_paths = 1000000;
    std::size_t oracle_steps = 200;
    InsiderQOptions insider_q;
    unsigned workers = 0;
    std::string suite = "default";
};

/// Parses and validates a JSON document.  Unknown keys, wrong types and
/// out-of-range values throw std::invalid_argument.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

/// Realized barrier for a choice of "low", "high", "sample" or a level value.
double realized_barrier(const Config& config, const std::string& choice, std::uint64_t seed);

/// Writes scenario.csv and scenario.dat into `out_dir`.
PriceSeries cmd_scenario(const Config& config, const std::optional<std::string>& barrier,
                         std::optional<std::uint64_t> seed, const std::string& out_dir);

/// Price at grid time t on the configured scenario path, formatted as
/// "price" or "price,stderr" for Monte Carlo prices.
std::string cmd_price(const Config& config, const std::string& info, const std::string& measure, double t);

/// Runs the configured validation suite, writes the CSV report and returns it.
ValidationReport cmd_validate(const Config& config, const std::string& out_file);

/// Full command line: exit 0 ok, 1 validation failure, 2 bad input, 3 numerical failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace credinfo
