#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "credinfo/pricers.hpp"

namespace credinfo {

enum class InsiderEstimator {
    /// Sample L with the path and weight by 1{X_t* > L} q_t(L_t - L).
    Weighted,
    /// Draw L from its posterior given (F_t, L_t) and continue the path
    /// conditionally on it; every path has unit weight.
    Resampled,
};

struct OracleOptions {
    std::size_t n_paths = 1000000;
    std::uint64_t seed = 11;
    /// Steps over (t, T] for claims paying before maturity; claims paying only
    /// at T use a single exact step.
    std::size_t steps = 200;
    /// Steps for the insider risk-neutral estimator, which needs the density
    /// process along the path.
    std::size_t measure_change_steps = 512;
    unsigned workers = 0;
    InsiderEstimator insider = InsiderEstimator::Weighted;
};

struct OracleEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    InfoSpec info;
};

/// Brute-force price by simulating continuations of the conditioning state
/// together with L (and the noise for the insider), averaging the discounted
/// cash flows over the paths consistent with the agent's knowledge.
/// Measure Q variants reweight by the density of the agent's risk-neutral
/// measure.  std::invalid_argument when the knowledge does not match `info`.
OracleEstimate oracle_price(const InfoSpec& info, const Market& market, const Claim& claim, double t,
                            const Knowledge& knowledge, const OracleOptions& options = {});

struct ValidationCase {
    std::string id;
    InfoSpec info;
    Market market;
    Claim claim;
    double t = 0.0;
    Knowledge knowledge;
    OracleOptions oracle;
    InsiderQOptions insider_q;
};

struct ValidationRow {
    std::string case_id;
    std::string info;
    double closed_form = 0.0;
    double closed_form_stderr = 0.0;
    double oracle_mean = 0.0;
    double oracle_stderr = 0.0;
    double z_score = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool pass() const;
};

/// |z| <= 3 with z = (price - oracle) / combined standard error.
ValidationReport validate_report(std::span<const ValidationCase> suite);

struct SuiteSettings {
    std::size_t oracle_paths = 1000000;
    std::size_t oracle_steps = 200;
    std::uint64_t oracle_seed = 11;
    InsiderQOptions insider_q;
    unsigned workers = 0;
};

/// Closed forms against the oracle for every information structure, at the
/// initial state and at fixed states at half maturity.
std::vector<ValidationCase> default_suite(const Market& market, const Claim& claim, const DelayedInfo& delayed,
                                          const NoiseModel& noise, const SuiteSettings& settings = {});

/// Columns: case_id,info,closed_form,oracle_mean,oracle_stderr,z_score,pass.
void write_report_csv(const ValidationReport& report, std::ostream& out);

}  // namespace credinfo
