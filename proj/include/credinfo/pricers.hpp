#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "credinfo/information.hpp"
#include "credinfo/instruments.hpp"
#include "credinfo/market_model.hpp"

namespace credinfo {

/// Everything the pricers need besides the claim and the agent's knowledge.
struct Market {
    GbmParams firm;
    BarrierModel barrier{BarrierLaw::binomial(1.0, 3.0, 0.5)};
    Discount discount;

    /// Validates the parts and checks every level lies below x0.
    void validate() const;
    /// Additionally requires the claim to mature before the signal horizon.
    void validate_for(const Claim& claim) const;
};

enum class Measure { P, Q };

struct ManagerInfo {
    Measure measure = Measure::P;
};

struct ProgressiveInfo {};

/// Stale firm data: either a constant delay (delta(t) = min(delta, t)) or
/// discrete observation dates (latest date <= t, time 0 if none).
struct DelayedInfo {
    double delay = 0.0;
    std::vector<double> observation_dates;

    void validate() const;
    /// Time of the latest firm observation available at t.
    double observation_time(double t) const;
};

struct InsiderInfo {
    NoiseModel noise{1.0};
    Measure measure = Measure::P;
};

using InfoSpec = std::variant<ManagerInfo, ProgressiveInfo, DelayedInfo, InsiderInfo>;

/// "manager", "progressive", "delayed" or "insider".
std::string info_name(const InfoSpec& info);

/// What an agent conditions on at pricing time t.
///   manager:     state at t and the barrier L
///   progressive: state at t
///   delayed:     state at the observation time and whether default was seen by t
///   insider:     state at t and the noisy barrier L_t
struct Knowledge {
    MarketState state;
    std::optional<double> barrier;
    std::optional<double> noisy_barrier;
    bool default_observed = false;

    static Knowledge of(const MarketState& state) {
        Knowledge k;
        k.state = state;
        return k;
    }
};

/// Expected discounted legs of one level, seen from the state time.
struct LegValues {
    double terminal = 0.0;
    double dividend = 0.0;
    double recovery = 0.0;

    double total() const { return terminal + dividend + recovery; }
};

/// With m(s) = E[F_{t_s + s}(l) | F_{t_s}] (F = p 1{X* > l}, or the bare
/// indicator when `with_density` is false) and discounting from t_s + lead:
///   terminal = C e^{-r h} m(lead + h)
///   dividend = g int_lead^{lead+h} e^{-r (s - lead)} m(s) ds
///   recovery = -Z int_lead^{lead+h} e^{-r (s - lead)} dm(s)
LegValues level_legs(const Market& market, const MarketState& state, std::size_t level_index, double lead,
                     double horizon, const Claim& claim, bool with_density = true);

/// m(lead) in the notation of level_legs.
double level_mass(const Market& market, const MarketState& state, std::size_t level_index, double lead,
                  bool with_density = true);

/// sum_i alpha_i p_t(l_i) 1{x_min > l_i}.
double azema_S(const BarrierModel& model, const MarketState& state);

/// p_t(l) 1{x_min > l}.
double f_M(const BarrierModel& model, double level, const MarketState& state);

/// Manager value before division by the density, conditional on L = level.
double vtilde_M(const Market& market, const MarketState& state, double level, const Claim& claim);

double price_manager_P(const Market& market, const MarketState& state, double level, const Claim& claim);
/// Under the manager's risk-neutral measure the density factors drop out.
double price_manager_Q(const Market& market, const MarketState& state, double level, const Claim& claim);

double price_progressive(const Market& market, const MarketState& state, const Claim& claim);

/// `observed` is the firm state at the observation time, t the current time.
double price_delayed(const Market& market, const MarketState& observed, double t, const Claim& claim,
                     bool default_observed);

/// Insider survival probability given L_t = noisy_level.
double s_insider(const BarrierModel& model, const NoiseModel& noise, const MarketState& state, double noisy_level);

double price_insider_P(const Market& market, const NoiseModel& noise, const MarketState& state, double noisy_level,
                       const Claim& claim);

struct InsiderQOptions {
    std::size_t paths = 100000;
    std::size_t steps = 512;
    std::size_t gauss_hermite_order = 32;
    std::uint64_t seed = 7;
    unsigned workers = 0;
};

struct MonteCarloPrice {
    double value = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo insider price under the insider's risk-neutral measure.
/// std::invalid_argument when paths < 1000; NumericalFailure on exponent overflow.
MonteCarloPrice price_insider_Q(const Market& market, const NoiseModel& noise, const MarketState& state,
                                double noisy_level, const Claim& claim, const InsiderQOptions& options = {});

struct PriceResult {
    double value = 0.0;
    std::optional<double> std_error;
};

/// std::invalid_argument unless the knowledge holds exactly what `info`
/// conditions on, with the state taken at t (delayed: at the observation time).
void check_knowledge(const InfoSpec& info, const Knowledge& knowledge, double t);

/// Dispatches on the information structure.  std::invalid_argument when the
/// knowledge does not match the info variant.
PriceResult price(const InfoSpec& info, const Market& market, const Claim& claim, double t,
                  const Knowledge& knowledge, const InsiderQOptions& mc = {});

/// Spread kappa with zero progressive CDS value at the initial state.
double fair_cds_spread(const Market& market, double maturity, double alpha_rec, double tol = 1e-12);

}  // namespace credinfo
