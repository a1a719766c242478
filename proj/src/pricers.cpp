#include "credinfo/pricers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "credinfo/analytic_kernels.hpp"
#include "credinfo/errors.hpp"
#include "credinfo/parallel.hpp"
#include "credinfo/quadrature.hpp"

namespace credinfo {

namespace {

constexpr double kLegTolerance = 1e-10;
constexpr double kInnerTolerance = 1e-12;
constexpr double kTimeSlack = 1e-12;

}  // namespace

void Market::validate() const {
    firm.validate();
    barrier.validate();
    barrier.law.check_below(firm.x0);
    if (!std::isfinite(discount.r)) throw std::invalid_argument("Discount: r must be finite");
}

void Market::validate_for(const Claim& claim) const {
    validate();
    claim.validate();
    if (!(claim.maturity < barrier.density_horizon()))
        throw std::invalid_argument("BrownianSignal: t0 must exceed the claim maturity");
}

void DelayedInfo::validate() const {
    if (!(delay >= 0.0) || !std::isfinite(delay)) throw std::invalid_argument("DelayedInfo: delay must be >= 0");
    for (std::size_t j = 0; j < observation_dates.size(); ++j) {
        if (!(observation_dates[j] >= 0.0)) throw std::invalid_argument("DelayedInfo: observation dates must be >= 0");
        if (j > 0 && !(observation_dates[j] > observation_dates[j - 1]))
            throw std::invalid_argument("DelayedInfo: observation dates must be strictly increasing");
    }
}

double DelayedInfo::observation_time(double t) const {
    if (observation_dates.empty()) return t - std::min(delay, t);
    double last = 0.0;
    for (double d : observation_dates)
        if (d <= t + kTimeSlack) last = d;
    return std::min(last, t);
}

std::string info_name(const InfoSpec& info) {
    static const char* names[] = {"manager", "progressive", "delayed", "insider"};
    return names[info.index()];
}

namespace {

double log_distance(const MarketState& state, double level) { return std::log(state.x / level); }

// E[p_{t+s}(l, B_{t+s}) 1{no passage over (t, t+s]} | F_t] for s > 0, as a
// Gaussian integral over the standardized Brownian increment w.
double signal_mass(const Market& market, const MarketState& state, std::size_t i, double s) {
    const double nu = market.firm.nu();
    const double sigma = market.firm.sigma;
    const double y = log_distance(state, market.barrier.law.level(i));
    const double root = std::sqrt(s);
    const double w_lo = (-y - nu * s) / (sigma * root);
    const double shift = 2.0 * y / (sigma * root);
    const double k = -2.0 * nu * y / (sigma * sigma);
    const double lo = std::max(w_lo, -kGaussianCutoff);
    const double hi = kGaussianCutoff;
    if (!(lo < hi)) return 0.0;
    auto integrand = [&](double w) {
        // phi(w) - e^k phi(w + shift), written to stay accurate near w_lo
        const double killed = std::max(0.0, -std::expm1(k - shift * w - 0.5 * shift * shift));
        return norm_pdf(w) * killed * density(market.barrier, i, state.t + s, state.b + root * w);
    };
    return integrate(integrand, lo, hi, kInnerTolerance);
}

bool uses_density(const Market& market, bool with_density) { return with_density && !market.barrier.independent(); }

}  // namespace

double level_mass(const Market& market, const MarketState& state, std::size_t level_index, double lead,
                  bool with_density) {
    if (level_index >= market.barrier.law.size()) throw std::invalid_argument("level_mass: level index out of range");
    if (lead < 0.0) throw std::invalid_argument("level_mass: lead must be >= 0");
    const double level = market.barrier.law.level(level_index);
    if (state.x_min <= level) return 0.0;
    if (!uses_density(market, with_density))
        return survival_prob(log_distance(state, level), market.firm.nu(), market.firm.sigma, lead);
    if (lead == 0.0) return density(market.barrier, level_index, state.t, state.b);
    return signal_mass(market, state, level_index, lead);
}

LegValues level_legs(const Market& market, const MarketState& state, std::size_t level_index, double lead,
                     double horizon, const Claim& claim, bool with_density) {
    if (horizon < 0.0) throw std::invalid_argument("level_legs: horizon must be >= 0");
    LegValues legs;
    const double level = market.barrier.law.level(level_index);
    if (state.x_min <= level || claim.is_zero()) return legs;

    const double r = market.discount.r;
    const double end = lead + horizon;
    auto m = [&](double s) { return level_mass(market, state, level_index, s, with_density); };
    const double m_end = m(end);
    legs.terminal = claim.terminal * std::exp(-r * horizon) * m_end;
    if (horizon == 0.0) return legs;

    const bool density_legs = uses_density(market, with_density);
    const bool need_annuity = claim.dividend_rate != 0.0 || (density_legs && claim.recovery != 0.0 && r != 0.0);
    double annuity = 0.0;
    if (need_annuity) annuity = integrate([&](double s) { return std::exp(-r * (s - lead)) * m(s); }, lead, end, kLegTolerance);
    legs.dividend = claim.dividend_rate * annuity;

    if (claim.recovery != 0.0) {
        if (density_legs) {
            // integration by parts of -int e^{-r(s-lead)} dm(s)
            legs.recovery = claim.recovery * (m(lead) - std::exp(-r * horizon) * m_end - r * annuity);
        } else {
            const double y = log_distance(state, level);
            const double nu = market.firm.nu();
            const double sigma = market.firm.sigma;
            auto f = [&](double s) { return s > 0.0 ? std::exp(-r * (s - lead)) * hitting_time_density(y, nu, sigma, s) : 0.0; };
            legs.recovery = claim.recovery * integrate(f, lead, end, kLegTolerance);
        }
    }
    return legs;
}

double azema_S(const BarrierModel& model, const MarketState& state) {
    double s = 0.0;
    for (std::size_t i = 0; i < model.law.size(); ++i)
        if (state.x_min > model.law.level(i)) s += model.law.weight(i) * density(model, i, state.t, state.b);
    return s;
}

double f_M(const BarrierModel& model, double level, const MarketState& state) {
    const std::size_t i = model.law.index_of(level);
    return state.x_min > level ? density(model, i, state.t, state.b) : 0.0;
}

namespace {

double remaining(const Claim& claim, double t) {
    if (t < 0.0) throw std::invalid_argument("pricing time must be >= 0");
    if (t > claim.maturity + kTimeSlack) throw std::invalid_argument("pricing time is after maturity");
    return std::max(0.0, claim.maturity - t);
}

}  // namespace

double vtilde_M(const Market& market, const MarketState& state, double level, const Claim& claim) {
    const std::size_t i = market.barrier.law.index_of(level);
    return level_legs(market, state, i, 0.0, remaining(claim, state.t), claim).total();
}

double price_manager_P(const Market& market, const MarketState& state, double level, const Claim& claim) {
    const std::size_t i = market.barrier.law.index_of(level);
    if (state.x_min <= level) return 0.0;
    return vtilde_M(market, state, level, claim) / density(market.barrier, i, state.t, state.b);
}

double price_manager_Q(const Market& market, const MarketState& state, double level, const Claim& claim) {
    const std::size_t i = market.barrier.law.index_of(level);
    if (state.x_min <= level) return 0.0;
    return level_legs(market, state, i, 0.0, remaining(claim, state.t), claim, false).total();
}

double price_progressive(const Market& market, const MarketState& state, const Claim& claim) {
    const double h = remaining(claim, state.t);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < market.barrier.law.size(); ++i) {
        if (state.x_min <= market.barrier.law.level(i)) continue;
        const double alpha = market.barrier.law.weight(i);
        num += alpha * level_legs(market, state, i, 0.0, h, claim).total();
        den += alpha * level_mass(market, state, i, 0.0);
    }
    return den > 0.0 ? num / den : 0.0;
}

double price_delayed(const Market& market, const MarketState& observed, double t, const Claim& claim,
                     bool default_observed) {
    if (observed.t > t + kTimeSlack) throw std::invalid_argument("price_delayed: observation after pricing time");
    const double h = remaining(claim, t);
    if (default_observed) return 0.0;
    const double lead = std::max(0.0, t - observed.t);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < market.barrier.law.size(); ++i) {
        if (observed.x_min <= market.barrier.law.level(i)) continue;
        const double alpha = market.barrier.law.weight(i);
        num += alpha * level_legs(market, observed, i, lead, h, claim).total();
        den += alpha * level_mass(market, observed, i, lead);
    }
    return den > 0.0 ? num / den : 0.0;
}

double s_insider(const BarrierModel& model, const NoiseModel& noise, const MarketState& state, double noisy_level) {
    const auto w = insider_weights(model, noise, state.t, state.b, noisy_level);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (state.x_min > model.law.level(i)) s += w[i];
    return std::min(1.0, s);
}

double price_insider_P(const Market& market, const NoiseModel& noise, const MarketState& state, double noisy_level,
                       const Claim& claim) {
    const auto w = insider_weights(market.barrier, noise, state.t, state.b, noisy_level);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double level = market.barrier.law.level(i);
        if (state.x_min <= level || w[i] == 0.0) continue;
        num += w[i] * price_manager_P(market, state, level, claim);
        den += w[i];
    }
    return den > 0.0 ? num / den : 0.0;
}

MonteCarloPrice price_insider_Q(const Market& market, const NoiseModel& noise, const MarketState& state,
                                double noisy_level, const Claim& claim, const InsiderQOptions& options) {
    if (options.paths < 1000) throw std::invalid_argument("price_insider_Q: Monte Carlo budget must be >= 1000");
    if (options.steps < 1) throw std::invalid_argument("price_insider_Q: steps must be >= 1");
    const double h = remaining(claim, state.t);
    const BarrierModel& model = market.barrier;
    const std::size_t n = model.law.size();

    // Level weights w_i ~ alpha_i p_t(l_i) q_t(L_t - l_i); the per-level
    // factor applied to F^I(l_i) is w_i / p_t(l_i), normalized by sum_i w_i 1_i.
    const auto w = insider_weights(model, noise, state.t, state.b, noisy_level);
    std::vector<double> coef(n, 0.0);
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (state.x_min > model.law.level(i)) den += w[i];
    if (den == 0.0) return {};
    for (std::size_t i = 0; i < n; ++i)
        if (state.x_min > model.law.level(i)) coef[i] = w[i] / (density(model, i, state.t, state.b) * den);
    if (h == 0.0 || claim.is_zero()) return {price_insider_P(market, noise, state, noisy_level, claim), 0.0};

    const std::size_t steps = options.steps;
    const double dt = h / static_cast<double>(steps);
    const double sigma = market.firm.sigma;
    const double nu = market.firm.nu();
    const double r = market.discount.r;
    const bool signal = !model.independent();
    const GaussHermiteRule gh = gauss_hermite(options.gauss_hermite_order);

    std::vector<double> log_levels(n), log_alpha(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_levels[i] = std::log(model.law.level(i));
        log_alpha[i] = std::log(model.law.weight(i));
    }

    // kappa_s = int rho^I_s(B_s, L_t + y) mu_{t,s}(dy)
    auto kappa = [&](double s, double b, std::vector<double>& base, std::vector<double>& rho) {
        for (std::size_t i = 0; i < n; ++i) {
            base[i] = log_alpha[i] + log_density(model, i, s, b);
            rho[i] = rho_manager(model, i, s, b);
        }
        const double u = noise.variance(s);
        const double spread = std::sqrt(noise.increment_variance(state.t, s));
        double acc = 0.0;
        for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
            const double x = noisy_level + spread * gh.nodes[j];
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x - model.law.level(i);
                rho[n + i] = base[i] - 0.5 * d * d / u;
                top = std::max(top, rho[n + i]);
            }
            double num = 0.0, tot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = std::exp(rho[n + i] - top);
                num += e * rho[i];
                tot += e;
            }
            acc += gh.weights[j] * num / tot;
            if (spread == 0.0) {
                acc = num / tot;
                break;
            }
        }
        return acc;
    };

    const std::size_t n_blocks = (options.paths + kPathsPerBlock - 1) / kPathsPerBlock;
    std::vector<RatioAccumulator> blocks(n_blocks);
    for_each_block(options.paths, options.workers, [&](std::size_t block, std::size_t first, std::size_t last) {
        auto rng = block_engine(options.seed, Stream::InsiderQ, block);
        std::normal_distribution<double> normal;
        std::vector<double> f(n), surv(n), base(n), rho(2 * n);
        RatioAccumulator acc;
        for (std::size_t p = first; p < last; ++p) {
            double b = state.b;
            double log_x = std::log(state.x);
            double log_inv_exp = 0.0;
            double dividend = 0.0, recovery = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                surv[i] = coef[i] > 0.0 ? 1.0 : 0.0;
                f[i] = surv[i] * density(model, i, state.t, b);
            }
            double f_prev = 0.0;
            for (std::size_t i = 0; i < n; ++i) f_prev += coef[i] * f[i];
            for (std::size_t k = 0; k < steps; ++k) {
                const double s = state.t + dt * static_cast<double>(k);
                const double s_next = state.t + dt * static_cast<double>(k + 1);
                const double kap = signal ? kappa(s, b, base, rho) : 0.0;
                const double dw = std::sqrt(dt) * normal(rng);
                log_inv_exp += -kap * dw + 0.5 * kap * kap * dt;
                if (!std::isfinite(log_inv_exp) || log_inv_exp > 700.0)
                    throw NumericalFailure("price_insider_Q: stochastic exponent overflow");
                const double next_log_x = log_x + nu * dt + sigma * dw;
                b += dw;
                const double scale = std::exp(log_inv_exp);
                double f_next = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (coef[i] == 0.0) continue;
                    surv[i] *= bridge_survival(log_x, next_log_x, log_levels[i], sigma * sigma * dt);
                    const double pi = signal ? density(model, i, s_next, b) : 1.0;
                    f_next += coef[i] * scale * pi * surv[i];
                }
                const double d0 = std::exp(-r * (s - state.t));
                const double d1 = std::exp(-r * (s_next - state.t));
                dividend += 0.5 * dt * (d0 * f_prev + d1 * f_next);
                recovery -= std::exp(-r * (0.5 * (s + s_next) - state.t)) * (f_next - f_prev);
                f_prev = f_next;
                log_x = next_log_x;
            }
            const double v = claim.terminal * std::exp(-r * h) * f_prev + claim.dividend_rate * dividend +
                             claim.recovery * recovery;
            acc.add(1.0, v);
        }
        blocks[block] = acc;
    });
    const RatioAccumulator total = reduce_pairwise(blocks);
    return {total.mean(), total.std_error()};
}

namespace {

void require_time(const MarketState& state, double t) {
    if (std::abs(state.t - t) > 1e-9) throw std::invalid_argument("knowledge: state time differs from pricing time");
}

}  // namespace

void check_knowledge(const InfoSpec& info, const Knowledge& knowledge, double t) {
    const bool delayed = std::holds_alternative<DelayedInfo>(info);
    if (knowledge.default_observed && !delayed)
        throw std::invalid_argument("knowledge: default flag applies to delayed information only");
    if (knowledge.barrier && !std::holds_alternative<ManagerInfo>(info))
        throw std::invalid_argument("knowledge: only the manager knows the barrier");
    if (knowledge.noisy_barrier && !std::holds_alternative<InsiderInfo>(info))
        throw std::invalid_argument("knowledge: only the insider observes the noisy barrier");
    if (std::holds_alternative<ManagerInfo>(info) && !knowledge.barrier)
        throw std::invalid_argument("knowledge: manager pricing requires the barrier");
    if (std::holds_alternative<InsiderInfo>(info) && !knowledge.noisy_barrier)
        throw std::invalid_argument("knowledge: insider pricing requires the noisy barrier");
    if (const auto* d = std::get_if<DelayedInfo>(&info)) {
        d->validate();
        if (std::abs(knowledge.state.t - d->observation_time(t)) > 1e-9)
            throw std::invalid_argument("knowledge: delayed state must be taken at the observation time");
    } else {
        require_time(knowledge.state, t);
    }
}

PriceResult price(const InfoSpec& info, const Market& market, const Claim& claim, double t,
                  const Knowledge& knowledge, const InsiderQOptions& mc) {
    market.validate_for(claim);
    check_knowledge(info, knowledge, t);
    if (const auto* m = std::get_if<ManagerInfo>(&info)) {
        const double level = *knowledge.barrier;
        return {m->measure == Measure::P ? price_manager_P(market, knowledge.state, level, claim)
                                         : price_manager_Q(market, knowledge.state, level, claim),
                std::nullopt};
    }
    if (std::holds_alternative<ProgressiveInfo>(info))
        return {price_progressive(market, knowledge.state, claim), std::nullopt};
    if (std::holds_alternative<DelayedInfo>(info))
        return {price_delayed(market, knowledge.state, t, claim, knowledge.default_observed), std::nullopt};
    const auto& ins = std::get<InsiderInfo>(info);
    if (ins.measure == Measure::P)
        return {price_insider_P(market, ins.noise, knowledge.state, *knowledge.noisy_barrier, claim), std::nullopt};
    const auto mcp = price_insider_Q(market, ins.noise, knowledge.state, *knowledge.noisy_barrier, claim, mc);
    return {mcp.value, mcp.std_error};
}

double fair_cds_spread(const Market& market, double maturity, double alpha_rec, double tol) {
    const MarketState start = MarketState::initial(market.firm);
    auto value = [&](double kappa) { return price_progressive(market, start, make_cds(maturity, kappa, alpha_rec)); };
    if (value(0.0) <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (value(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6) throw NumericalFailure("fair_cds_spread: no sign change");
    }
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (value(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace credinfo
