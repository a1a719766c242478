#include "credinfo/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "credinfo/analytic_kernels.hpp"
#include "credinfo/errors.hpp"
#include "credinfo/parallel.hpp"

namespace credinfo {

namespace {

double annuity(double r, double x) { return r == 0.0 ? x : -std::expm1(-r * x) / r; }

// log(alpha_i p_s(l_i)) and rho^M_s(l_i) at (s, b); shared by every noisy level.
struct LevelTerms {
    std::vector<double> log_base;
    std::vector<double> rho;

    explicit LevelTerms(std::size_t n) : log_base(n), rho(n) {}

    void update(const BarrierModel& model, double s, double b) {
        for (std::size_t i = 0; i < log_base.size(); ++i) {
            log_base[i] = std::log(model.law.weight(i)) + log_density(model, i, s, b);
            rho[i] = rho_manager(model, i, s, b);
        }
    }

    // rho^I at noisy level x with noise variance u
    double insider_drift(const BarrierModel& model, double u, double x) const {
        double top = -std::numeric_limits<double>::infinity();
        const std::size_t n = log_base.size();
        double lw[8];
        std::vector<double> heap;
        double* w = lw;
        if (n > 8) {
            heap.resize(n);
            w = heap.data();
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x - model.law.level(i);
            w[i] = log_base[i] - 0.5 * d * d / u;
            top = std::max(top, w[i]);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(w[i] - top);
            num += e * rho[i];
            den += e;
        }
        return num / den;
    }
};

std::size_t draw_index(std::span<const double> probs, double u) {
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        c += probs[i];
        if (u < c) return i;
    }
    return probs.size() - 1;
}

}  // namespace

OracleEstimate oracle_price(const InfoSpec& info, const Market& market, const Claim& claim, double t,
                            const Knowledge& knowledge, const OracleOptions& options) {
    market.validate_for(claim);
    check_knowledge(info, knowledge, t);
    if (options.n_paths < 2) throw std::invalid_argument("oracle_price: at least two paths required");
    if (t > claim.maturity + 1e-12) throw std::invalid_argument("oracle_price: pricing time after maturity");

    OracleEstimate out;
    out.n_paths = options.n_paths;
    out.seed = options.seed;
    out.info = info;
    if (knowledge.default_observed) return out;

    const BarrierModel& model = market.barrier;
    const BarrierLaw& law = model.law;
    const std::size_t n = law.size();
    const MarketState& s0 = knowledge.state;
    const bool signal = !model.independent();
    const BrownianSignal sig = signal ? std::get<BrownianSignal>(model.density) : BrownianSignal{};

    const auto* manager = std::get_if<ManagerInfo>(&info);
    const auto* insider = std::get_if<InsiderInfo>(&info);
    const bool delayed = std::holds_alternative<DelayedInfo>(info);
    const bool measure_q = (manager && manager->measure == Measure::Q) || (insider && insider->measure == Measure::Q);
    const bool insider_q = insider && insider->measure == Measure::Q;
    const bool resampled = insider && options.insider == InsiderEstimator::Resampled;
    const std::size_t manager_level = manager ? law.index_of(*knowledge.barrier) : 0;

    const double h = std::max(0.0, claim.maturity - t);
    const double lead = delayed ? std::max(0.0, t - s0.t) : 0.0;
    const bool running_cash = claim.dividend_rate != 0.0 || claim.recovery != 0.0;
    std::size_t steps = 1;
    if (insider_q && signal) steps = options.measure_change_steps;
    else if (running_cash) steps = options.steps;
    if (h == 0.0) steps = 0;
    if (steps == 0 && h > 0.0) throw std::invalid_argument("oracle_price: steps must be >= 1");
    const double dt = steps > 0 ? h / static_cast<double>(steps) : 0.0;

    const double r = market.discount.r;
    const double nu = market.firm.nu();
    const double sigma = market.firm.sigma;
    std::vector<double> log_levels(n);
    for (std::size_t i = 0; i < n; ++i) log_levels[i] = std::log(law.level(i));

    // Insider: L_t known, posterior over levels for the resampled estimator.
    std::vector<double> posterior;
    double u_t = 0.0;
    if (insider) {
        u_t = insider->noise.variance(t);
        posterior = insider_weights(model, insider->noise, t, s0.b, *knowledge.noisy_barrier);
        double alive = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (s0.x_min <= law.level(i)) posterior[i] = 0.0;
            alive += posterior[i];
        }
        if (alive == 0.0) return out;
        for (double& p : posterior) p /= alive;
    }
    std::vector<double> p_t(n, 1.0);
    if (signal)
        for (std::size_t i = 0; i < n; ++i) p_t[i] = density(model, i, t, s0.b);

    const std::size_t n_blocks = (options.n_paths + kPathsPerBlock - 1) / kPathsPerBlock;
    std::vector<RatioAccumulator> blocks(n_blocks);
    for_each_block(options.n_paths, options.workers, [&](std::size_t block, std::size_t first, std::size_t last) {
        auto rng = block_engine(options.seed, Stream::Oracle, block);
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        const boost::math::normal_distribution<double> std_normal;
        std::vector<long> cross(n);
        std::vector<char> dead(n);
        std::vector<double> eps(n), log_y(n);
        LevelTerms terms(n);
        RatioAccumulator acc;
        for (std::size_t p = first; p < last; ++p) {
            std::size_t level = 0;
            bool level_known = false;
            double beta = 0.0;  // B_{t0} when it is fixed in advance
            bool pinned = false;
            if (resampled) {
                level = draw_index(posterior, uniform(rng));
                level_known = true;
                if (signal) {
                    // B_{t0} | B_t, restricted to the side of c that reveals `level`
                    const double sd = std::sqrt(sig.t0 - t);
                    const double dc = (sig.c - s0.b) / sd;
                    const double v = 1.0 - uniform(rng);
                    const double z = level == 0 ? boost::math::quantile(std_normal, v * norm_cdf(dc))
                                                : boost::math::quantile(boost::math::complement(std_normal, v * norm_cdf(-dc)));
                    beta = s0.b + sd * z;
                    pinned = true;
                }
            } else if (!signal) {
                level = draw_index(law.weights(), uniform(rng));
                level_known = true;
            }

            double b = s0.b;
            double log_x = std::log(s0.x);
            double log_min = std::log(s0.x_min);
            if (lead > 0.0) {
                const double next = log_x + nu * lead + sigma * std::sqrt(lead) * normal(rng);
                log_min = std::min(log_min, sample_bridge_min(log_x, next, sigma * sigma * lead, 1.0 - uniform(rng)));
                b += (next - log_x - nu * lead) / sigma;
                log_x = next;
            }
            for (std::size_t i = 0; i < n; ++i) {
                dead[i] = log_min <= log_levels[i];
                cross[i] = -1;
                log_y[i] = 0.0;
                if (insider_q && signal) eps[i] = *knowledge.noisy_barrier - law.level(i);
            }

            for (std::size_t k = 0; k < steps; ++k) {
                const double s = t + dt * static_cast<double>(k);
                double dw;
                if (pinned) {
                    const double rest = sig.t0 - s;
                    dw = (beta - b) * dt / rest + std::sqrt(dt * (rest - dt) / rest) * normal(rng);
                } else {
                    dw = std::sqrt(dt) * normal(rng);
                }
                if (insider_q && signal) {
                    // Y^I_T / Y^I_t along the path for every candidate L, each with
                    // its noise path pinned at eps_t = L_t - L
                    terms.update(model, s, b);
                    const double u_k = insider->noise.variance(s);
                    const double u_next = insider->noise.variance(s + dt);
                    const double z = normal(rng);
                    for (std::size_t i = 0; i < n; ++i) {
                        const double rho = terms.insider_drift(model, u_k, law.level(i) + eps[i]);
                        log_y[i] += -rho * dw + 0.5 * rho * rho * dt;
                        eps[i] = eps[i] * u_next / u_k + std::sqrt(u_next * (u_k - u_next) / u_k) * z;
                    }
                }
                const double next = log_x + nu * dt + sigma * dw;
                const double step_min = sample_bridge_min(log_x, next, sigma * sigma * dt, 1.0 - uniform(rng));
                for (std::size_t i = 0; i < n; ++i)
                    if (!dead[i] && cross[i] < 0 && step_min <= log_levels[i]) cross[i] = static_cast<long>(k);
                log_x = next;
                b += dw;
            }
            if (!level_known) {
                const double b_t0 = b + std::sqrt(sig.t0 - claim.maturity) * normal(rng);
                level = b_t0 <= sig.c ? 0 : 1;
            }

            double payoff = 0.0;
            if (!dead[level]) {
                if (cross[level] >= 0) {
                    const double tau = dt * (static_cast<double>(cross[level]) + 0.5);
                    payoff = claim.dividend_rate * annuity(r, tau) + claim.recovery * std::exp(-r * tau);
                } else {
                    payoff = claim.terminal * std::exp(-r * h) + claim.dividend_rate * annuity(r, h);
                }
            }

            double w = 1.0;
            double v = payoff;
            if (manager) {
                w = level == manager_level ? 1.0 : 0.0;
                if (measure_q && signal && payoff != 0.0) v = payoff * p_t[level] / density(model, level, claim.maturity, b);
            } else if (insider) {
                if (!resampled) {
                    const double d = *knowledge.noisy_barrier - law.level(level);
                    w = dead[level] ? 0.0 : std::exp(-0.5 * d * d / u_t);
                }
                if (insider_q && signal) {
                    if (!std::isfinite(log_y[level]) || log_y[level] > 700.0)
                        throw NumericalFailure("oracle_price: density process overflow");
                    v = payoff * std::exp(log_y[level]);
                }
            } else {
                w = dead[level] ? 0.0 : 1.0;
            }
            acc.add(w, v);
        }
        blocks[block] = acc;
    });
    const RatioAccumulator total = reduce_pairwise(blocks);
    out.mean = total.mean();
    out.std_error = total.std_error();
    return out;
}

bool ValidationReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

ValidationReport validate_report(std::span<const ValidationCase> suite) {
    ValidationReport report;
    for (const auto& c : suite) {
        ValidationRow row;
        row.case_id = c.id;
        row.info = info_name(c.info);
        const PriceResult closed = price(c.info, c.market, c.claim, c.t, c.knowledge, c.insider_q);
        row.closed_form = closed.value;
        row.closed_form_stderr = closed.std_error.value_or(0.0);
        const OracleEstimate est = oracle_price(c.info, c.market, c.claim, c.t, c.knowledge, c.oracle);
        row.oracle_mean = est.mean;
        row.oracle_stderr = est.std_error;
        const double se = std::hypot(row.closed_form_stderr, row.oracle_stderr);
        const double diff = row.closed_form - row.oracle_mean;
        if (se > 0.0) {
            row.z_score = diff / se;
            row.pass = std::abs(row.z_score) <= 3.0;
        } else {
            row.z_score = 0.0;
            row.pass = std::abs(diff) <= 1e-12;
        }
        report.rows.push_back(row);
    }
    return report;
}

std::vector<ValidationCase> default_suite(const Market& market, const Claim& claim, const DelayedInfo& delayed,
                                          const NoiseModel& noise, const SuiteSettings& settings) {
    market.validate_for(claim);
    const BarrierLaw& law = market.barrier.law;
    const GbmParams& firm = market.firm;
    const double low = law.levels().front();
    const double high = law.levels().back();
    const double half = 0.5 * claim.maturity;

    OracleOptions oracle;
    oracle.n_paths = settings.oracle_paths;
    oracle.steps = settings.oracle_steps;
    oracle.seed = settings.oracle_seed;
    oracle.measure_change_steps = settings.insider_q.steps;
    oracle.workers = settings.workers;
    InsiderQOptions iq = settings.insider_q;
    iq.workers = settings.workers;

    std::vector<ValidationCase> suite;
    std::uint64_t k = 0;
    auto add = [&](std::string id, InfoSpec info, const Claim& c, double t, Knowledge kn) {
        ValidationCase vc{std::move(id), std::move(info), market, c, t, kn, oracle, iq};
        vc.oracle.seed = settings.oracle_seed + 1000 * (++k);
        suite.push_back(std::move(vc));
    };
    auto with_barrier = [](MarketState s, double l) {
        Knowledge kn = Knowledge::of(s);
        kn.barrier = l;
        return kn;
    };
    auto with_noisy = [](MarketState s, double lt) {
        Knowledge kn = Knowledge::of(s);
        kn.noisy_barrier = lt;
        return kn;
    };

    const MarketState start = MarketState::initial(firm);
    // a surviving state above every level and, with several levels, one between them
    const MarketState above =
        MarketState::observed(firm, half, high + 0.6 * (firm.x0 - high), high + 0.3 * (firm.x0 - high));
    const Claim cds = make_cds(claim.maturity, 0.01, 0.4);
    const double noisy = high + 0.25 * std::sqrt(noise.variance(0.0));

    add("manager_P_low_t0", ManagerInfo{Measure::P}, claim, 0.0, with_barrier(start, low));
    add("manager_P_high_t0", ManagerInfo{Measure::P}, claim, 0.0, with_barrier(start, high));
    add("manager_Q_high_t0", ManagerInfo{Measure::Q}, claim, 0.0, with_barrier(start, high));
    add("progressive_t0", ProgressiveInfo{}, claim, 0.0, Knowledge::of(start));
    add("progressive_half", ProgressiveInfo{}, claim, half, Knowledge::of(above));
    if (law.size() > 1) {
        const MarketState between =
            MarketState::observed(firm, half, low + 0.25 * (high - low), low + 0.1 * (high - low));
        add("progressive_half_between", ProgressiveInfo{}, claim, half, Knowledge::of(between));
    }
    {
        const double t_obs = delayed.observation_time(half);
        const MarketState obs = MarketState::observed(firm, t_obs, above.x, above.x_min);
        add("delayed_half", delayed, claim, half, Knowledge::of(obs));
    }
    add("insider_P_t0", InsiderInfo{noise, Measure::P}, claim, 0.0, with_noisy(start, noisy));
    add("insider_P_half", InsiderInfo{noise, Measure::P}, claim, half, with_noisy(above, noisy));
    add("manager_P_cds_t0", ManagerInfo{Measure::P}, cds, 0.0, with_barrier(start, low));
    add("progressive_cds_t0", ProgressiveInfo{}, cds, 0.0, Knowledge::of(start));
    add("insider_Q_t0", InsiderInfo{noise, Measure::Q}, claim, 0.0, with_noisy(start, noisy));
    suite.back().oracle.n_paths = std::max<std::size_t>(settings.insider_q.paths, 1000);
    return suite;
}

void write_report_csv(const ValidationReport& report, std::ostream& out) {
    out << "case_id,info,closed_form,oracle_mean,oracle_stderr,z_score,pass\n";
    out << std::setprecision(12);
    for (const auto& r : report.rows)
        out << r.case_id << ',' << r.info << ',' << r.closed_form << ',' << r.oracle_mean << ',' << r.oracle_stderr
            << ',' << r.z_score << ',' << (r.pass ? "true" : "false") << '\n';
}

}  // namespace credinfo
