#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "credinfo/mc_oracle.hpp"
#include "support.hpp"

using namespace credinfo;

namespace {

const GbmParams kFirm{4.0, 0.05, 0.2};
const Claim kZcb = make_zcb(1.0, 1.0);
const Claim kZcbRec = make_zcb(1.0, 0.4);

Market independent_market(BarrierLaw law = BarrierLaw::binomial(1.0, 3.0, 0.5)) {
    return {kFirm, {std::move(law)}, {0.02}};
}

Market signal_market() {
    const BrownianSignal s{2.0, 0.0};
    return {kFirm, {signal_law(1.0, 3.0, s), s}, {0.02}};
}

Knowledge with_barrier(const MarketState& s, double l) {
    Knowledge k = Knowledge::of(s);
    k.barrier = l;
    return k;
}

Knowledge with_noisy(const MarketState& s, double lt) {
    Knowledge k = Knowledge::of(s);
    k.noisy_barrier = lt;
    return k;
}

OracleOptions options(std::size_t n, std::uint64_t seed, std::size_t steps = 100) {
    OracleOptions o;
    o.n_paths = n;
    o.seed = seed;
    o.steps = steps;
    o.measure_change_steps = 64;
    return o;
}

}  // namespace

TEST_CASE("constant barrier: every information structure reproduces the single price") {
    const Market m = independent_market(BarrierLaw::constant(3.0));
    const MarketState s0 = MarketState::initial(m.firm);
    const double v = price_manager_P(m, s0, 3.0, kZcb);
    const NoiseModel noise(1.0);
    const std::vector<std::pair<InfoSpec, Knowledge>> cases{
        {ManagerInfo{Measure::P}, with_barrier(s0, 3.0)}, {ManagerInfo{Measure::Q}, with_barrier(s0, 3.0)},
        {ProgressiveInfo{}, Knowledge::of(s0)},           {DelayedInfo{0.1, {}}, Knowledge::of(s0)},
        {InsiderInfo{noise, Measure::P}, with_noisy(s0, 3.4)}, {InsiderInfo{noise, Measure::Q}, with_noisy(s0, 3.4)},
    };
    std::uint64_t seed = 100;
    for (const auto& [info, k] : cases) {
        const auto est = oracle_price(info, m, kZcb, 0.0, k, options(200000, ++seed));
        INFO(info_name(info) << " " << est.mean << " +- " << est.std_error << " vs " << v);
        CHECK(ref::within(est.mean, v, est.std_error));
        CHECK(est.n_paths == 200000);
        CHECK(est.seed == seed);
    }
}

TEST_CASE("progressive oracle at a million paths") {
    const Market m = independent_market();
    const MarketState s0 = MarketState::initial(m.firm);
    const auto est = oracle_price(ProgressiveInfo{}, m, kZcb, 0.0, Knowledge::of(s0), options(1000000, 21));
    CHECK(ref::within(est.mean, price_progressive(m, s0, kZcb), est.std_error));
    CHECK(est.std_error > 0.0);
}

TEST_CASE("zero claim has zero mean and zero error") {
    const Market m = independent_market();
    const Claim zero{1.0, 0.0, 0.0, 0.0};
    const auto est = oracle_price(ProgressiveInfo{}, m, zero, 0.0, Knowledge::of(MarketState::initial(m.firm)),
                                  options(5000, 3));
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("standard error scales as one over root n") {
    const Market m = independent_market();
    const Knowledge k = Knowledge::of(MarketState::initial(m.firm));
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const auto small = oracle_price(ProgressiveInfo{}, m, kZcb, 0.0, k, options(50000, seed));
        const auto large = oracle_price(ProgressiveInfo{}, m, kZcb, 0.0, k, options(200000, seed + 10));
        CHECK(large.std_error / small.std_error == doctest::Approx(0.5).epsilon(0.2));
    }
}

TEST_CASE("estimates do not depend on the worker count") {
    const Market m = signal_market();
    const MarketState s{0.5, 4.3, 3.6, 0.4};
    for (const auto& [info, k] : std::vector<std::pair<InfoSpec, Knowledge>>{
             {ProgressiveInfo{}, Knowledge::of(s)},
             {ManagerInfo{Measure::Q}, with_barrier(s, 3.0)},
             {InsiderInfo{NoiseModel(1.0), Measure::P}, with_noisy(s, 3.1)}}) {
        auto one = options(5000, 9, 20);
        one.workers = 1;
        auto many = one;
        many.workers = 3;
        const auto a = oracle_price(info, m, kZcbRec, 0.5, k, one);
        const auto b = oracle_price(info, m, kZcbRec, 0.5, k, many);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == b.std_error);
        const auto c = oracle_price(info, m, kZcbRec, 0.5, k, options(5000, 10, 20));
        CHECK(a.mean != c.mean);
    }
}

TEST_CASE("weighted and resampled insider estimators agree") {
    const NoiseModel noise(1.0);
    for (const Market& m : {independent_market(), signal_market()}) {
        for (double t : {0.0, 0.5}) {
            const MarketState s = t == 0.0 ? MarketState::initial(m.firm) : MarketState{0.5, 4.3, 3.6, 0.4};
            const Knowledge k = with_noisy(s, 3.2);
            auto w = options(200000, 31, 50);
            auto r = options(200000, 32, 50);
            r.insider = InsiderEstimator::Resampled;
            const auto a = oracle_price(InsiderInfo{noise, Measure::P}, m, kZcbRec, t, k, w);
            const auto b = oracle_price(InsiderInfo{noise, Measure::P}, m, kZcbRec, t, k, r);
            INFO("signal " << !m.barrier.independent() << " t " << t << ": " << a.mean << " vs " << b.mean);
            CHECK(ref::within(a.mean, b.mean, std::hypot(a.std_error, b.std_error)));
            CHECK(ref::within(b.mean, price_insider_P(m, noise, s, 3.2, kZcbRec), b.std_error));
        }
    }
}

TEST_CASE("oracle rejects knowledge that does not match the information structure") {
    const Market m = independent_market();
    const MarketState s0 = MarketState::initial(m.firm);
    CHECK_THROWS_AS(oracle_price(ManagerInfo{}, m, kZcb, 0.0, Knowledge::of(s0), options(1000, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle_price(ProgressiveInfo{}, m, kZcb, 0.0, with_barrier(s0, 1.0), options(1000, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle_price(InsiderInfo{}, m, kZcb, 0.0, Knowledge::of(s0), options(1000, 1)),
                    std::invalid_argument);
}

TEST_CASE("validation report") {
    CHECK(validate_report({}).pass());
    CHECK(validate_report({}).rows.empty());

    SuiteSettings settings;
    settings.oracle_paths = 200000;
    settings.oracle_steps = 100;
    settings.insider_q.paths = 20000;
    settings.insider_q.steps = 64;
    const auto suite = default_suite(independent_market(), kZcb, DelayedInfo{0.01, {}}, NoiseModel(1.0), settings);
    CHECK(suite.size() == 12);
    const auto report = validate_report(suite);
    for (const auto& row : report.rows) {
        INFO(row.case_id << " z=" << row.z_score);
        CHECK(row.pass);
        CHECK(std::abs(row.z_score) <= 3.0);
    }
    CHECK(report.pass());

    std::ostringstream csv;
    write_report_csv(report, csv);
    const std::string text = csv.str();
    CHECK(text.substr(0, text.find('\n')) == "case_id,info,closed_form,oracle_mean,oracle_stderr,z_score,pass");
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
}
