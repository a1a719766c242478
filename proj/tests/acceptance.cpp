// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-fail LIST]
//
// LIST is a comma-separated set of criterion numbers known to fail.  The exit
// status is 0 exactly when the failing set equals LIST.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "credinfo/analytic_kernels.hpp"
#include "credinfo/mc_oracle.hpp"
#include "credinfo/quadrature.hpp"
#include "credinfo/scenario.hpp"
#include "support.hpp"

using namespace credinfo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

const GbmParams kFirm{4.0, 0.05, 0.2};
const Claim kZcb = make_zcb(1.0, 1.0);
const Claim kZcbRec = make_zcb(1.0, 0.4);

Market default_market() { return {kFirm, {BarrierLaw::binomial(1.0, 3.0, 0.5)}, {0.02}}; }

Market signal_market() {
    const BrownianSignal s{2.0, 0.0};
    return {kFirm, {signal_law(1.0, 3.0, s), s}, {0.02}};
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. Kernels against bridge-corrected simulation on ten-step paths: survival,
// ten hitting-time bins and ten terminal-value bins among survivors.
Outcome kernels_vs_simulation() {
    Outcome o;
    const std::size_t n = 1000000;
    const int steps = 10;
    const double h = 1.0, dt = h / steps;
    int checks = 0, failures = 0;
    double worst = 0.0;
    std::uint64_t seed = 1;
    for (double nu : {-0.05, 0.0, 0.03})
        for (double sigma : {0.1, 0.2}) {
            const double y = 1.5 * sigma;  // a passage probability well inside (0, 1)
            std::mt19937_64 rng(++seed);
            std::normal_distribution<double> normal;
            std::uniform_real_distribution<double> uni;
            std::uint64_t alive = 0;
            std::vector<std::uint64_t> hit(steps, 0), terminal(steps, 0);
            const double z_lo = -y, z_width = (nu * h + 3.0 * sigma + y) / steps;
            for (std::size_t i = 0; i < n; ++i) {
                double x = 0.0;
                int k = 0;
                for (; k < steps; ++k) {
                    const double next = x + nu * dt + sigma * std::sqrt(dt) * normal(rng);
                    if (ref::bridge_min(x, next, sigma * sigma * dt, 1.0 - uni(rng)) <= -y) break;
                    x = next;
                }
                if (k < steps) {
                    ++hit[k];
                } else {
                    ++alive;
                    const auto bin = static_cast<long>(std::floor((x - z_lo) / z_width));
                    if (bin >= 0 && bin < steps) ++terminal[bin];
                }
            }
            auto check = [&](std::uint64_t count, double p) {
                const double se = std::sqrt(p * (1.0 - p) / n);  // binomial error under the closed form
                const double z = (static_cast<double>(count) / n - p) / se;
                worst = std::max(worst, std::abs(z));
                ++checks;
                failures += std::abs(z) > 3.0;
            };
            check(alive, survival_prob(y, nu, sigma, h));
            for (int k = 0; k < steps; ++k) {
                check(hit[k], integrate([&](double s) { return s > 0 ? hitting_time_density(y, nu, sigma, s) : 0.0; },
                                        k * dt, (k + 1) * dt, 1e-14));
                const double a = z_lo + k * z_width;
                check(terminal[k], integrate([&](double z) { return joint_density_terminal_min(z, y, nu, sigma, h); },
                                             a, a + z_width, 1e-14));
            }
        }
    o.pass = failures == 0;
    o.detail = std::to_string(checks) + " checks on 6 (nu, sigma) pairs, max |z| " + num(worst) + ", " +
               std::to_string(failures) + " beyond 3";
    return o;
}

// 2. Mass identities on a 100-point grid.
Outcome mass_identities() {
    Outcome o;
    int points = 0;
    double worst = 0.0;
    for (double y : {0.05, 0.3, 0.7, 1.5, 3.0})
        for (double nu : {-0.1, -0.05, 0.0, 0.03, 0.1})
            for (double sigma : {0.1, 0.2, 0.4, 0.8}) {
                const double h = 0.25 + 0.25 * (points % 4);
                const double s = survival_prob(y, nu, sigma, h);
                const double hit = integrate([&](double u) { return hitting_time_density(y, nu, sigma, u); }, 0.0, h, 1e-13);
                const double top = nu * h + 10.0 * sigma * std::sqrt(h);
                const double joint = integrate([&](double z) { return joint_density_terminal_min(z, y, nu, sigma, h); }, -y,
                                               std::max(top, -y + 1e-3), 1e-13);
                worst = std::max({worst, std::abs(hit - (1.0 - s)), std::abs(joint - s)});
                ++points;
            }
    o.pass = points >= 100 && worst <= 1e-8;
    o.detail = std::to_string(points) + " points, max error " + num(worst);
    return o;
}

// 3. One barrier level: six pricers at twenty (t, state) points.  States sit
// 0.75 and 1.5 standard deviations of the remaining log-move above the level,
// so that default is not a rare event for the Monte Carlo pricer.
Outcome constant_barrier() {
    Outcome o;
    const double level = 3.0;
    const Market m{kFirm, {BarrierLaw::constant(level)}, {0.02}};
    const NoiseModel noise(1.0);
    double worst_cf = 0.0, worst_z = 0.0;
    int points = 0;
    for (int i = 0; i < 10; ++i)
        for (double k : {0.75, 1.5}) {
            const double t = 0.1 * i;
            const double x = i == 0 ? kFirm.x0 : level * std::exp(k * kFirm.sigma * std::sqrt(1.0 - t));
            const double x_min = i == 0 ? kFirm.x0 : level + 0.5 * (std::min(x, kFirm.x0) - level);
            const MarketState s = MarketState::observed(kFirm, t, x, x_min);
            const double noisy = level + 0.3 * k;
            const double v = price_manager_P(m, s, level, kZcbRec);
            worst_cf = std::max({worst_cf, std::abs(price_manager_Q(m, s, level, kZcbRec) - v),
                                 std::abs(price_progressive(m, s, kZcbRec) - v),
                                 std::abs(price_delayed(m, s, t, kZcbRec, false) - v),
                                 std::abs(price_insider_P(m, noise, s, noisy, kZcbRec) - v)});
            InsiderQOptions q;
            q.paths = 20000;
            q.steps = 64;
            q.seed = 500 + points;
            const auto mc = price_insider_Q(m, noise, s, noisy, kZcbRec, q);
            worst_z = std::max(worst_z, std::abs(mc.value - v) / mc.std_error);
            ++points;
        }
    o.pass = worst_cf <= 1e-9 && worst_z <= 3.0;
    o.detail = std::to_string(points) + " points, closed forms within " + num(worst_cf) + ", insider Q max |z| " +
               num(worst_z) + " (delayed at zero delay)";
    return o;
}

// 4. Orderings and collapse on 100 simulated paths.
Outcome pathwise_ordering() {
    Outcome o;
    const Market m = default_market();
    const PathSet paths = simulate_paths(m.firm, 1.0, 500, 100, 4242, 1);
    std::size_t above = 0, between = 0, violations = 0;
    double worst_gap = 0.0;
    for (std::size_t p = 0; p < paths.n_paths(); ++p)
        for (double t : paths.grid()) {
            const MarketState s = state_at(paths, p, t);
            if (s.x_min > 3.0) {
                const double lo = price_manager_P(m, s, 1.0, kZcb), hi = price_manager_P(m, s, 3.0, kZcb);
                const double prog = price_progressive(m, s, kZcb);
                violations += !(lo >= prog && prog >= hi);
                ++above;
            } else if (s.x_min > 1.0) {
                worst_gap = std::max(worst_gap, std::abs(price_manager_P(m, s, 1.0, kZcb) - price_progressive(m, s, kZcb)));
                ++between;
            }
        }
    o.pass = violations == 0 && worst_gap <= 1e-12 && between > 0;
    o.detail = std::to_string(above) + " states above both levels, " + std::to_string(violations) + " violations; " +
               std::to_string(between) + " states between, max gap " + num(worst_gap);
    return o;
}

// 5. Insider limits at t = 0.5 on a fixed scenario.
Outcome insider_limits() {
    Outcome o;
    const Market m = default_market();
    const PathSet paths = simulate_paths(m.firm, 1.0, 500, 1, 2024, 1);
    const MarketState s = state_at(paths, 0, 0.5);
    if (!(s.x_min > 3.0)) return {false, "scenario defaulted before t = 0.5"};
    double worst_manager = 0.0, worst_prog = 0.0;
    for (const Claim& c : {kZcb, kZcbRec}) {
        for (double l : {1.0, 3.0})
            worst_manager = std::max(worst_manager, rel(price_insider_P(m, NoiseModel::with_variance_at(0.5, 1e-8), s, l, c),
                                                        price_manager_P(m, s, l, c)));
        worst_prog = std::max(worst_prog, rel(price_insider_P(m, NoiseModel::with_variance_at(0.5, 1e6), s, 2.3, c),
                                              price_progressive(m, s, c)));
    }
    o.pass = worst_manager <= 1e-6 && worst_prog <= 1e-4;
    o.detail = "variance 1e-8 vs manager " + num(worst_manager) + ", variance 1e6 vs progressive " + num(worst_prog);
    return o;
}

// 6. Measure changes.
Outcome measure_collapse() {
    Outcome o;
    const Market ind = default_market();
    double worst_q = 0.0;
    for (double t : {0.0, 0.25, 0.5, 0.75})
        for (double x : {3.3, 4.0, 5.5}) {
            const MarketState s = t == 0.0 ? MarketState::initial(kFirm) : MarketState::observed(kFirm, t, x, std::min(x, 3.2));
            for (double l : {1.0, 3.0})
                for (const Claim& c : {kZcb, kZcbRec})
                    worst_q = std::max(worst_q, std::abs(price_manager_Q(ind, s, l, c) - price_manager_P(ind, s, l, c)));
        }
    const NoiseModel noise(1.0);
    InsiderQOptions q;
    q.paths = 100000;
    double worst_insider = 0.0;
    for (const MarketState& s : {MarketState::initial(kFirm), MarketState::observed(kFirm, 0.5, 3.8, 3.3)}) {
        const auto mc = price_insider_Q(ind, noise, s, 3.25, kZcbRec, q);
        worst_insider = std::max(worst_insider, std::abs(mc.value - price_insider_P(ind, noise, s, 3.25, kZcbRec)) / mc.std_error);
    }
    const Market sig = signal_market();
    double worst_signal = 0.0;
    std::uint64_t seed = 60;
    for (const MarketState& s : {MarketState::initial(kFirm), MarketState{0.5, 4.3, 3.6, 0.4}})
        for (double l : {1.0, 3.0}) {
            Knowledge k = Knowledge::of(s);
            k.barrier = l;
            OracleOptions opt;
            opt.seed = ++seed;
            const auto est = oracle_price(ManagerInfo{Measure::Q}, sig, kZcb, s.t, k, opt);
            const double cf = price_manager_Q(sig, s, l, kZcb);
            const double se = est.std_error;
            worst_signal = std::max(worst_signal, se > 0 ? std::abs(est.mean - cf) / se : (std::abs(est.mean - cf) > 1e-12) * 1e9);
        }
    o.pass = worst_q <= 1e-9 && worst_insider <= 3.0 && worst_signal <= 3.0;
    o.detail = "independent manager Q-P " + num(worst_q) + ", insider Q vs P max |z| " + num(worst_insider) +
               ", signal manager Q vs reweighted oracle max |z| " + num(worst_signal);
    return o;
}

// 7. Density process.
Outcome density_process() {
    Outcome o;
    double worst = 0.0;
    for (double c : {-0.5, 0.0, 0.8}) {
        const BrownianSignal s{2.0, c};
        const BarrierModel m{signal_law(1.0, 3.0, s), s};
        for (double t = 0.0; t < 2.0; t += 0.1)
            for (double b = -3.0; b <= 3.0; b += 0.25)
                worst = std::max(worst, std::abs(m.law.weight(0) * density(m, 0, t, b) + m.law.weight(1) * density(m, 1, t, b) - 1.0));
    }
    const BarrierModel m = signal_market().barrier;
    std::mt19937_64 rng(77);
    std::normal_distribution<double> normal;
    const std::size_t n = 100000;
    double worst_z = 0.0;
    for (double T : {0.5, 1.0, 1.9})
        for (std::size_t i : {0u, 1u}) {
            double s = 0, s2 = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double p = density(m, i, T, std::sqrt(T) * normal(rng));
                s += p;
                s2 += p * p;
            }
            const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
            worst_z = std::max(worst_z, std::abs(mean - 1.0) / se);
        }
    o.pass = worst <= 1e-12 && worst_z <= 3.0;
    o.detail = "weighted sum within " + num(worst) + ", martingale max |z| " + num(worst_z);
    return o;
}

// 8. Delayed information: zero delay is the progressive price; a small delay
// should stay within 1% of it along scenario paths.
Outcome delayed_consistency() {
    Outcome o;
    const Market m = default_market();
    const PathSet paths = simulate_paths(m.firm, 1.0, 500, 100, 4343, 1);
    double worst_zero = 0.0;
    for (std::size_t p = 0; p < paths.n_paths(); ++p)
        for (double t : paths.grid()) {
            const MarketState s = state_at(paths, p, t);
            if (s.x_min <= 1.0) continue;
            worst_zero = std::max(worst_zero, std::abs(price_delayed(m, s, t, kZcb, false) - price_progressive(m, s, kZcb)));
        }
    double worst_small = 0.0;
    int over = 0, runs = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        for (double level : {1.0, 3.0}) {
            ScenarioSpec spec;
            spec.market = m;
            spec.claim = kZcb;
            spec.delayed = DelayedInfo{0.01, {}};
            spec.barrier = level;
            spec.seed = seed;
            const PriceSeries series = run_scenario(spec);
            double run_worst = 0.0;
            for (std::size_t k = 0; k < series.times.size(); ++k)
                if (!series.defaulted[k]) run_worst = std::max(run_worst, rel(series.delayed[k], series.progressive[k]));
            worst_small = std::max(worst_small, run_worst);
            over += run_worst > 0.01;
            ++runs;
        }
    o.pass = worst_zero <= 1e-12 && worst_small <= 0.01;
    o.detail = "zero delay within " + num(worst_zero) + "; delay 0.01: max relative gap " + num(worst_small) + ", " +
               std::to_string(over) + "/" + std::to_string(runs) + " paths above 1%";
    return o;
}

struct CsvRows {
    std::string header;
    std::vector<std::vector<double>> rows;
};

CsvRows read_csv(const fs::path& p) {
    CsvRows csv;
    std::ifstream in(p);
    std::getline(in, csv.header);
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::stringstream s(line);
        for (std::string cell; std::getline(s, cell, ',');) row.push_back(std::stod(cell));
        csv.rows.push_back(row);
    }
    return csv;
}

int run_engine(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(ENGINE_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. The engine end to end with the default configuration.
Outcome end_to_end() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "credinfo_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "default.json";
    std::ofstream(cfg) << "{}\n";

    const auto start = std::chrono::steady_clock::now();
    const int code = run_engine("validate --config " + cfg.string() + " --out " + (dir / "report.csv").string(), dir / "validate.log");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool orderings = true;
    std::size_t rows = 0;
    for (const std::string level : {"low", "high"}) {
        const fs::path out = dir / level;
        if (run_engine("scenario --config " + cfg.string() + " --barrier " + level + " --out " + out.string(), dir / (level + ".log")) != 0) {
            orderings = false;
            continue;
        }
        const CsvRows csv = read_csv(out / "scenario.csv");
        orderings &= csv.header == "t,firm_value,running_min,default,V_manager,V_progressive,V_delayed,V_insider";
        for (const auto& r : csv.rows) {
            if (r[3] != 0.0) continue;
            ++rows;
            if (r[2] > 3.0) orderings &= level == "low" ? r[4] >= r[5] : r[4] <= r[5];
            // prices are written with 12 significant digits
            else if (level == "low") orderings &= std::abs(r[4] - r[5]) <= 1e-11;
        }
    }
    o.pass = code == 0 && seconds <= 300.0 && orderings;
    o.detail = "validate exit " + std::to_string(code) + " in " + num(seconds) + " s; scenario orderings " +
               (orderings ? "hold" : "violated") + " on " + std::to_string(rows) + " rows";
    return o;
}

std::set<int> parse_list(const std::string& s) {
    std::set<int> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--expect-fail" && i + 1 < argc) {
            expected = parse_list(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--expect-fail N[,N...]]\n";
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kernel-oracle agreement", kernels_vs_simulation},
        {"kernel mass identities", mass_identities},
        {"constant-barrier degeneracy", constant_barrier},
        {"pathwise information ordering", pathwise_ordering},
        {"insider limit interpolation", insider_limits},
        {"measure collapse", measure_collapse},
        {"density process", density_process},
        {"delayed consistency", delayed_consistency},
        {"end to end", end_to_end},
    };
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.pass) failed.insert(id);
        std::cout << (out.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << ": " << out.detail << " ["
                  << num(seconds) << " s]" << std::endl;
    }
    if (failed == expected) return 0;
    std::cout << "failing set differs from the expected one" << std::endl;
    return 1;
}
