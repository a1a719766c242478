#include "credinfo/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "credinfo/errors.hpp"

namespace credinfo {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

const json& object_at(const json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    object_at(j, where);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) bad(where, "unknown key '" + key + "'");
    }
}

void read(const json& j, const char* key, double& dst, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) bad(where + "." + key, "expected a number");
    dst = v.get<double>();
    if (!std::isfinite(dst)) bad(where + "." + key, "must be finite");
}

template <class Int>
void read_count(const json& j, const char* key, Int& dst, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) bad(where + "." + key, "expected a non-negative integer");
    dst = static_cast<Int>(v.get<unsigned long long>());
}

std::vector<double> read_vector(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_array()) bad(where + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) bad(where + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string type_of(const json& j, const std::string& where) {
    if (!j.contains("type") || !j.at("type").is_string()) bad(where, "missing string 'type'");
    return j.at("type").get<std::string>();
}

}  // namespace

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(root, {"firm", "rate", "barrier", "noise", "delay", "claim", "grid", "seeds", "mc", "validation"}, "root");

    Config c;
    if (root.contains("firm")) {
        const json& f = root.at("firm");
        check_keys(f, {"x0", "mu", "sigma"}, "firm");
        read(f, "x0", c.market.firm.x0, "firm");
        read(f, "mu", c.market.firm.mu, "firm");
        read(f, "sigma", c.market.firm.sigma, "firm");
    }
    read(root, "rate", c.market.discount.r, "root");

    std::vector<double> levels{1.0, 3.0};
    std::optional<std::vector<double>> weights;
    DensityModel density = IndependentDensity{};
    if (root.contains("barrier")) {
        const json& b = root.at("barrier");
        check_keys(b, {"levels", "weights", "realized", "density"}, "barrier");
        if (b.contains("levels")) levels = read_vector(b, "levels", "barrier");
        if (b.contains("weights")) weights = read_vector(b, "weights", "barrier");
        if (b.contains("realized")) {
            const json& r = b.at("realized");
            if (r.is_string()) c.realized = r.get<std::string>();
            else if (r.is_number()) {
                std::ostringstream s;
                s << std::setprecision(17) << r.get<double>();
                c.realized = s.str();
            } else bad("barrier.realized", "expected \"low\", \"high\", \"sample\" or a level");
        }
        if (b.contains("density")) {
            const json& d = b.at("density");
            const std::string type = type_of(object_at(d, "barrier.density"), "barrier.density");
            if (type == "independent") {
                check_keys(d, {"type"}, "barrier.density");
            } else if (type == "signal") {
                check_keys(d, {"type", "t0", "c"}, "barrier.density");
                BrownianSignal s;
                read(d, "t0", s.t0, "barrier.density");
                read(d, "c", s.c, "barrier.density");
                density = s;
            } else {
                bad("barrier.density.type", "expected \"independent\" or \"signal\"");
            }
        }
    }
    if (!weights) {
        if (const auto* s = std::get_if<BrownianSignal>(&density)) {
            if (levels.size() != 2) bad("barrier", "signal density requires exactly two levels");
            weights = signal_law(levels[0], levels[1], *s).weights();
        } else {
            weights = std::vector<double>(levels.size(), 1.0 / static_cast<double>(levels.size()));
        }
    }
    c.market.barrier = BarrierModel{BarrierLaw(levels, *weights), density};

    if (root.contains("noise")) {
        const json& n = root.at("noise");
        check_keys(n, {"sigma_eps"}, "noise");
        double s = c.noise.sigma_eps();
        read(n, "sigma_eps", s, "noise");
        c.noise = NoiseModel(s);
    }
    if (root.contains("delay")) {
        const json& d = root.at("delay");
        check_keys(d, {"delta", "dates"}, "delay");
        if (d.contains("delta") && d.contains("dates")) bad("delay", "give either 'delta' or 'dates'");
        c.delayed = DelayedInfo{};
        read(d, "delta", c.delayed.delay, "delay");
        if (d.contains("dates")) c.delayed.observation_dates = read_vector(d, "dates", "delay");
    }
    if (root.contains("claim")) {
        const json& k = root.at("claim");
        const std::string type = type_of(object_at(k, "claim"), "claim");
        double maturity = 1.0;
        if (type == "zcb") {
            check_keys(k, {"type", "maturity", "alpha_rec"}, "claim");
            double alpha = 1.0;
            read(k, "maturity", maturity, "claim");
            read(k, "alpha_rec", alpha, "claim");
            c.claim = make_zcb(maturity, alpha);
        } else if (type == "cds") {
            check_keys(k, {"type", "maturity", "kappa", "alpha_rec"}, "claim");
            double kappa = 0.01, alpha = 0.4;
            read(k, "maturity", maturity, "claim");
            read(k, "kappa", kappa, "claim");
            read(k, "alpha_rec", alpha, "claim");
            c.claim = make_cds(maturity, kappa, alpha);
        } else if (type == "custom") {
            check_keys(k, {"type", "maturity", "terminal", "dividend_rate", "recovery"}, "claim");
            Claim cl{1.0, 0.0, 0.0, 0.0};
            read(k, "maturity", cl.maturity, "claim");
            read(k, "terminal", cl.terminal, "claim");
            read(k, "dividend_rate", cl.dividend_rate, "claim");
            read(k, "recovery", cl.recovery, "claim");
            c.claim = cl;
        } else {
            bad("claim.type", "expected \"zcb\", \"cds\" or \"custom\"");
        }
    }
    c.horizon = c.claim.maturity;
    if (root.contains("grid")) {
        const json& g = root.at("grid");
        check_keys(g, {"horizon", "steps"}, "grid");
        read(g, "horizon", c.horizon, "grid");
        read_count(g, "steps", c.steps, "grid");
    }
    if (root.contains("seeds")) {
        const json& s = root.at("seeds");
        check_keys(s, {"scenario", "oracle", "insider_q"}, "seeds");
        read_count(s, "scenario", c.scenario_seed, "seeds");
        read_count(s, "oracle", c.oracle_seed, "seeds");
        read_count(s, "insider_q", c.insider_q.seed, "seeds");
    }
    if (root.contains("mc")) {
        const json& m = root.at("mc");
        check_keys(m, {"oracle_paths", "oracle_steps", "insider_q_paths", "insider_q_steps", "gauss_hermite_order", "workers"},
                   "mc");
        read_count(m, "oracle_paths", c.oracle_paths, "mc");
        read_count(m, "oracle_steps", c.oracle_steps, "mc");
        read_count(m, "insider_q_paths", c.insider_q.paths, "mc");
        read_count(m, "insider_q_steps", c.insider_q.steps, "mc");
        read_count(m, "gauss_hermite_order", c.insider_q.gauss_hermite_order, "mc");
        read_count(m, "workers", c.workers, "mc");
    }
    if (root.contains("validation")) {
        const json& v = root.at("validation");
        check_keys(v, {"suite"}, "validation");
        if (v.contains("suite")) {
            if (!v.at("suite").is_string()) bad("validation.suite", "expected a string");
            c.suite = v.at("suite").get<std::string>();
        }
        if (c.suite != "default" && c.suite != "empty") bad("validation.suite", "expected \"default\" or \"empty\"");
    }

    c.market.validate_for(c.claim);
    c.delayed.validate();
    if (!(c.horizon > 0.0) || c.horizon > c.claim.maturity) bad("grid.horizon", "must lie in (0, claim maturity]");
    if (c.steps < 1) bad("grid.steps", "must be >= 1");
    if (c.oracle_paths < 2) bad("mc.oracle_paths", "must be >= 2");
    if (c.oracle_steps < 1) bad("mc.oracle_steps", "must be >= 1");
    if (c.insider_q.paths < 1000) bad("mc.insider_q_paths", "must be >= 1000");
    if (c.insider_q.steps < 1) bad("mc.insider_q_steps", "must be >= 1");
    if (c.insider_q.gauss_hermite_order < 1) bad("mc.gauss_hermite_order", "must be >= 1");
    c.insider_q.workers = c.workers;
    if (c.realized != "low" && c.realized != "high" && c.realized != "sample") {
        try {
            c.market.barrier.law.index_of(std::stod(c.realized));
        } catch (const std::exception&) {
            bad("barrier.realized", "not a level of the barrier law");
        }
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double realized_barrier(const Config& config, const std::string& choice, std::uint64_t seed) {
    const BarrierLaw& law = config.market.barrier.law;
    if (choice == "low") return law.levels().front();
    if (choice == "high") return law.levels().back();
    if (choice == "sample") return sample_barrier(law, seed);
    double value = 0.0;
    try {
        value = std::stod(choice);
    } catch (const std::exception&) {
        throw std::invalid_argument("barrier choice must be low, high, sample or a level");
    }
    law.index_of(value);
    return value;
}

namespace {

ScenarioSpec scenario_spec(const Config& c, double barrier, std::uint64_t seed) {
    ScenarioSpec s;
    s.market = c.market;
    s.claim = c.claim;
    s.delayed = c.delayed;
    s.noise = c.noise;
    s.barrier = barrier;
    s.horizon = c.horizon;
    s.steps = c.steps;
    s.seed = seed;
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path.string() + "'");
    out << text;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

}  // namespace

PriceSeries cmd_scenario(const Config& config, const std::optional<std::string>& barrier,
                         std::optional<std::uint64_t> seed, const std::string& out_dir) {
    const std::uint64_t sd = seed.value_or(config.scenario_seed);
    const double level = realized_barrier(config, barrier.value_or(config.realized), sd);
    const PriceSeries series = run_scenario(scenario_spec(config, level, sd));
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv, dat;
    write_scenario_csv(series, csv);
    write_scenario_dat(series, dat);
    write_file(std::filesystem::path(out_dir) / "scenario.csv", csv.str());
    write_file(std::filesystem::path(out_dir) / "scenario.dat", dat.str());
    return series;
}

std::string cmd_price(const Config& config, const std::string& info, const std::string& measure, double t) {
    if (measure != "P" && measure != "Q") throw std::invalid_argument("measure must be P or Q");
    const Measure ms = measure == "P" ? Measure::P : Measure::Q;
    if (!(t >= 0.0) || t > config.horizon + 1e-12) throw std::invalid_argument("t must lie in [0, horizon]");
    const double level = realized_barrier(config, config.realized, config.scenario_seed);
    const PathSet paths = simulate_paths(config.market.firm, config.horizon, config.steps, 1, config.scenario_seed, 1);
    const MarketState state = state_at(paths, 0, t);
    const bool dead = state.x_min <= level;

    InfoSpec spec;
    Knowledge kn = Knowledge::of(state);
    if (info == "manager") {
        spec = ManagerInfo{ms};
        kn.barrier = level;
    } else if (info == "progressive") {
        spec = ProgressiveInfo{};
    } else if (info == "delayed") {
        spec = config.delayed;
        kn.state = state_at(paths, 0, config.delayed.observation_time(t));
        kn.default_observed = dead;
    } else if (info == "insider") {
        spec = InsiderInfo{config.noise, ms};
        const auto eps = sample_noise_path(config.noise, paths.grid(), config.scenario_seed);
        kn.noisy_barrier = level + eps[paths.index_of(t)];
    } else {
        throw std::invalid_argument("info must be manager, progressive, delayed or insider");
    }
    if (dead) {
        const bool mc = info == "insider" && ms == Measure::Q;
        return mc ? "0,0" : "0";
    }
    const PriceResult r = price(spec, config.market, config.claim, t, kn, config.insider_q);
    return r.std_error ? fmt(r.value) + "," + fmt(*r.std_error) : fmt(r.value);
}

ValidationReport cmd_validate(const Config& config, const std::string& out_file) {
    std::vector<ValidationCase> suite;
    if (config.suite == "default") {
        SuiteSettings settings;
        settings.oracle_paths = config.oracle_paths;
        settings.oracle_steps = config.oracle_steps;
        settings.oracle_seed = config.oracle_seed;
        settings.insider_q = config.insider_q;
        settings.workers = config.workers;
        suite = default_suite(config.market, config.claim, config.delayed, config.noise, settings);
    }
    const ValidationReport report = validate_report(suite);
    std::ostringstream csv;
    write_report_csv(report, csv);
    write_file(out_file, csv.str());
    return report;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Credit pricing under heterogeneous default information"};
    app.require_subcommand(1);

    std::string config_path, out_path, barrier_choice, info, measure = "P";
    std::uint64_t seed = 0;
    double t = 0.0;

    auto* scenario = app.add_subcommand("scenario", "Simulate one firm path and price it under every information structure");
    scenario->add_option("--config", config_path, "JSON configuration file")->required();
    auto* barrier_opt = scenario->add_option("--barrier", barrier_choice, "Realized barrier: low, high or sample");
    auto* seed_opt = scenario->add_option("--seed", seed, "Scenario seed");
    scenario->add_option("--out", out_path, "Output directory")->required();

    auto* price_cmd = app.add_subcommand("price", "Price at time t on the configured scenario path");
    price_cmd->add_option("--config", config_path, "JSON configuration file")->required();
    price_cmd->add_option("--info", info, "manager, progressive, delayed or insider")->required();
    price_cmd->add_option("--measure", measure, "P or Q");
    price_cmd->add_option("--t", t, "Pricing time (a grid point)")->required();

    auto* validate = app.add_subcommand("validate", "Compare every closed form with the Monte Carlo oracle");
    validate->add_option("--config", config_path, "JSON configuration file")->required();
    validate->add_option("--out", out_path, "Report CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        const Config config = load_config(config_path);
        if (scenario->parsed()) {
            std::optional<std::string> b;
            if (barrier_opt->count() > 0) {
                if (barrier_choice != "low" && barrier_choice != "high" && barrier_choice != "sample")
                    throw std::invalid_argument("--barrier must be low, high or sample");
                b = barrier_choice;
            }
            std::optional<std::uint64_t> s;
            if (seed_opt->count() > 0) s = seed;
            const PriceSeries series = cmd_scenario(config, b, s, out_path);
            out << "barrier " << fmt(series.barrier) << ", default "
                << (series.default_time ? fmt(*series.default_time) : std::string("none")) << '\n';
            return 0;
        }
        if (price_cmd->parsed()) {
            out << cmd_price(config, info, measure, t) << '\n';
            return 0;
        }
        const ValidationReport report = cmd_validate(config, out_path);
        for (const auto& r : report.rows)
            out << (r.pass ? "PASS " : "FAIL ") << r.case_id << " z=" << fmt(r.z_score) << '\n';
        out << (report.pass() ? "validation passed" : "validation FAILED") << '\n';
        return report.pass() ? 0 : 1;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "bad input: " << e.what() << '\n';
        return 2;
    } catch (const DomainViolation& e) {
        err << "bad input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace credinfo
