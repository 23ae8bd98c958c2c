#include "minorant/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "minorant/buchstab.hpp"
#include "minorant/losses.hpp"
#include "minorant/regions.hpp"
#include "minorant/sieve_harness.hpp"

namespace minorant::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kTargets{"a3", "b3", "c", "ledger", "buchstab", "harness"};

// Digits as an integer mantissa with 12 digits and a decimal exponent.
void decimal12(double v, long long& mant, int& exp10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    std::string s(buf);
    const auto e = s.find('e');
    exp10 = std::atoi(s.c_str() + e + 1) - 11;
    std::string digits;
    for (std::size_t i = 0; i < e; ++i) {
        if (s[i] != '.') {
            digits += s[i];
        }
    }
    mant = std::atoll(digits.c_str());
}

double from_decimal(long long mant, int exp10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llde%d", mant, exp10);
    return std::strtod(buf, nullptr);
}

double parse_double(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
    return d;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    // Accept 1e7-style values for counts.
    const double d = parse_double(key, v);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
        throw ConfigError("config: " + key + " expects a nonnegative integer, got '" + v + "'");
    }
    return static_cast<std::uint64_t>(d);
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* status_of(bool pass, bool inconclusive)
{
    return pass ? "pass" : inconclusive ? "inconclusive" : "fail";
}

json config_json(const RunConfig& c)
{
    return {
        {"targets", c.targets},
        {"budget", c.budget},
        {"tol", round_nearest12(c.tol)},
        {"harness_x", c.harness_x},
        {"mc_samples", c.mc_samples},
        {"seed", c.seed},
        {"workers", c.workers},
    };
}

json buchstab_json(const buchstab::BuchstabTable& table, bool& pass)
{
    const Enclosure w2 = buchstab::omega_enclosure(table, 2.0);
    const double dev = buchstab::max_deviation_23(table);
    const Enclosure r34 = buchstab::branch34_range();
    const Enclosure plateau = buchstab::table_hull(table, 4.0, 8.0);
    const bool ok_w2 = w2.contains(0.5) && w2.width() <= 1e-8;
    const bool ok_dev = dev <= 1e-6;
    const bool ok_r34 = r34.lo() >= buchstab::kLowerFloor34 && r34.hi() <= buchstab::kUpperCap34;
    const bool ok_plateau =
        plateau.lo() >= buchstab::kLowerPlateau - 1e-4 && plateau.hi() <= buchstab::kUpperPlateau + 1e-4;
    pass = ok_w2 && ok_dev && ok_r34 && ok_plateau;
    return {
        {"omega_at_2", bounds_json(w2.lo(), w2.hi())},
        {"omega_at_2_width", round_up12(w2.width())},
        {"closed_form_max_deviation_2_3", round_up12(dev)},
        {"branch34_range", bounds_json(r34.lo(), r34.hi())},
        {"branch34_target", {{"lo", buchstab::kLowerFloor34}, {"hi", buchstab::kUpperCap34}}},
        {"table_range_4_8", bounds_json(plateau.lo(), plateau.hi())},
        {"table_target_4_8",
         {{"lo", round_nearest12(buchstab::kLowerPlateau - 1e-4)}, {"hi", round_nearest12(buchstab::kUpperPlateau + 1e-4)}}},
        {"table_max_width", round_up12(table.max_width())},
        {"checks", {{"omega_at_2", ok_w2}, {"closed_form", ok_dev}, {"branch34", ok_r34}, {"plateau", ok_plateau}}},
        {"status", pass ? "pass" : "fail"},
    };
}

struct LossRun {
    losses::LossResult result;
    std::optional<quadrature::IntegralEstimate> mc;
    bool mc_consistent = true;
    bool pass() const { return result.passed && mc_consistent; }
    bool inconclusive() const { return !result.passed && result.estimate.budget_exhausted; }
};

json loss_json(const LossRun& r)
{
    const auto& e = r.result.estimate;
    json j{
        {"enclosure", bounds_json(e.lower, e.upper)},
        {"target", r.result.target},
        {"margin", round_down12(r.result.margin())},
        {"boxes_used", e.boxes_used},
        {"budget_exhausted", e.budget_exhausted},
        {"escalations", r.result.escalations_used},
        {"final_budget", r.result.final_budget},
        {"final_tol", round_nearest12(r.result.final_tol)},
        {"status", status_of(r.pass(), r.inconclusive())},
    };
    if (r.mc) {
        j["monte_carlo"] = {
            {"estimate", round_nearest12(r.mc->lower)},
            {"std_error", round_up12(r.mc->std_error)},
            {"samples", r.mc->samples},
            {"hits", r.mc->hits},
            {"consistent", r.mc_consistent},
        };
    }
    return j;
}

}  // namespace

double round_nearest12(double v)
{
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    long long m = 0;
    int e = 0;
    decimal12(v, m, e);
    return from_decimal(m, e);
}

double round_down12(double v)
{
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    long long m = 0;
    int e = 0;
    decimal12(v, m, e);
    return from_decimal(m, e) <= v ? from_decimal(m, e) : from_decimal(m - 1, e);
}

double round_up12(double v)
{
    if (!std::isfinite(v) || v == 0.0) {
        return v;
    }
    long long m = 0;
    int e = 0;
    decimal12(v, m, e);
    return from_decimal(m, e) >= v ? from_decimal(m, e) : from_decimal(m + 1, e);
}

json bounds_json(double lo, double hi) { return {{"lo", round_down12(lo)}, {"hi", round_up12(hi)}}; }

RunConfig RunConfig::defaults()
{
    RunConfig c;
    c.targets = {"ledger"};
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MINORANT_WORKERS")) {
        const auto w = parse_uint("MINORANT_WORKERS", env);
        if (w < 1 || w > 1024) {
            throw ConfigError("MINORANT_WORKERS must lie in [1, 1024]");
        }
        c.workers = static_cast<unsigned>(w);
    }
    return c;
}

void RunConfig::validate() const
{
    for (const auto& t : targets) {
        if (kTargets.count(t) == 0) {
            throw ConfigError("unknown target '" + t + "' (expected a3, b3, c, ledger, buchstab, harness)");
        }
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw ConfigError("tol must be positive");
    }
    if (harness_x < sieve::kMinX || harness_x > sieve::kMaxX) {
        throw ConfigError("harness_x must lie in [10^4, 10^8]");
    }
    if (mc_samples != 0 && mc_samples < 10'000) {
        throw ConfigError("mc_samples must be 0 or at least 10^4");
    }
    if (workers < 1 || workers > 1024) {
        throw ConfigError("workers must lie in [1, 1024]");
    }
}

std::vector<std::string> split_targets(const std::string& csv)
{
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

RunConfig load_config(std::istream& in, RunConfig c)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "targets") {
            c.targets = split_targets(val);
        } else if (key == "budget") {
            c.budget = parse_uint(key, val);
        } else if (key == "tol") {
            c.tol = parse_double(key, val);
        } else if (key == "harness_x") {
            c.harness_x = parse_uint(key, val);
        } else if (key == "mc_samples") {
            c.mc_samples = parse_uint(key, val);
        } else if (key == "seed") {
            c.seed = parse_uint(key, val);
        } else if (key == "workers") {
            c.workers = static_cast<unsigned>(std::min<std::uint64_t>(parse_uint(key, val), 1u << 20));
        } else if (key == "out") {
            c.out = val;
        } else {
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    return load_config(in, std::move(base));
}

RunOutcome run(const RunConfig& config)
{
    config.validate();
    RunOutcome out;
    json& doc = out.report;
    doc["version"] = kVersion;
    doc["config"] = config_json(config);
    doc["environment"] = {
        {"compiler", __VERSION__},
        {"hardware_threads", std::thread::hardware_concurrency()},
    };
    if (config.targets.empty()) {
        return out;
    }
    const std::set<std::string> want(config.targets.begin(), config.targets.end());
    const bool ledger = want.count("ledger") > 0;
    json results = json::object();
    json runtime = json::object();
    bool all_pass = true;

    std::shared_ptr<const buchstab::BuchstabTable> table;
    if (want.count("buchstab") || want.count("c") || ledger) {
        const auto t0 = std::chrono::steady_clock::now();
        table = std::make_shared<buchstab::BuchstabTable>(buchstab::build_table());
        if (want.count("buchstab")) {
            bool pass = false;
            results["buchstab"] = buchstab_json(*table, pass);
            all_pass = all_pass && pass;
        }
        runtime["buchstab"] = seconds_since(t0);
    }

    std::map<losses::Loss, LossRun> runs;
    const std::pair<losses::Loss, const char*> order[] = {
        {losses::Loss::A3, "a3"}, {losses::Loss::B3, "b3"}, {losses::Loss::C, "c"}};
    for (const auto& [loss, key] : order) {
        if (!want.count(key) && !ledger) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto problem = losses::make_loss(loss, table);
        LossRun r;
        r.result = losses::evaluate_loss(problem, {config.budget, config.tol, config.workers, 2});
        if (config.mc_samples > 0) {
            r.mc = losses::loss_mc(problem, r.result.estimate, config.mc_samples, config.seed, config.workers);
            const double slack = 4.0 * r.mc->std_error;
            r.mc_consistent = r.mc->lower >= r.result.estimate.lower - slack &&
                              r.mc->lower <= r.result.estimate.upper + slack;
        }
        if (want.count(key)) {
            results[losses::loss_name(loss)] = loss_json(r);
            all_pass = all_pass && r.pass();
        }
        runtime[losses::loss_name(loss)] = seconds_since(t0);
        runs.emplace(loss, std::move(r));
    }

    if (ledger) {
        const auto& a3 = runs.at(losses::Loss::A3);
        const auto& b3 = runs.at(losses::Loss::B3);
        const auto& c = runs.at(losses::Loss::C);
        const auto l = losses::assemble_ledger(a3.result.estimate, b3.result.estimate, c.result.estimate);
        const bool pass = l.total_pass && l.retained_pass;
        const bool inconclusive = a3.inconclusive() || b3.inconclusive() || c.inconclusive();
        results["ledger"] = {
            {"loss_a3", bounds_json(l.loss_a3.lower, l.loss_a3.upper)},
            {"loss_b3", bounds_json(l.loss_b3.lower, l.loss_b3.upper)},
            {"loss_c", bounds_json(l.loss_c.lower, l.loss_c.upper)},
            {"total_upper", round_up12(l.total_upper)},
            {"retained_lower", round_down12(l.retained_lower)},
            {"targets",
             {{"loss_a3", losses::kTargetA3},
              {"loss_b3", losses::kTargetB3},
              {"loss_c", losses::kTargetC},
              {"total", losses::kTargetTotal},
              {"retained", losses::kTargetRetained}}},
            {"margin_total", round_down12(losses::kTargetTotal - l.total_upper)},
            {"status", status_of(pass, inconclusive)},
        };
        all_pass = all_pass && pass;
    }

    if (want.count("harness")) {
        const auto t0 = std::chrono::steady_clock::now();
        const sieve::SieveContext ctx(config.harness_x);
        const auto h = sieve::run_harness(ctx, config.workers);
        json j = json::parse(sieve::to_json(h));
        const bool ratio_ok = h.minorant.ratio > 0.0 && h.minorant.ratio <= 1.0;
        const bool pass = h.passed() && ratio_ok;
        j["ratio_in_unit_interval"] = ratio_ok;
        j["status"] = pass ? "pass" : "fail";
        results["harness"] = std::move(j);
        all_pass = all_pass && pass;
        runtime["harness"] = seconds_since(t0);
    }

    doc["results"] = std::move(results);
    json rt;
    for (auto& [k, v] : runtime.items()) {
        rt[k] = round_nearest12(v.get<double>());
    }
    doc["runtime"] = std::move(rt);
    out.exit_code = all_pass ? 0 : 1;
    return out;
}

json comparable(const json& report)
{
    json j = report;
    j.erase("runtime");
    j.erase("environment");
    return j;
}

void emit_report(const json& report, const std::string& path)
{
    const std::string text = report.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw ConfigError("failed writing report to stdout");
        }
        return;
    }
    std::ofstream f(path);
    if (!f || !(f << text) || !f.flush()) {
        throw ConfigError("cannot write report to " + path);
    }
}

namespace {

int cmd_verify(RunConfig c, const std::string& config_path, const CLI::App& sub, const std::string& targets_csv,
               const RunConfig& flags)
{
    if (!config_path.empty()) {
        c = load_config_file(config_path, c);
    }
    if (sub.count("--targets")) {
        c.targets = split_targets(targets_csv);
    }
    if (sub.count("--budget")) {
        c.budget = flags.budget;
    }
    if (sub.count("--tol")) {
        c.tol = flags.tol;
    }
    if (sub.count("--harness-x")) {
        c.harness_x = flags.harness_x;
    }
    if (sub.count("--mc-samples")) {
        c.mc_samples = flags.mc_samples;
    }
    if (sub.count("--seed")) {
        c.seed = flags.seed;
    }
    if (sub.count("--workers")) {
        c.workers = flags.workers;
    }
    if (sub.count("--out")) {
        c.out = flags.out;
    }
    const RunOutcome o = run(c);
    emit_report(o.report, c.out);
    return o.exit_code;
}

int cmd_omega(double u)
{
    if (!(u >= 1.0) || !std::isfinite(u)) {
        throw ConfigError("omega: u must be a finite number >= 1");
    }
    json j;
    j["u"] = u;
    const auto lo = buchstab::omega_bound(buchstab::BoundKind::Lower, u);
    const auto hi = buchstab::omega_bound(buchstab::BoundKind::Upper, u);
    j["omega0"] = bounds_json(lo.lo(), lo.hi());
    j["omega1"] = bounds_json(hi.lo(), hi.hi());
    if (u <= 8.0) {
        const auto table = buchstab::build_table();
        const auto w = buchstab::omega_enclosure(table, u);
        j["omega"] = bounds_json(w.lo(), w.hi());
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main_entry(int argc, char** argv)
{
    CLI::App app{"Rigorous checks for a sieve-theoretic prime minorant: Buchstab bounds, loss integrals, "
                 "exact desk-scale decomposition."};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig flags;
    std::string targets_csv;
    std::string config_path;
    auto* verify = app.add_subcommand("verify", "Run verification targets and write a JSON report");
    verify->add_option("--targets", targets_csv, "Comma list of a3,b3,c,ledger,buchstab,harness");
    verify->add_option("--budget", flags.budget, "Box budget per integral (0: 1e7 for 4-D, 1e6 for 2-D)");
    verify->add_option("--tol", flags.tol, "Target gap upper - lower");
    verify->add_option("--harness-x", flags.harness_x, "Window parameter x for the sieve harness");
    verify->add_option("--mc-samples", flags.mc_samples, "Monte Carlo samples per integral (0 disables)");
    verify->add_option("--seed", flags.seed, "Monte Carlo seed");
    verify->add_option("--workers", flags.workers, "Worker threads");
    verify->add_option("--out", flags.out, "Report path (default stdout)");
    verify->add_option("--config", config_path, "key = value config file; flags override it");

    std::uint64_t hx = 100'000;
    unsigned hworkers = 0;
    std::string hout;
    auto* harness = app.add_subcommand("harness", "Exact sieve decomposition checks on (x, 2x]");
    harness->add_option("--x", hx, "Window parameter x in [1e4, 1e8]");
    harness->add_option("--workers", hworkers, "Worker threads");
    harness->add_option("--out", hout, "Report path (default stdout)");

    double u = 0.0;
    auto* omega = app.add_subcommand("omega", "Enclosures of omega and its piecewise bounds at u");
    omega->add_option("--u", u, "Argument u >= 1")->required();

    double u_max = 8.0;
    double step = 1e-4;
    double ttol = 1e-7;
    std::string tout;
    auto* table = app.add_subcommand("table", "Dump the Buchstab table as CSV (u,lo,hi)");
    table->add_option("--u-max", u_max, "Upper end of the table");
    table->add_option("--step", step, "Grid spacing; 1/step must be an integer");
    table->add_option("--tol", ttol, "Largest admissible enclosure width");
    table->add_option("--out", tout, "CSV path (default stdout)");

    std::string rout;
    auto* regions_cmd = app.add_subcommand("regions", "Export region definitions as JSON");
    regions_cmd->add_option("--out", rout, "JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) {
            return cmd_verify(RunConfig::defaults(), config_path, *verify, targets_csv, flags);
        }
        if (*harness) {
            if (hx < sieve::kMinX || hx > sieve::kMaxX) {
                throw ConfigError("harness: x must lie in [10^4, 10^8]");
            }
            const unsigned w = hworkers ? hworkers : RunConfig::defaults().workers;
            const sieve::SieveContext ctx(hx);
            const auto h = sieve::run_harness(ctx, w);
            emit_report(json::parse(sieve::to_json(h)), hout);
            return h.passed() ? 0 : 1;
        }
        if (*omega) {
            return cmd_omega(u);
        }
        if (*table) {
            buchstab::BuchstabTable t = [&] {
                try {
                    return buchstab::build_table(u_max, step, ttol);
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
            }();
            if (tout.empty()) {
                buchstab::write_csv(t, std::cout);
            } else {
                std::ofstream f(tout);
                if (!f) {
                    throw ConfigError("cannot write " + tout);
                }
                buchstab::write_csv(t, f);
            }
            return 0;
        }
        if (*regions_cmd) {
            json j = json::object();
            for (const auto& r : {regions::region_a(), regions::region_b(), regions::region_c(),
                                  regions::type_ii_strip(), regions::region_ua3(), regions::region_ub3()}) {
                j[r.name()] = json::parse(r.to_json());
            }
            emit_report(j, rout);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace minorant::cli
