#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace minorant::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Raised for anything that should end the process with exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::string> targets;  // subset of a3, b3, c, ledger, buchstab, harness
    std::size_t budget = 0;            // 0: 10^7 boxes for 4-D, 10^6 for 2-D
    double tol = 1e-5;
    std::uint64_t harness_x = 100'000;
    std::size_t mc_samples = 1'000'000;  // 0 disables the Monte Carlo cross-check
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;  // empty: stdout

    /// Defaults, with workers from MINORANT_WORKERS or the hardware.
    static RunConfig defaults();
    void validate() const;  // throws ConfigError
};

/// Applies `key = value` lines ('#' starts a comment) on top of base.
RunConfig load_config(std::istream& in, RunConfig base);
RunConfig load_config_file(const std::string& path, RunConfig base);

std::vector<std::string> split_targets(const std::string& csv);

struct RunOutcome {
    nlohmann::json report;
    int exit_code = 0;  // 0 all pass, 1 some fail or inconclusive
};

/// Runs the requested targets in dependency order and builds the report.
RunOutcome run(const RunConfig& config);

/// Report with "runtime" and "environment" removed, for determinism checks.
nlohmann::json comparable(const nlohmann::json& report);

/// Writes JSON to path (or stdout when empty). Throws ConfigError on I/O failure.
void emit_report(const nlohmann::json& report, const std::string& path);

// Number formatting used throughout the report: 12 significant digits,
// bounds rounded outward.
double round_nearest12(double v);
double round_down12(double v);
double round_up12(double v);
nlohmann::json bounds_json(double lo, double hi);

/// Full command line entry point; returns the process exit status.
int main_entry(int argc, char** argv);

}  // namespace minorant::cli
