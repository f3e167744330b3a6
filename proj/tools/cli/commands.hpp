#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "gather3d/analysis.hpp"
#include "gather3d/strategies.hpp"

namespace gather3d::cli {

// Stable process exit codes.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int horizon = 2;
inline constexpr int violation = 3;
}  // namespace exit_code

struct Overrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    bool quiet = false;
};

struct Outcome {
    strategies::RunResult run;
    std::map<std::string, analysis::CheckReport> checks;
    nlohmann::json summary;
    bool checks_passed = true;
};

void apply(const Overrides& ov, ExperimentConfig& cfg);

// Runs one simulation in memory, including the enabled checkers.
Outcome execute(const ExperimentConfig& cfg, bool record = true);

nlohmann::json report_json(const analysis::CheckReport& rep);

// Property names accepted by cmd_check.
const std::vector<std::string>& check_names();

// Replays one named checker over a stored trace.
analysis::CheckReport replay_check(const std::string& name, const Trace& trace, const CheckerToggles& opts);

int cmd_run(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& trace_path, const std::vector<std::string>& properties, const Overrides& ov,
              std::ostream& out, std::ostream& err);

}  // namespace gather3d::cli
