#ifndef ADIA_RUNNER_HPP
#define ADIA_RUNNER_HPP

#include <string>

#include <json.hpp>

#include "adia/config.hpp"

namespace adia {

// Executes one experiment (simulate/check/dual/oracle), writes the CSV series
// and JSON report next to `out_dir`, and returns the report. Sweep mode loops
// run() over the swept parameter with points executed in parallel up to the
// ADIACHECK_WORKERS cap, rows written in deterministic order.
nlohmann::json run(const ExperimentConfig& cfg, const std::string& out_dir = ".");
nlohmann::json run_sweep(const ExperimentConfig& cfg, const std::string& out_dir = ".");

// Schema check used by tests and by the tool after assembling a report.
void validate_report_json(const nlohmann::json& report);

// Exit-code contract: 0 ok, 2 config errors, 3 numerical failures.
int run_cli(int argc, char** argv);

}  // namespace adia

#endif
