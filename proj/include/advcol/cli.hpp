#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "advcol/compare.hpp"
#include "advcol/metrics.hpp"
#include "advcol/training.hpp"

namespace advcol::cli {

/// Everything a command needs; built from defaults, then a config file, then flags.
struct Settings {
  std::string problem = "expdecay";
  nlohmann::json problem_params = nlohmann::json::object();
  TrainConfig train;
  std::vector<Scheme> schemes{Scheme::adversarial, Scheme::noisy_linspace};
  int trials = 10;
  int jobs = 0;
  int snapshot_every = 1;
  int grid_n = 512;
  std::filesystem::path out = ".";
  bool wall_time = true;  // false writes 0 for every timing field
};

/// Built-in per-problem defaults (points, target, iteration budget, lambda).
Settings default_settings(const std::string& problem);

/// Applies a config document on top of `s`. Unknown keys throw.
void apply_config(Settings& s, const nlohmann::json& doc);

/// Text of the config reference printed by --help.
std::string config_reference();

/// Problem described by the settings.
Problem settings_problem(const Settings& s);

nlohmann::json report_to_json(const RunReport& r, bool wall_time = true);
nlohmann::json summary_to_json(const ComparisonSummary& c, bool wall_time = true);

/// Shortest round-trip decimal form ("%.17g"); "nan"/"inf" for non-finite.
std::string format_number(double v);

std::string metrics_csv(const RunReport& r);
std::string compare_csv(const ComparisonSummary& c, bool wall_time = true);
std::string compare_table(const ComparisonSummary& c);
std::string trace_csv(const std::vector<TraceSnapshot>& snapshots);

/// Exit codes: 0 target reached, 2 budget exhausted, 1 error.
int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err);
/// Exit codes: 0 completed, 1 error.
int cmd_compare(const Settings& s, std::ostream& out, std::ostream& err);
int cmd_trace(const Settings& s, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argv includes the program name).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace advcol::cli
