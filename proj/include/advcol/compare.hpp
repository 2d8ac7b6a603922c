#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advcol/training.hpp"

namespace advcol {

struct SchemeSummary {
  std::string scheme;
  double avg_time_s = 0.0;
  double avg_loss = 0.0;
  int completed = 0;  // trials included in the averages
  int aborted = 0;
  std::vector<RunReport> trials;
};

struct ComparisonSummary {
  std::string problem;
  LossType loss_type = LossType::mse;
  std::vector<SchemeSummary> schemes;
};

/// Trial seeds are base seed + trial index, identical for every scheme.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

/// Runs every (scheme, trial) pair and averages wall time and final loss per
/// scheme. Aborted trials are kept in `trials` but left out of the averages.
/// `jobs` bounds the number of concurrent runs (0 = hardware concurrency).
ComparisonSummary compare(const Problem& problem, const std::vector<Scheme>& schemes,
                          const TrainConfig& config, int trials, int jobs = 1);

/// Recomputes the averages of `s` from its per-trial reports.
void summarize(SchemeSummary& s);

}  // namespace advcol
