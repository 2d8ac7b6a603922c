#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "advcol/adam.hpp"
#include "advcol/mlp.hpp"
#include "advcol/problems.hpp"
#include "advcol/sampling.hpp"

namespace advcol {

struct TrainConfig {
  Scheme scheme = Scheme::adversarial;
  int n_points = 30;
  std::int64_t max_iters = 20000;
  /// Stop once the evaluation loss is at or below this; +inf disables.
  double target_loss = std::numeric_limits<double>::infinity();
  std::optional<LossType> loss_type;  // defaults to the problem's
  int eval_every = 50;
  std::uint64_t seed = 0;

  std::vector<int> solver_hidden{32, 32};
  Activation solver_activation = Activation::tanh;
  AdamConfig solver_adam;

  SamplerConfig sampler;  // n and d are taken from n_points and the problem
  AdamConfig sampler_adam;

  double noise_std = -1.0;  // noisy-linspace sigma; < 0 means half the spacing
  int mse_grid = 1000;

  void validate() const;
};

/// Per-iteration record. Losses are sums over the batch.
struct IterationMetrics {
  std::int64_t iteration = 0;
  double solver_loss = 0.0;
  std::optional<double> sampler_loss;
  std::optional<double> entropy;  // D_k of the batch
  double wall_ms = 0.0;
  std::optional<double> eval_loss;
};

/// Raised when a step produces a non-finite value. Carries the iteration and
/// a dump of the batch in the message.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, std::int64_t iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

struct TrainState {
  Mlp solver;
  AdamState solver_adam;
  std::optional<Mlp> sampler;
  std::optional<AdamState> sampler_adam;
  std::int64_t iteration = 0;
  std::mt19937_64 noise_rng;
  std::mt19937_64 baseline_rng;
  std::optional<double> best_eval;
  SampleBatch last_batch;

  Tape solver_tape;
  Tape sampler_tape;
  GradientMap grads;
};

/// Networks and random streams for a fresh run; fully determined by
/// (problem dimension, config).
TrainState init_state(const Problem& problem, const TrainConfig& config);

/// One iteration: draw a batch, update the solver on it, then (adversarial
/// only) re-evaluate the residual at the same points against the updated
/// solver and update the sampler on -L + lambda * D_k.
IterationMetrics train_step(TrainState& state, const Problem& problem, const TrainConfig& config);

/// Sum over the batch of squared residuals of the current solver (plus the
/// soft-boundary penalty when the problem has one), with gradient support.
Var solver_loss(const Problem& problem, const BoundMlp& solver, const SampleBatch& batch,
                Tape& tape);

enum class StopReason { target, max_iters, aborted };
std::string_view stop_reason_name(StopReason r);

struct RunReport {
  std::string problem;
  std::string scheme;
  std::uint64_t seed = 0;
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::max_iters;
  double wall_time_s = 0.0;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  LossType loss_type = LossType::mse;
  std::vector<IterationMetrics> trace;
  std::string error;
  Mlp solver;
};

/// Called after every iteration with the state, the batch just used and its metrics.
using IterationObserver =
    std::function<void(const TrainState&, const SampleBatch&, const IterationMetrics&)>;

/// Repeats train_step until the evaluation loss reaches the target or
/// max_iters iterations have run.
RunReport run(const Problem& problem, const TrainConfig& config,
              const IterationObserver& observer = {});

/// Deterministic seed derivation for independent streams of one run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace advcol
