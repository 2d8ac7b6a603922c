#include "advcol/training.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "advcol/metrics.hpp"

namespace advcol {

namespace {

enum Stream : std::uint64_t { solver_init = 1, sampler_init = 2, noise = 3, baseline = 4 };

std::string dump_batch(const SampleBatch& batch) {
  std::ostringstream out;
  out.precision(17);
  out << "points:";
  for (int i = 0; i < batch.n; ++i) {
    out << " (";
    for (int a = 0; a < batch.d; ++a) out << (a ? "," : "") << batch.coords[i * batch.d + a];
    out << ')';
  }
  return out.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream)
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::target: return "target";
    case StopReason::max_iters: return "max_iters";
    case StopReason::aborted: return "aborted";
  }
  return "aborted";
}

void TrainConfig::validate() const {
  if (!(target_loss > 0.0)) throw std::invalid_argument("target_loss must be positive");
  if (eval_every < 1) throw std::invalid_argument("eval_every must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (n_points < 2) throw std::invalid_argument("n_points must be at least 2");
  if (mse_grid < 2) throw std::invalid_argument("mse_grid must be at least 2");
  for (int h : solver_hidden)
    if (h < 1) throw std::invalid_argument("solver hidden sizes must be positive");
}

TrainState init_state(const Problem& problem, const TrainConfig& config) {
  config.validate();
  TrainState s;
  MlpConfig solver_cfg;
  solver_cfg.layer_sizes.push_back(problem.dim());
  for (int h : config.solver_hidden) solver_cfg.layer_sizes.push_back(h);
  solver_cfg.layer_sizes.push_back(1);
  solver_cfg.hidden = config.solver_activation;
  solver_cfg.output = Activation::identity;
  s.solver = init_mlp(solver_cfg, derive_seed(config.seed, solver_init));
  s.solver_adam = AdamState(s.solver, config.solver_adam);
  if (config.scheme == Scheme::adversarial) {
    SamplerConfig sc = config.sampler;
    sc.n = config.n_points;
    sc.d = problem.dim();
    sc.validate();
    s.sampler = init_mlp(sc.network(), derive_seed(config.seed, sampler_init));
    s.sampler_adam = AdamState(*s.sampler, config.sampler_adam);
  }
  s.noise_rng.seed(derive_seed(config.seed, noise));
  s.baseline_rng.seed(derive_seed(config.seed, baseline));
  return s;
}

Var solver_loss(const Problem& problem, const BoundMlp& solver, const SampleBatch& batch,
                Tape& tape) {
  const int d = batch.d;
  std::vector<Var> terms;
  terms.reserve(static_cast<std::size_t>(batch.n) + 1);
  std::vector<Var> x(static_cast<std::size_t>(d));
  const bool has_nodes = batch.nodes.size() == batch.coords.size() &&
                         !batch.nodes.empty() && &batch.nodes.front().tape() == &tape;
  for (int i = 0; i < batch.n; ++i) {
    for (int a = 0; a < d; ++a) {
      const std::size_t idx = static_cast<std::size_t>(i) * d + a;
      x[a] = has_nodes ? batch.nodes[idx] : Var::leaf(tape, batch.coords[idx]);
    }
    terms.push_back(square(trial_residual<Var>(problem, *solver.net, solver.params, x)));
  }
  if (problem.trial == TrialMode::pde_soft)
    terms.push_back(boundary_penalty<Var>(problem, *solver.net, solver.params, terms.front()));
  return sum(std::span<const Var>(terms));
}

IterationMetrics train_step(TrainState& state, const Problem& problem, const TrainConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool adversarial = config.scheme == Scheme::adversarial;
  IterationMetrics m;
  m.iteration = state.iteration + 1;
  SampleBatch& batch = state.last_batch;
  try {
    // (1) collocation points
    std::optional<BoundMlp> sampler;
    if (adversarial) {
      const auto z = draw_noise(state.sampler->input_dim(), state.noise_rng);
      state.sampler_tape.clear();
      sampler = bind(*state.sampler, state.sampler_tape);
      batch = sample_adversarial(*sampler, z, problem.domain);
    } else {
      batch = sample_baseline(config.scheme, config.n_points, problem.domain, state.baseline_rng,
                              config.noise_std);
    }

    // (2)-(3) solver loss on this batch, then one solver update
    state.solver_tape.clear();
    const BoundMlp solver = bind(state.solver, state.solver_tape);
    const Var loss = solver_loss(problem, solver, batch, state.solver_tape);
    m.solver_loss = loss.value();
    backward(state.solver_tape, loss.node(), state.grads);
    adam_step(state.solver, state.solver_adam, parameter_gradient(state.grads, solver));

    // (4) sampler update against the updated solver, same points
    if (adversarial) {
      Tape& tape = state.sampler_tape;
      const BoundMlp updated = bind(state.solver, tape);
      const Var residual_sum = solver_loss(problem, updated, batch, tape);
      const KdTree tree(batch.coords, batch.d);
      const double lambda = config.sampler.lambda;
      const int k = config.sampler.k;
      Var objective = -residual_sum;
      if (lambda > 0.0) {
        const Var dk = entropy_penalty(batch, tree, k, config.sampler.eps_dist);
        m.entropy = dk.value();
        objective = objective + dk * lambda;
      } else {
        m.entropy = entropy_penalty_value(batch, tree, k, config.sampler.eps_dist);
      }
      m.sampler_loss = objective.value();
      backward(tape, objective.node(), state.grads);
      adam_step(*state.sampler, *state.sampler_adam, parameter_gradient(state.grads, *sampler));
    }
  } catch (const std::runtime_error& e) {
    std::ostringstream msg;
    msg << "iteration " << m.iteration << ": " << e.what() << "; " << dump_batch(batch);
    throw TrainingAborted(msg.str(), m.iteration);
  } catch (const std::domain_error& e) {
    std::ostringstream msg;
    msg << "iteration " << m.iteration << ": " << e.what() << "; " << dump_batch(batch);
    throw TrainingAborted(msg.str(), m.iteration);
  }
  if (!std::isfinite(m.solver_loss) || (m.sampler_loss && !std::isfinite(*m.sampler_loss))) {
    std::ostringstream msg;
    msg << "iteration " << m.iteration << ": non-finite loss; " << dump_batch(batch);
    throw TrainingAborted(msg.str(), m.iteration);
  }
  state.iteration = m.iteration;
  m.wall_ms = ms_since(t0);
  return m;
}

RunReport run(const Problem& problem, const TrainConfig& config, const IterationObserver& observer) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.problem = problem.name;
  report.scheme = std::string(scheme_name(config.scheme));
  report.seed = config.seed;
  report.loss_type = config.loss_type.value_or(problem.loss_type);

  TrainState state = init_state(problem, config);
  auto evaluate = [&] {
    return evaluation_loss(state.solver, problem, report.loss_type, config.mse_grid);
  };

  std::optional<double> last_eval;
  std::int64_t last_eval_iter = -1;
  try {
    while (state.iteration < config.max_iters) {
      IterationMetrics m = train_step(state, problem, config);
      if (m.iteration % config.eval_every == 0) {
        const auto te = std::chrono::steady_clock::now();
        m.eval_loss = evaluate();
        m.wall_ms += ms_since(te);
        last_eval = m.eval_loss;
        last_eval_iter = m.iteration;
        if (!state.best_eval || *m.eval_loss < *state.best_eval) state.best_eval = m.eval_loss;
      }
      report.trace.push_back(m);
      if (observer) observer(state, state.last_batch, report.trace.back());
      if (m.eval_loss && std::isfinite(config.target_loss) && *m.eval_loss <= config.target_loss) {
        report.stop_reason = StopReason::target;
        break;
      }
    }
    if (last_eval_iter != state.iteration) last_eval = evaluate();
    report.final_loss = *last_eval;
  } catch (const TrainingAborted& e) {
    report.stop_reason = StopReason::aborted;
    report.error = e.what();
  }
  report.iterations = state.iteration;
  report.solver = state.solver;
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace advcol
