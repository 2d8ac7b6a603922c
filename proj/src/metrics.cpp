#include "advcol/metrics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace advcol {

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

double mse_vs_analytic(const Mlp& solver, const Problem& problem, int grid_n) {
  if (!problem.has_analytic())
    throw std::logic_error(problem.name + ": MSE needs an analytic solution");
  const auto& dom = problem.domain;
  double total = 0.0;
  std::size_t count = 0;
  if (problem.dim() == 1) {
    for (double x : linspace(dom.lo[0], dom.hi[0], grid_n)) {
      const std::array<double, 1> pt{x};
      total += square(trial_value(problem, solver, pt) - analytic(problem, pt));
      ++count;
    }
  } else {
    const auto xs = linspace(dom.lo[0], dom.hi[0], grid_n);
    const auto ys = linspace(dom.lo[1], dom.hi[1], grid_n);
    for (double x : xs)
      for (double y : ys) {
        const std::array<double, 2> pt{x, y};
        total += square(trial_value(problem, solver, pt) - analytic(problem, pt));
        ++count;
      }
  }
  return total / static_cast<double>(count);
}

double validation_residual(const Mlp& solver, const Problem& problem, int grid_n) {
  if (problem.dim() != 2)
    throw std::invalid_argument(problem.name + ": validation residual needs a 2-D problem");
  const auto xs = linspace(problem.domain.lo[0], problem.domain.hi[0], grid_n);
  const auto ys = linspace(problem.domain.lo[1], problem.domain.hi[1], grid_n);
  double total = 0.0;
  for (double x : xs)
    for (double y : ys) {
      const std::array<double, 2> pt{x, y};
      total += square(trial_residual(problem, solver, pt));
    }
  double loss = total / static_cast<double>(xs.size() * ys.size());
  if (problem.trial == TrialMode::pde_soft)
    loss += boundary_penalty<double>(problem, solver, solver.params(), 0.0);
  return loss;
}

namespace {

std::vector<std::vector<double>> grid_points(const Problem& problem, int grid_n) {
  const auto& dom = problem.domain;
  std::vector<std::vector<double>> pts;
  const auto xs = linspace(dom.lo[0], dom.hi[0], grid_n);
  if (problem.dim() == 1) {
    for (double x : xs) pts.push_back({x});
    return pts;
  }
  const auto ys = linspace(dom.lo[1], dom.hi[1], grid_n);
  for (double x : xs)
    for (double y : ys) pts.push_back({x, y});
  return pts;
}

double solution_value(const SolutionFn& yhat, std::span<const double> x) {
  std::vector<Jet<double>> jets;
  for (double v : x) jets.push_back(jet_lift(v, false, 0));
  return yhat(jets)[0];
}

}  // namespace

double mse_vs_analytic(const SolutionFn& yhat, const Problem& problem, int grid_n) {
  if (!problem.has_analytic())
    throw std::logic_error(problem.name + ": MSE needs an analytic solution");
  double total = 0.0;
  const auto pts = grid_points(problem, grid_n);
  for (const auto& pt : pts) total += square(solution_value(yhat, pt) - analytic(problem, pt));
  return total / static_cast<double>(pts.size());
}

double validation_residual(const SolutionFn& yhat, const Problem& problem, int grid_n) {
  if (problem.dim() != 2)
    throw std::invalid_argument(problem.name + ": validation residual needs a 2-D problem");
  const auto pts = grid_points(problem, grid_n);
  double total = 0.0;
  for (const auto& pt : pts) {
    std::vector<Jet<double>> u;
    for (int r = 0; r < problem.dim(); ++r) {
      std::vector<Jet<double>> jets;
      for (int i = 0; i < problem.dim(); ++i) jets.push_back(jet_lift(pt[i], i == r, problem.residual_order));
      u.push_back(yhat(jets));
    }
    total += square(residual<double>(problem, pt, u));
  }
  double loss = total / static_cast<double>(pts.size());
  if (problem.trial == TrialMode::pde_soft) {
    const auto bp = soft_boundary_points(problem);
    double b = 0.0;
    for (std::size_t i = 0; i < bp.size(); i += 2) {
      const std::span<const double> xb(bp.data() + i, 2);
      b += square(solution_value(yhat, xb) - laplace_boundary_value(problem, xb));
    }
    loss += problem.params.beta * b / static_cast<double>(bp.size() / 2);
  }
  return loss;
}

double evaluation_loss(const Mlp& solver, const Problem& problem, LossType type, int mse_grid) {
  return type == LossType::mse ? mse_vs_analytic(solver, problem, mse_grid)
                               : validation_residual(solver, problem);
}

}  // namespace advcol

namespace advcol {

TraceSnapshot snapshot(const Mlp& solver, const Problem& problem, const SampleBatch& batch,
                       std::int64_t iteration, int grid_n) {
  if (problem.dim() != 1) throw std::invalid_argument("trace snapshots support 1-D problems only");
  TraceSnapshot s;
  s.iteration = iteration;
  s.samples = batch.coords;
  for (double x : s.samples) {
    const std::array<double, 1> pt{x};
    s.sample_predictions.push_back(trial_value(problem, solver, pt));
  }
  s.grid = linspace(problem.domain.lo[0], problem.domain.hi[0], grid_n);
  for (double x : s.grid) {
    const std::array<double, 1> pt{x};
    s.prediction.push_back(trial_value(problem, solver, pt));
    if (problem.has_analytic()) s.analytic.push_back(analytic(problem, pt));
    s.residual.push_back(std::abs(trial_residual(problem, solver, pt)));
  }
  return s;
}

}  // namespace advcol
