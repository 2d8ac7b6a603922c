#pragma once

#include <functional>

#include <vector>

#include "advcol/mlp.hpp"
#include "advcol/problems.hpp"
#include "advcol/sampling.hpp"

namespace advcol {

/// n equally spaced values covering [lo, hi], both endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

/// Mean of (y-hat - u)^2 over `grid_n` equally spaced points of a 1-D
/// domain, or a grid_n x grid_n grid of a 2-D one.
double mse_vs_analytic(const Mlp& solver, const Problem& problem, int grid_n = 1000);

/// Mean of F^2 over the 32 x 32 inclusive grid of a 2-D problem, plus the
/// soft-boundary penalty when the problem uses one.
double validation_residual(const Mlp& solver, const Problem& problem, int grid_n = 32);

/// A candidate solution given directly as y-hat of the coordinate jets (all
/// coordinates along one common direction). Lets reference solutions and
/// hand-written stubs be scored like a trained network.
using SolutionFn = std::function<Jet<double>(std::span<const Jet<double>>)>;

double mse_vs_analytic(const SolutionFn& yhat, const Problem& problem, int grid_n = 1000);
double validation_residual(const SolutionFn& yhat, const Problem& problem, int grid_n = 32);

/// The metric selected by `type`.
double evaluation_loss(const Mlp& solver, const Problem& problem, LossType type, int mse_grid = 1000);

/// State of a 1-D fit at one iteration, on a fixed dense grid.
struct TraceSnapshot {
  std::int64_t iteration = 0;
  std::vector<double> samples;             // batch coordinates
  std::vector<double> sample_predictions;  // y-hat at the samples
  std::vector<double> grid;
  std::vector<double> prediction;          // y-hat on the grid
  std::vector<double> analytic;            // empty without a closed form
  std::vector<double> residual;            // |F| on the grid
};

TraceSnapshot snapshot(const Mlp& solver, const Problem& problem, const SampleBatch& batch,
                       std::int64_t iteration, int grid_n);

}  // namespace advcol
