#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advcol/kdtree.hpp"
#include "advcol/mlp.hpp"
#include "advcol/problems.hpp"
#include "advcol/var.hpp"

namespace advcol {

enum class Scheme { adversarial, uniform, linspace, noisy_linspace };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

struct SamplerConfig {
  int z_dim = 8;
  int n = 30;
  int d = 1;
  int k = 2;
  double lambda = 1.0;
  double eps_dist = 1e-12;
  std::vector<int> hidden{32, 32};
  Activation activation = Activation::tanh;

  void validate() const;
  /// Network shape: [z_dim, hidden..., n * d] with tanh output.
  MlpConfig network() const;
};

/// Collocation points, row-major n x d. Adversarial batches also carry each
/// coordinate as a tape node.
struct SampleBatch {
  int n = 0;
  int d = 0;
  std::vector<double> coords;
  std::vector<Var> nodes;
  Scheme scheme = Scheme::uniform;

  std::span<const double> point(int i) const {
    return std::span<const double>(coords).subspan(static_cast<std::size_t>(i) * d, d);
  }
};

/// x_ij = lo_j + (t_ij + 1) / 2 * (hi_j - lo_j), t = tanh output of the sampler.
SampleBatch sample_adversarial(const BoundMlp& sampler, std::span<const double> z,
                               const Domain& domain);

/// Plain-double version (same arithmetic, no tape).
SampleBatch sample_adversarial(const Mlp& sampler, std::span<const double> z, const Domain& domain);

/// Baseline schemes. noise_std < 0 selects the default, half the grid
/// spacing per axis. For d = 2 the grid has ceil(sqrt(n)) points per axis,
/// row-major with the first coordinate varying slowest, truncated to n.
SampleBatch sample_baseline(Scheme scheme, int n, const Domain& domain, std::mt19937_64& rng,
                            double noise_std = -1.0);

/// Standard normal noise vector.
std::vector<double> draw_noise(int z_dim, std::mt19937_64& rng);

/// Neighbour lists of every point (indices only), from the current values.
std::vector<std::vector<std::size_t>> neighbor_sets(const KdTree& tree, int k);

/// D_k = -sum_i sum_{j in N_k(i)} sqrt(|x_i - x_j|^2 + eps) with fixed
/// neighbour sets. `coords` are row-major n x d.
template <class S>
S entropy_penalty(std::span<const S> coords, int d,
                  const std::vector<std::vector<std::size_t>>& neighbors, double eps) {
  using std::sqrt;
  std::vector<S> terms;
  std::vector<S> sq(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (std::size_t j : neighbors[i]) {
      for (int a = 0; a < d; ++a) sq[a] = square(coords[i * d + a] - coords[j * d + a]);
      S r2 = d == 1 ? sq[0] : sum(std::span<const S>(sq));
      terms.push_back(sqrt(r2 + eps));
    }
  }
  return -sum(std::span<const S>(terms));
}

/// D_k of a batch. Uses the tape nodes when present.
double entropy_penalty_value(const SampleBatch& batch, const KdTree& tree, int k, double eps);
Var entropy_penalty(const SampleBatch& batch, const KdTree& tree, int k, double eps);

/// Mean Euclidean distance over all unordered pairs.
double mean_pairwise_distance(std::span<const double> coords, int d);

}  // namespace advcol
