#include "advcol/sampling.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace advcol {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::adversarial: return "adversarial";
    case Scheme::uniform: return "uniform";
    case Scheme::linspace: return "linspace";
    case Scheme::noisy_linspace: return "noisy-linspace";
  }
  return "uniform";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::adversarial, Scheme::uniform, Scheme::linspace, Scheme::noisy_linspace})
    if (scheme_name(s) == name) return s;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "'; valid schemes: adversarial uniform linspace noisy-linspace");
}

void SamplerConfig::validate() const {
  if (n < 2) throw std::invalid_argument("sampler: need at least 2 points");
  if (k < 1 || k > n - 1) throw std::invalid_argument("sampler: k must satisfy 1 <= k <= n - 1");
  if (lambda < 0.0) throw std::invalid_argument("sampler: lambda must be non-negative");
  if (z_dim < 1 || d < 1) throw std::invalid_argument("sampler: z_dim and d must be positive");
  if (eps_dist < 0.0) throw std::invalid_argument("sampler: eps_dist must be non-negative");
}

MlpConfig SamplerConfig::network() const {
  MlpConfig c;
  c.layer_sizes.push_back(z_dim);
  for (int h : hidden) c.layer_sizes.push_back(h);
  c.layer_sizes.push_back(n * d);
  c.hidden = activation;
  c.output = Activation::tanh;
  return c;
}

namespace {

void check_sampler(const Mlp& net, std::size_t z, const Domain& domain) {
  if (static_cast<int>(z) != net.input_dim())
    throw std::invalid_argument("sample_adversarial: noise size does not match sampler input");
  if (net.output_dim() % domain.dim() != 0)
    throw std::invalid_argument("sample_adversarial: sampler output is not a multiple of d");
  if (net.config().output != Activation::tanh)
    throw std::invalid_argument("sample_adversarial: sampler needs a tanh output layer");
}

template <class S>
S rescale(const S& t, double lo, double hi) {
  return (t + 1.0) * (0.5 * (hi - lo)) + lo;
}

}  // namespace

SampleBatch sample_adversarial(const BoundMlp& sampler, std::span<const double> z,
                               const Domain& domain) {
  check_sampler(*sampler.net, z.size(), domain);
  Tape& tape = sampler.params.front().tape();
  std::vector<Var> zin;
  zin.reserve(z.size());
  for (double v : z) zin.push_back(Var::leaf(tape, v));
  const auto t = forward(sampler, zin);
  SampleBatch b;
  b.d = domain.dim();
  b.n = static_cast<int>(t.size()) / b.d;
  b.scheme = Scheme::adversarial;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int axis = static_cast<int>(i % b.d);
    Var x = rescale(t[i], domain.lo[axis], domain.hi[axis]);
    // tanh may round to exactly +-1; keep the rescaled value inside the box
    const double v = std::clamp(x.value(), domain.lo[axis], domain.hi[axis]);
    if (v != x.value()) x = x + (v - x.value());
    b.nodes.push_back(x);
    b.coords.push_back(x.value());
  }
  return b;
}

SampleBatch sample_adversarial(const Mlp& sampler, std::span<const double> z,
                               const Domain& domain) {
  check_sampler(sampler, z.size(), domain);
  const auto t = forward(sampler, z);
  SampleBatch b;
  b.d = domain.dim();
  b.n = static_cast<int>(t.size()) / b.d;
  b.scheme = Scheme::adversarial;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const int axis = static_cast<int>(i % b.d);
    b.coords.push_back(
        std::clamp(rescale(t[i], domain.lo[axis], domain.hi[axis]), domain.lo[axis], domain.hi[axis]));
  }
  return b;
}

SampleBatch sample_baseline(Scheme scheme, int n, const Domain& domain, std::mt19937_64& rng,
                            double noise_std) {
  if (n < 2) throw std::invalid_argument("sample_baseline: need at least 2 points");
  if (scheme == Scheme::adversarial)
    throw std::invalid_argument("sample_baseline: adversarial is not a baseline scheme");
  const int d = domain.dim();
  SampleBatch b;
  b.n = n;
  b.d = d;
  b.scheme = scheme;
  b.coords.reserve(static_cast<std::size_t>(n) * d);

  if (scheme == Scheme::uniform) {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a) {
        std::uniform_real_distribution<double> u(domain.lo[a], domain.hi[a]);
        b.coords.push_back(u(rng));
      }
    return b;
  }

  int per_axis = n;
  if (d == 2) {
    per_axis = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    while (per_axis * per_axis < n) ++per_axis;
  } else if (d != 1) {
    throw std::invalid_argument("sample_baseline: grid schemes support d <= 2");
  }
  auto grid = [&](int a, int j) {
    return domain.lo[a] + domain.width(a) * j / static_cast<double>(per_axis - 1);
  };
  for (int i = 0; i < n; ++i) {
    if (d == 1) {
      b.coords.push_back(i == n - 1 ? domain.hi[0] : grid(0, i));
    } else {
      const int r = i / per_axis;
      const int c = i % per_axis;
      b.coords.push_back(r == per_axis - 1 ? domain.hi[0] : grid(0, r));
      b.coords.push_back(c == per_axis - 1 ? domain.hi[1] : grid(1, c));
    }
  }
  if (scheme == Scheme::noisy_linspace) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < b.coords.size(); ++i) {
      const int a = static_cast<int>(i % d);
      const double sigma =
          noise_std >= 0.0 ? noise_std : 0.5 * domain.width(a) / static_cast<double>(per_axis - 1);
      const double noise = normal(rng);
      if (sigma > 0.0)
        b.coords[i] = std::clamp(b.coords[i] + sigma * noise, domain.lo[a], domain.hi[a]);
    }
  }
  return b;
}

std::vector<double> draw_noise(int z_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(static_cast<std::size_t>(z_dim));
  for (auto& v : z) v = normal(rng);
  return z;
}

std::vector<std::vector<std::size_t>> neighbor_sets(const KdTree& tree, int k) {
  std::vector<std::vector<std::size_t>> out(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i)
    for (const auto& nb : tree.knn_query(i, k)) out[i].push_back(nb.index);
  return out;
}

double entropy_penalty_value(const SampleBatch& batch, const KdTree& tree, int k, double eps) {
  return entropy_penalty<double>(batch.coords, batch.d, neighbor_sets(tree, k), eps);
}

Var entropy_penalty(const SampleBatch& batch, const KdTree& tree, int k, double eps) {
  if (batch.nodes.size() != batch.coords.size())
    throw std::invalid_argument("entropy_penalty: batch coordinates are not tape nodes");
  return entropy_penalty<Var>(batch.nodes, batch.d, neighbor_sets(tree, k), eps);
}

double mean_pairwise_distance(std::span<const double> coords, int d) {
  const std::size_t n = coords.size() / d;
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += square(coords[i * d + a] - coords[j * d + a]);
      total += std::sqrt(s);
    }
  return total / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace advcol
