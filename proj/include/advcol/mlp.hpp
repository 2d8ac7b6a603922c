#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advcol/jet.hpp"
#include "advcol/var.hpp"

namespace advcol {

enum class Activation { identity, tanh, sin };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct MlpConfig {
  std::vector<int> layer_sizes;  // input, hidden..., output
  Activation hidden = Activation::tanh;
  Activation output = Activation::identity;

  void validate() const;
};

/// Fully connected network. Parameters live in one flat vector, layer by
/// layer: weights (row-major, out x in) followed by biases.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(MlpConfig config);

  const MlpConfig& config() const { return config_; }
  int input_dim() const { return config_.layer_sizes.front(); }
  int output_dim() const { return config_.layer_sizes.back(); }
  std::size_t layer_count() const { return config_.layer_sizes.size() - 1; }
  int fan_in(std::size_t layer) const { return config_.layer_sizes[layer]; }
  int fan_out(std::size_t layer) const { return config_.layer_sizes[layer + 1]; }
  Activation activation(std::size_t layer) const {
    return layer + 1 == layer_count() ? config_.output : config_.hidden;
  }

  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + static_cast<std::size_t>(fan_in(layer)) * fan_out(layer);
  }
  double& weight(std::size_t layer, int row, int col) {
    return params_[weight_offset(layer) + static_cast<std::size_t>(row) * fan_in(layer) + col];
  }
  double weight(std::size_t layer, int row, int col) const {
    return params_[weight_offset(layer) + static_cast<std::size_t>(row) * fan_in(layer) + col];
  }
  double& bias(std::size_t layer, int row) { return params_[bias_offset(layer) + row]; }
  double bias(std::size_t layer, int row) const { return params_[bias_offset(layer) + row]; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  friend bool operator==(const Mlp& a, const Mlp& b) {
    return a.params_ == b.params_ && a.config_.layer_sizes == b.config_.layer_sizes &&
           a.config_.hidden == b.config_.hidden && a.config_.output == b.config_.output;
  }

 private:
  MlpConfig config_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

/// Glorot-uniform weights, zero biases; a pure function of (config, seed).
Mlp init_mlp(const MlpConfig& config, std::uint64_t seed);

/// Parameters of a network entered on a tape as leaf nodes.
struct BoundMlp {
  const Mlp* net = nullptr;
  std::vector<Var> params;
};

BoundMlp bind(const Mlp& net, Tape& tape);

/// Gradient entries of the bound parameters, in Mlp::params() order.
std::vector<double> parameter_gradient(const GradientMap& grads, const BoundMlp& bound);

/// Layer activations carried through the network: values plus, for each
/// direction, derivatives of order 1..order.
template <class S>
struct JetStack {
  int order = 0;
  std::vector<S> value;
  std::vector<std::array<std::vector<S>, kMaxJetOrder>> derivs;  // [direction][k-1][unit]
};

namespace mlp_detail {

template <class S>
S activate(Activation a, const S& x) {
  using std::sin;
  using std::tanh;
  switch (a) {
    case Activation::identity: return x;
    case Activation::tanh: return tanh(x);
    case Activation::sin: return sin(x);
  }
  return x;
}

// Derivatives f', f'', f''' of the activation at its input, given the
// activation value y = f(x).
template <class S>
std::array<S, kMaxJetOrder> activation_derivs(Activation a, const S& x, const S& y, int order) {
  using std::cos;
  std::array<S, kMaxJetOrder> df{};
  switch (a) {
    case Activation::identity:
      break;
    case Activation::tanh: {
      const S y2 = square(y);
      df[0] = 1.0 - y2;
      if (order >= 2) df[1] = -2.0 * (y * df[0]);
      if (order >= 3) df[2] = df[0] * (6.0 * y2 - 2.0);
      break;
    }
    case Activation::sin: {
      const S c = cos(x);
      df = {c, -y, -c};
      break;
    }
  }
  return df;
}

template <class S>
std::span<const S> row(std::span<const S> params, std::size_t offset, int width) {
  return params.subspan(offset, static_cast<std::size_t>(width));
}

}  // namespace mlp_detail

/// Propagates values and directional derivatives through `net`, whose
/// parameters (possibly tape leaves) are given in `params`.
template <class S>
JetStack<S> forward_stack(const Mlp& net, std::span<const S> params, JetStack<S> in) {
  using namespace mlp_detail;
  const int order = in.order;
  const std::size_t dirs = in.derivs.size();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const int n_in = net.fan_in(l);
    const int n_out = net.fan_out(l);
    const Activation act = net.activation(l);
    if (static_cast<int>(in.value.size()) != n_in)
      throw std::invalid_argument("forward: input size does not match layer width");

    JetStack<S> out;
    out.order = order;
    out.value.resize(n_out);
    out.derivs.resize(dirs);
    for (auto& d : out.derivs)
      for (int k = 0; k < order; ++k) d[k].resize(n_out);

    for (int i = 0; i < n_out; ++i) {
      const auto w = row(params, net.weight_offset(l) + static_cast<std::size_t>(i) * n_in, n_in);
      const S& b = params[net.bias_offset(l) + i];
      const S z = dot(w, std::span<const S>(in.value), b);
      if (act == Activation::identity) {
        out.value[i] = z;
        for (std::size_t r = 0; r < dirs; ++r)
          for (int k = 0; k < order; ++k) out.derivs[r][k][i] = dot(w, std::span<const S>(in.derivs[r][k]));
        continue;
      }
      const S y = activate(act, z);
      out.value[i] = y;
      if (order == 0) continue;
      const auto df = activation_derivs(act, z, y, order);
      for (std::size_t r = 0; r < dirs; ++r) {
        Jet<S> zj(order);
        zj[0] = z;
        for (int k = 0; k < order; ++k) zj[k + 1] = dot(w, std::span<const S>(in.derivs[r][k]));
        const Jet<S> yj = jet_detail::compose(zj, y, df);
        for (int k = 0; k < order; ++k) out.derivs[r][k][i] = yj[k + 1];
      }
    }
    in = std::move(out);
  }
  return in;
}

/// Plain forward evaluation.
template <class S>
std::vector<S> forward(const Mlp& net, std::span<const S> params, std::span<const S> inputs) {
  if (static_cast<int>(inputs.size()) != net.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  JetStack<S> in;
  in.value.assign(inputs.begin(), inputs.end());
  return forward_stack(net, params, std::move(in)).value;
}

inline std::vector<double> forward(const Mlp& net, std::span<const double> inputs) {
  return forward<double>(net, net.params(), inputs);
}

std::vector<Var> forward(const BoundMlp& net, std::span<const Var> inputs);

/// Single-direction jets: input_jets[i] is the jet of input i along one
/// common direction. Returns one jet per network output.
template <class S>
std::vector<Jet<S>> forward_jet(const Mlp& net, std::span<const S> params,
                                std::span<const Jet<S>> input_jets) {
  if (static_cast<int>(input_jets.size()) != net.input_dim())
    throw std::invalid_argument("forward_jet: input dimension mismatch");
  const int order = input_jets.front().order();
  JetStack<S> in;
  in.order = order;
  in.derivs.resize(1);
  for (const auto& j : input_jets) {
    if (j.order() != order) throw std::invalid_argument("forward_jet: input jet orders differ");
    in.value.push_back(j[0]);
    for (int k = 0; k < order; ++k) in.derivs[0][k].push_back(j[k + 1]);
  }
  const JetStack<S> out = forward_stack(net, params, std::move(in));
  std::vector<Jet<S>> result;
  for (int i = 0; i < net.output_dim(); ++i) {
    Jet<S> j(order);
    j[0] = out.value[i];
    for (int k = 0; k < order; ++k) j[k + 1] = out.derivs[0][k][i];
    result.push_back(j);
  }
  return result;
}

std::vector<TapeJet> forward_jet(const BoundMlp& net, std::span<const TapeJet> input_jets);

/// Row-major JSON: {"layer_sizes", "activations", "weights", "biases"}.
nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& doc);

}  // namespace advcol
