#include "advcol/mlp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "advcol/adam.hpp"

namespace advcol {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::tanh: return "tanh";
    case Activation::sin: return "sin";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::identity;
  if (name == "tanh") return Activation::tanh;
  if (name == "sin") return Activation::sin;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (expected identity, tanh or sin)");
}

void MlpConfig::validate() const {
  if (layer_sizes.size() < 2) throw std::invalid_argument("mlp needs at least two layer sizes");
  for (int s : layer_sizes)
    if (s < 1) throw std::invalid_argument("mlp layer sizes must be positive");
}

Mlp::Mlp(MlpConfig config) : config_(std::move(config)) {
  config_.validate();
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < config_.layer_sizes.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(config_.layer_sizes[l] + 1) * config_.layer_sizes[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp init_mlp(const MlpConfig& config, std::uint64_t seed) {
  Mlp net(config);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const double bound = std::sqrt(6.0 / (net.fan_in(l) + net.fan_out(l)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (int i = 0; i < net.fan_out(l); ++i)
      for (int j = 0; j < net.fan_in(l); ++j) net.weight(l, i, j) = dist(rng);
  }
  return net;
}

BoundMlp bind(const Mlp& net, Tape& tape) {
  BoundMlp bound{&net, {}};
  bound.params.reserve(net.parameter_count());
  for (double p : net.params()) bound.params.push_back(Var::leaf(tape, p));
  return bound;
}

std::vector<double> parameter_gradient(const GradientMap& grads, const BoundMlp& bound) {
  std::vector<double> g(bound.params.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto node = bound.params[i].node();
    g[i] = node.index < grads.size() ? grads[node] : 0.0;
  }
  return g;
}

std::vector<Var> forward(const BoundMlp& net, std::span<const Var> inputs) {
  return forward<Var>(*net.net, net.params, inputs);
}

std::vector<TapeJet> forward_jet(const BoundMlp& net, std::span<const TapeJet> input_jets) {
  return forward_jet<Var>(*net.net, net.params, input_jets);
}

nlohmann::json to_json(const Mlp& net) {
  nlohmann::json doc;
  doc["layer_sizes"] = net.config().layer_sizes;
  auto acts = nlohmann::json::array();
  auto weights = nlohmann::json::array();
  auto biases = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    acts.push_back(std::string(activation_name(net.activation(l))));
    const auto p = net.params();
    const auto w0 = net.weight_offset(l);
    const auto b0 = net.bias_offset(l);
    weights.push_back(std::vector<double>(p.begin() + w0, p.begin() + b0));
    biases.push_back(std::vector<double>(p.begin() + b0, p.begin() + b0 + net.fan_out(l)));
  }
  doc["activations"] = acts;
  doc["weights"] = weights;
  doc["biases"] = biases;
  return doc;
}

Mlp mlp_from_json(const nlohmann::json& doc) {
  MlpConfig config;
  config.layer_sizes = doc.at("layer_sizes").get<std::vector<int>>();
  const auto acts = doc.at("activations").get<std::vector<std::string>>();
  if (acts.size() + 1 != config.layer_sizes.size())
    throw std::invalid_argument("activations: expected one entry per layer");
  config.output = parse_activation(acts.back());
  config.hidden = acts.size() > 1 ? parse_activation(acts.front()) : Activation::tanh;
  for (std::size_t l = 0; l + 1 < acts.size(); ++l)
    if (parse_activation(acts[l]) != config.hidden)
      throw std::invalid_argument("activations: hidden layers must share one activation");
  Mlp net(config);
  const auto& weights = doc.at("weights");
  const auto& biases = doc.at("biases");
  if (weights.size() != net.layer_count() || biases.size() != net.layer_count())
    throw std::invalid_argument("weights/biases: expected one entry per layer");
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const auto w = weights[l].get<std::vector<double>>();
    const auto b = biases[l].get<std::vector<double>>();
    if (w.size() != static_cast<std::size_t>(net.fan_in(l)) * net.fan_out(l) ||
        b.size() != static_cast<std::size_t>(net.fan_out(l))) {
      std::ostringstream msg;
      msg << "layer " << l << ": parameter shape mismatch";
      throw std::invalid_argument(msg.str());
    }
    std::copy(w.begin(), w.end(), net.params().begin() + net.weight_offset(l));
    std::copy(b.begin(), b.end(), net.params().begin() + net.bias_offset(l));
  }
  for (double p : net.params())
    if (!std::isfinite(p)) throw std::invalid_argument("non-finite parameter in network file");
  return net;
}

void adam_step(Mlp& net, AdamState& state, std::span<const double> grads) {
  auto params = net.params();
  if (grads.size() != params.size() || state.m.size() != params.size())
    throw std::invalid_argument("adam_step: gradient/state size does not match the network");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      std::ostringstream msg;
      msg << "non-finite gradient " << grads[i] << " for parameter " << i;
      throw NonFiniteGradient(msg.str(), i);
    }
  }
  const auto& c = state.config;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace advcol
