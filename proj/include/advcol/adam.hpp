#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "advcol/mlp.hpp"

namespace advcol {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Raised by adam_step when a gradient entry is NaN or infinite; the step
/// is not applied.
class NonFiniteGradient : public std::runtime_error {
 public:
  NonFiniteGradient(const std::string& what, std::size_t parameter)
      : std::runtime_error(what), parameter_(parameter) {}
  std::size_t parameter() const noexcept { return parameter_; }

 private:
  std::size_t parameter_;
};

struct AdamState {
  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;

  AdamState() = default;
  AdamState(const Mlp& net, AdamConfig cfg)
      : config(cfg), m(net.parameter_count(), 0.0), v(net.parameter_count(), 0.0) {}
};

/// One bias-corrected Adam update of every parameter of `net`.
void adam_step(Mlp& net, AdamState& state, std::span<const double> grads);

}  // namespace advcol
