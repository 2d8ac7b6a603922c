#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "advcol/problems.hpp"

namespace oracle {

using namespace advcol;

// Closed forms written as jet expressions, so their derivatives come from the
// jet arithmetic rather than from hand-derived formulas.
inline Jet<double> analytic_jet(const Problem& p, const Jet<double>& x, const Jet<double>& y) {
  const auto& q = p.params;
  switch (p.kind) {
    case ProblemKind::exp_decay:
      return (exp(x * q.gamma) - 1.0) * (1.0 / q.gamma) + q.y0;
    case ProblemKind::logistic:
      return 1.0 / (exp(x * (-q.gamma * q.M)) * ((q.M - q.y0) / (q.y0 * q.M)) + 1.0 / q.M);
    case ProblemKind::hydrogen:
      if (q.n == 1) return x * exp(-x) * 2.0;
      return x * (1.0 - x * 0.5) * exp(x * -0.5) * (1.0 / std::numbers::sqrt2);
    case ProblemKind::laplace: {
      const double pi = std::numbers::pi;
      // sinh(pi (1 - x)) = (e^{pi (1-x)} - e^{-pi (1-x)}) / 2
      const Jet<double> s = (exp((1.0 - x) * pi) - exp((x - 1.0) * pi)) * 0.5;
      return sin(y * pi) * s * (1.0 / std::sinh(pi));
    }
    case ProblemKind::exp_decay_ode:
      return exp(x * -q.lambda) * q.y0;
  }
  return x;
}

inline double analytic_residual(const Problem& p, double x, double y = 0.0) {
  const int order = p.residual_order;
  std::vector<double> pt{x};
  if (p.dim() == 2) pt.push_back(y);
  std::vector<Jet<double>> u;
  u.push_back(analytic_jet(p, jet_lift(x, true, order), jet_lift(y, false, order)));
  if (p.dim() == 2) u.push_back(analytic_jet(p, jet_lift(x, false, order), jet_lift(y, true, order)));
  return residual<double>(p, pt, u);
}

}  // namespace oracle
