#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "advcol/jet.hpp"
#include "advcol/mlp.hpp"

namespace advcol {

struct Domain {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double width(int i) const { return hi[i] - lo[i]; }
  bool contains(std::span<const double> x) const;
};

enum class ProblemKind { exp_decay, logistic, hydrogen, laplace, exp_decay_ode };

/// How the trial solution is built from the raw network output.
///   ode_ic    y0 + (1 - exp(-(x - x0))) N(x)
///   h_atom    (1 - x/L) exp(-x/n) (s0 x + x^2 N(x))
///   pde_hard  (1 - x) g(y) + x (1 - x) y (1 - y) N(x, y)
///   pde_soft  N(x, y), boundary values penalised in the loss
enum class TrialMode { ode_ic, h_atom, pde_hard, pde_soft };

enum class LossType { mse, val };

std::string_view trial_mode_name(TrialMode m);
std::string_view loss_type_name(LossType t);
LossType parse_loss_type(std::string_view name);

enum class LaplaceBoundary {
  sin_pi_y,  // u(0, y) = sin(pi y); corners consistent, analytic solution known
  sin_y,     // u(0, y) = sin(y) as literally stated; inconsistent at (0, 1)
};

struct ProblemParams {
  double gamma = 0.0;   // exp_decay rate, logistic rate
  double M = 1.0;       // logistic carrying capacity
  int n = 1;            // hydrogen principal quantum number
  int l = 0;            // hydrogen angular quantum number
  double lambda = 0.0;  // exp_decay_ode rate
  double x0 = 0.0;
  double y0 = 0.0;
  double slope0 = 0.0;  // pinned initial slope of the hydrogen trial
  LaplaceBoundary boundary = LaplaceBoundary::sin_pi_y;
  double beta = 10.0;           // soft boundary penalty weight
  int boundary_points = 64;     // soft boundary points, split over the four edges
  bool normalize_inputs = false; // network sees coordinates mapped to [-1, 1]
  double x_floor = 0.0;         // residual points are clamped to x >= x_floor
};

struct Problem {
  std::string name;
  ProblemKind kind = ProblemKind::exp_decay;
  Domain domain;
  int residual_order = 1;
  TrialMode trial = TrialMode::ode_ic;
  LossType loss_type = LossType::mse;
  ProblemParams params;

  int dim() const { return domain.dim(); }
  bool has_analytic() const;
};

const std::vector<std::string>& problem_names();

/// Library problem by CLI name. Throws std::invalid_argument listing the
/// valid names when `name` is unknown.
Problem make_problem(std::string_view name);
/// Library problem with parameter overrides; unknown keys are rejected.
Problem make_problem(std::string_view name, const nlohmann::json& overrides);

/// Closed-form solution. Throws std::logic_error if the problem has none.
double analytic(const Problem& problem, std::span<const double> x);

/// Boundary data g(y) on the x = 0 edge of the Laplace problems.
template <class S>
S laplace_edge_value(const Problem& p, const S& y) {
  using std::sin;
  return p.params.boundary == LaplaceBoundary::sin_pi_y ? sin(std::numbers::pi * y) : sin(y);
}

/// Boundary value prescribed at a point of the unit square's boundary.
double laplace_boundary_value(const Problem& p, std::span<const double> x);

/// Fixed boundary points used by the soft-boundary penalty: equally many per
/// edge, at edge-segment midpoints (corners excluded). Row-major n x 2.
std::vector<double> soft_boundary_points(const Problem& p);

namespace problem_detail {
void check_trial_inputs(const Problem& p, std::size_t x_jets, int raw_order);
}

/// Builds the trial jet from the raw network jet. `x_jets[i]` is the jet of
/// coordinate i along the same direction as `raw`.
template <class S>
Jet<S> reparameterize(const Problem& p, std::span<const Jet<S>> x_jets, const Jet<S>& raw) {
  problem_detail::check_trial_inputs(p, x_jets.size(), raw.order());
  switch (p.trial) {
    case TrialMode::ode_ic: {
      const Jet<S>& x = x_jets[0];
      const Jet<S> shift = 1.0 - exp(-(x + (-p.params.x0)));
      return shift * raw + p.params.y0;
    }
    case TrialMode::h_atom: {
      const Jet<S>& x = x_jets[0];
      const double L = p.domain.hi[0];
      const Jet<S> decay = exp(x * (-1.0 / p.params.n)) * (1.0 - x * (1.0 / L));
      return decay * (x * p.params.slope0 + square(x) * raw);
    }
    case TrialMode::pde_hard: {
      const Jet<S>& x = x_jets[0];
      const Jet<S>& y = x_jets[1];
      const Jet<S> g = sin(y * std::numbers::pi);
      const Jet<S> one_minus_x = 1.0 - x;
      return one_minus_x * g + (x * one_minus_x) * (y * (1.0 - y)) * raw;
    }
    case TrialMode::pde_soft:
      return raw;
  }
  return raw;
}

/// Residual F of the equation at point x; u[r] is the trial jet along
/// coordinate direction r (all sharing coefficient 0).
template <class S>
S residual(const Problem& p, std::span<const S> x, std::span<const Jet<S>> u) {
  using std::exp;
  const auto& q = p.params;
  if (u.empty() || u[0].order() < p.residual_order)
    throw std::invalid_argument("residual: trial jet order too low");
  switch (p.kind) {
    case ProblemKind::exp_decay:
      return u[0][1] - exp(x[0] * q.gamma);
    case ProblemKind::logistic:
      return u[0][1] - q.gamma * (u[0][0] * (q.M - u[0][0]));
    case ProblemKind::hydrogen: {
      const S inv_x = 1.0 / x[0];
      S coef = (-2.0) * inv_x + 1.0 / (q.n * q.n);
      if (q.l != 0) coef = coef + (q.l * (q.l + 1.0)) * square(inv_x);
      return u[0][2] - coef * u[0][0];
    }
    case ProblemKind::laplace:
      if (u.size() != 2) throw std::invalid_argument("residual: laplace needs two directions");
      return u[0][2] + u[1][2];
    case ProblemKind::exp_decay_ode:
      return u[0][1] + q.lambda * u[0][0];
  }
  return u[0][0];
}

template <class S>
S pointwise_loss(const Problem& p, std::span<const S> x, std::span<const Jet<S>> u) {
  return square(residual(p, x, u));
}

/// Residual points are moved off singular edges (hydrogen: x >= x_floor).
template <class S>
S clamp_coordinate(const Problem& p, int axis, const S& x) {
  if (axis == 0 && p.params.x_floor > 0.0) return max_const(x, p.params.x_floor);
  return x;
}

/// Trial-solution jets at x along every coordinate direction, order `order`.
/// For S = Var the network parameters in `params` must be tape nodes; the
/// coordinates in x may be constants or nodes.
template <class S>
std::vector<Jet<S>> trial_jets(const Problem& p, const Mlp& net, std::span<const S> params,
                               std::span<const S> x, int order) {
  const int d = p.dim();
  if (static_cast<int>(x.size()) != d || net.input_dim() != d || net.output_dim() != 1)
    throw std::invalid_argument("trial_jets: dimension mismatch");
  const int dirs = order == 0 ? 1 : d;
  const S zero = constant_like(x[0], 0.0);

  JetStack<S> in;
  in.order = order;
  in.derivs.resize(dirs);
  for (int i = 0; i < d; ++i) {
    if (p.params.normalize_inputs) {
      const double scale = 2.0 / p.domain.width(i);
      const double shift = -1.0 - p.domain.lo[i] * scale;
      in.value.push_back(x[i] * scale + shift);
    } else {
      in.value.push_back(x[i]);
    }
  }
  std::vector<S> seeds(d);
  for (int i = 0; i < d; ++i)
    seeds[i] = constant_like(x[0], p.params.normalize_inputs ? 2.0 / p.domain.width(i) : 1.0);
  const S one = constant_like(x[0], 1.0);
  for (int r = 0; r < dirs && order > 0; ++r) {
    for (int k = 0; k < order; ++k) {
      in.derivs[r][k].assign(d, zero);
      if (k == 0) in.derivs[r][k][r] = seeds[r];
    }
  }
  const JetStack<S> out = forward_stack(net, params, std::move(in));

  std::vector<Jet<S>> u;
  u.reserve(dirs);
  std::vector<Jet<S>> x_jets(d);
  for (int r = 0; r < dirs; ++r) {
    Jet<S> raw(order);
    raw[0] = out.value[0];
    for (int k = 0; k < order; ++k) raw[k + 1] = out.derivs[r][k][0];
    for (int i = 0; i < d; ++i) {
      Jet<S> xj(order);
      xj[0] = x[i];
      for (int k = 1; k <= order; ++k) xj[k] = (k == 1 && i == r) ? one : zero;
      x_jets[i] = xj;
    }
    u.push_back(reparameterize<S>(p, x_jets, raw));
  }
  return u;
}

/// Trial value y-hat(x).
template <class S>
S trial_value(const Problem& p, const Mlp& net, std::span<const S> params, std::span<const S> x) {
  return trial_jets<S>(p, net, params, x, 0)[0][0];
}

inline double trial_value(const Problem& p, const Mlp& net, std::span<const double> x) {
  return trial_value<double>(p, net, net.params(), x);
}

/// Residual of the trial solution at x (after clamping x off singular edges).
template <class S>
S trial_residual(const Problem& p, const Mlp& net, std::span<const S> params,
                 std::span<const S> x) {
  std::vector<S> xc(x.begin(), x.end());
  for (int i = 0; i < p.dim(); ++i) xc[i] = clamp_coordinate(p, i, xc[i]);
  const auto u = trial_jets<S>(p, net, params, std::span<const S>(xc), p.residual_order);
  return residual<S>(p, xc, u);
}

inline double trial_residual(const Problem& p, const Mlp& net, std::span<const double> x) {
  return trial_residual<double>(p, net, net.params(), x);
}

/// Soft-boundary penalty beta * mean((y-hat - g)^2) over the fixed boundary
/// points; zero for hard trial modes.
template <class S>
S boundary_penalty(const Problem& p, const Mlp& net, std::span<const S> params, const S& like) {
  if (p.trial != TrialMode::pde_soft) return constant_like(like, 0.0);
  const auto pts = soft_boundary_points(p);
  const std::size_t m = pts.size() / 2;
  std::vector<S> terms;
  terms.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::array<S, 2> xb{constant_like(like, pts[2 * i]), constant_like(like, pts[2 * i + 1])};
    const S yhat = trial_value<S>(p, net, params, xb);
    const double g = laplace_boundary_value(p, std::span<const double>(pts).subspan(2 * i, 2));
    terms.push_back(square(yhat - g));
  }
  return sum(std::span<const S>(terms)) * (p.params.beta / static_cast<double>(m));
}

}  // namespace advcol
