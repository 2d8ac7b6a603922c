#include "advcol/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace advcol {

bool Domain::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!(x[i] >= lo[i] && x[i] <= hi[i])) return false;
  return true;
}

std::string_view trial_mode_name(TrialMode m) {
  switch (m) {
    case TrialMode::ode_ic: return "ode-ic";
    case TrialMode::h_atom: return "h-atom";
    case TrialMode::pde_hard: return "pde-hard";
    case TrialMode::pde_soft: return "pde-soft";
  }
  return "ode-ic";
}

std::string_view loss_type_name(LossType t) { return t == LossType::mse ? "MSE" : "VAL"; }

LossType parse_loss_type(std::string_view name) {
  if (name == "MSE" || name == "mse") return LossType::mse;
  if (name == "VAL" || name == "val") return LossType::val;
  throw std::invalid_argument("unknown loss type '" + std::string(name) + "' (expected MSE or VAL)");
}

namespace {

TrialMode parse_trial_mode(std::string_view name) {
  for (auto m : {TrialMode::ode_ic, TrialMode::h_atom, TrialMode::pde_hard, TrialMode::pde_soft})
    if (trial_mode_name(m) == name) return m;
  throw std::invalid_argument("unknown trial mode '" + std::string(name) + "'");
}

// Normalised radial functions u = r R_n0(r) have u'(0) = 2 / n^(3/2).
double hydrogen_slope(int n) { return 2.0 / std::pow(static_cast<double>(n), 1.5); }

void validate(const Problem& p) {
  const auto& q = p.params;
  for (int i = 0; i < p.dim(); ++i)
    if (!(p.domain.lo[i] < p.domain.hi[i]))
      throw std::invalid_argument(p.name + ": domain bounds must satisfy lo < hi");
  switch (p.trial) {
    case TrialMode::ode_ic:
    case TrialMode::h_atom:
      if (p.dim() != 1) throw std::invalid_argument(p.name + ": trial mode needs a 1-D problem");
      break;
    case TrialMode::pde_hard:
    case TrialMode::pde_soft:
      if (p.dim() != 2) throw std::invalid_argument(p.name + ": trial mode needs a 2-D problem");
      break;
  }
  if (p.trial == TrialMode::h_atom && p.kind != ProblemKind::hydrogen)
    throw std::invalid_argument(p.name + ": h-atom trial applies to the hydrogen problems only");
  if (p.kind == ProblemKind::hydrogen && p.trial != TrialMode::h_atom)
    throw std::invalid_argument(p.name + ": hydrogen problems use the h-atom trial");
  if (p.trial == TrialMode::pde_hard) {
    if (q.boundary != LaplaceBoundary::sin_pi_y)
      throw std::invalid_argument(
          p.name + ": boundary sin(y) is inconsistent at corner (0,1); use trial pde-soft");
    if (p.domain.lo != std::vector<double>{0.0, 0.0} || p.domain.hi != std::vector<double>{1.0, 1.0})
      throw std::invalid_argument(p.name + ": pde-hard ansatz assumes the unit square");
  }
  if (p.trial == TrialMode::pde_soft && q.boundary_points < 4)
    throw std::invalid_argument(p.name + ": boundary_points must be at least 4");
  if (p.kind == ProblemKind::hydrogen) {
    if (q.n < 1 || q.l < 0 || q.l >= q.n)
      throw std::invalid_argument(p.name + ": need n >= 1 and 0 <= l < n");
    if (p.domain.lo[0] != 0.0)
      throw std::invalid_argument(p.name + ": h-atom trial assumes the domain starts at 0");
  }
  if (p.kind == ProblemKind::logistic && (q.y0 == 0.0))
    throw std::invalid_argument(p.name + ": logistic initial value must be non-zero");
  if (p.kind == ProblemKind::exp_decay && q.gamma == 0.0)
    throw std::invalid_argument(p.name + ": gamma must be non-zero");
}

}  // namespace

bool Problem::has_analytic() const {
  switch (kind) {
    case ProblemKind::laplace:
      return params.boundary == LaplaceBoundary::sin_pi_y;
    case ProblemKind::hydrogen:
      return params.l == 0 && (params.n == 1 || params.n == 2);
    default:
      return true;
  }
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"expdecay", "logistic", "hatom-n1",
                                              "hatom-n2", "laplace",  "expdecay-ode"};
  return names;
}

Problem make_problem(std::string_view name) { return make_problem(name, nlohmann::json::object()); }

Problem make_problem(std::string_view name, const nlohmann::json& overrides) {
  Problem p;
  p.name = std::string(name);
  auto& q = p.params;
  if (name == "expdecay") {
    p.kind = ProblemKind::exp_decay;
    p.domain = {{0.0}, {30.0}};
    q.gamma = -5.0;
    q.y0 = 0.1;
  } else if (name == "logistic") {
    p.kind = ProblemKind::logistic;
    p.domain = {{0.0}, {10.0}};
    q.gamma = -1.0;
    q.M = 1.0;
    q.y0 = 0.7;
  } else if (name == "hatom-n1" || name == "hatom-n2") {
    p.kind = ProblemKind::hydrogen;
    p.domain = {{0.0}, {30.0}};
    p.residual_order = 2;
    p.trial = TrialMode::h_atom;
    q.n = name == "hatom-n1" ? 1 : 2;
    q.l = 0;
    q.x_floor = 1e-3;
  } else if (name == "laplace") {
    p.kind = ProblemKind::laplace;
    p.domain = {{0.0, 0.0}, {1.0, 1.0}};
    p.residual_order = 2;
    p.trial = TrialMode::pde_hard;
    p.loss_type = LossType::val;
  } else if (name == "expdecay-ode") {
    p.kind = ProblemKind::exp_decay_ode;
    p.domain = {{0.0}, {3.0}};
    q.lambda = 5.0;
    q.y0 = 1.0;
  } else {
    std::ostringstream msg;
    msg << "unknown problem '" << name << "'; valid names:";
    for (const auto& n : problem_names()) msg << ' ' << n;
    throw std::invalid_argument(msg.str());
  }

  if (!overrides.is_null() && !overrides.is_object())
    throw std::invalid_argument("problem overrides must be a JSON object");
  bool slope_given = false;
  for (const auto& [key, value] : overrides.items()) {
    if (key == "gamma") q.gamma = value.get<double>();
    else if (key == "M") q.M = value.get<double>();
    else if (key == "n") q.n = value.get<int>();
    else if (key == "l") q.l = value.get<int>();
    else if (key == "lambda") q.lambda = value.get<double>();
    else if (key == "x0") q.x0 = value.get<double>();
    else if (key == "y0") q.y0 = value.get<double>();
    else if (key == "slope0") { q.slope0 = value.get<double>(); slope_given = true; }
    else if (key == "beta") q.beta = value.get<double>();
    else if (key == "boundary_points") q.boundary_points = value.get<int>();
    else if (key == "normalize_inputs") q.normalize_inputs = value.get<bool>();
    else if (key == "x_floor") q.x_floor = value.get<double>();
    else if (key == "domain_lo") p.domain.lo = value.get<std::vector<double>>();
    else if (key == "domain_hi") p.domain.hi = value.get<std::vector<double>>();
    else if (key == "trial") p.trial = parse_trial_mode(value.get<std::string>());
    else if (key == "loss_type") p.loss_type = parse_loss_type(value.get<std::string>());
    else if (key == "boundary") {
      const auto b = value.get<std::string>();
      if (b == "sin-pi-y") q.boundary = LaplaceBoundary::sin_pi_y;
      else if (b == "sin-y") q.boundary = LaplaceBoundary::sin_y;
      else throw std::invalid_argument("boundary must be sin-pi-y or sin-y");
    } else {
      throw std::invalid_argument("unknown problem parameter '" + key + "'");
    }
  }
  if (p.domain.lo.size() != p.domain.hi.size() ||
      p.domain.lo.size() != (p.kind == ProblemKind::laplace ? 2u : 1u))
    throw std::invalid_argument(p.name + ": domain has the wrong dimension");
  if (p.kind == ProblemKind::laplace && q.boundary == LaplaceBoundary::sin_y &&
      !overrides.contains("trial"))
    p.trial = TrialMode::pde_soft;
  if (p.kind == ProblemKind::hydrogen && !slope_given) q.slope0 = hydrogen_slope(q.n);
  validate(p);
  return p;
}

double analytic(const Problem& p, std::span<const double> x) {
  if (!p.has_analytic()) throw std::logic_error(p.name + ": no analytic solution available");
  const auto& q = p.params;
  switch (p.kind) {
    case ProblemKind::exp_decay:
      return q.y0 + (std::exp(q.gamma * x[0]) - std::exp(q.gamma * q.x0)) / q.gamma;
    case ProblemKind::logistic:
      return q.M / (1.0 + (q.M - q.y0) / q.y0 * std::exp(-q.gamma * q.M * (x[0] - q.x0)));
    case ProblemKind::hydrogen: {
      const double r = x[0];
      if (q.n == 1) return 2.0 * r * std::exp(-r);
      return r * (1.0 - r / 2.0) * std::exp(-r / 2.0) / std::numbers::sqrt2;
    }
    case ProblemKind::laplace:
      return std::sin(std::numbers::pi * x[1]) * std::sinh(std::numbers::pi * (1.0 - x[0])) /
             std::sinh(std::numbers::pi);
    case ProblemKind::exp_decay_ode:
      return q.y0 * std::exp(-q.lambda * (x[0] - q.x0));
  }
  return 0.0;
}

double laplace_boundary_value(const Problem& p, std::span<const double> x) {
  if (x[0] == p.domain.lo[0]) return laplace_edge_value(p, x[1]);
  return 0.0;
}

std::vector<double> soft_boundary_points(const Problem& p) {
  const int per_edge = p.params.boundary_points / 4;
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(per_edge) * 8);
  const double lx = p.domain.lo[0], hx = p.domain.hi[0];
  const double ly = p.domain.lo[1], hy = p.domain.hi[1];
  for (int j = 0; j < per_edge; ++j) {
    const double t = (j + 0.5) / per_edge;
    const double y = ly + t * (hy - ly);
    const double x = lx + t * (hx - lx);
    pts.insert(pts.end(), {lx, y});
    pts.insert(pts.end(), {hx, y});
    pts.insert(pts.end(), {x, ly});
    pts.insert(pts.end(), {x, hy});
  }
  return pts;
}

namespace problem_detail {
void check_trial_inputs(const Problem& p, std::size_t x_jets, int raw_order) {
  if (static_cast<int>(x_jets) != p.dim())
    throw std::invalid_argument(p.name + ": expected one coordinate jet per dimension");
  if (raw_order < 0) throw std::invalid_argument("negative jet order");
}
}  // namespace problem_detail

}  // namespace advcol
