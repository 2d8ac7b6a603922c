#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "advcol/metrics.hpp"
#include "advcol/problems.hpp"
#include "analytic_jets.hpp"
#include "oracles.hpp"

using namespace advcol;
using oracle::analytic_jet;
using oracle::analytic_residual;

namespace {

Mlp random_solver(int d, std::uint64_t seed) {
  MlpConfig c;
  c.layer_sizes = {d, 16, 16, 1};
  return init_mlp(c, seed);
}

}  // namespace

TEST_CASE("problem library names") {
  CHECK(problem_names().size() == 6);
  for (const auto& n : problem_names()) CHECK(make_problem(n).name == n);
  try {
    make_problem("burgers");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("hatom-n2") != std::string::npos);
  }
  CHECK_THROWS_AS(make_problem("logistic", {{"kappa", 1.0}}), std::invalid_argument);
  CHECK(make_problem("logistic", {{"y0", 0.5}}).params.y0 == 0.5);
}

TEST_CASE("laplace boundary variants") {
  const Problem hard = make_problem("laplace");
  CHECK(hard.trial == TrialMode::pde_hard);
  CHECK(hard.has_analytic());
  CHECK(hard.loss_type == LossType::val);
  const Problem soft = make_problem("laplace", {{"boundary", "sin-y"}});
  CHECK(soft.trial == TrialMode::pde_soft);
  CHECK_FALSE(soft.has_analytic());
  const double x[] = {0.5, 0.5};
  CHECK_THROWS_AS(analytic(soft, x), std::logic_error);
  const auto pts = soft_boundary_points(soft);
  CHECK(pts.size() == 2 * 64);
  for (std::size_t i = 0; i < pts.size(); i += 2) {
    const bool on_edge = pts[i] == 0.0 || pts[i] == 1.0 || pts[i + 1] == 0.0 || pts[i + 1] == 1.0;
    CHECK(on_edge);
  }
}

TEST_CASE("analytic values at the initial point") {
  const double zero[] = {0.0};
  CHECK(analytic(make_problem("expdecay"), zero) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(analytic(make_problem("logistic"), zero) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(analytic(make_problem("expdecay-ode"), zero) == 1.0);
}

TEST_CASE("analytic solutions satisfy their equations on a 256-point grid") {
  for (const auto& name : problem_names()) {
    const Problem p = make_problem(name);
    CAPTURE(name);
    if (p.dim() == 1) {
      // hydrogen: the residual carries 1/x, so start just off the origin
      const double lo = p.kind == ProblemKind::hydrogen ? 1e-3 : p.domain.lo[0];
      double worst = 0.0;
      for (double x : linspace(lo, p.domain.hi[0], 256))
        worst = std::max(worst, std::abs(analytic_residual(p, x)));
      CHECK(worst < 1e-8);
    } else {
      double worst = 0.0;
      for (double x : linspace(0.0, 1.0, 32))
        for (double y : linspace(0.0, 1.0, 32))
          worst = std::max(worst, std::abs(analytic_residual(p, x, y)));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("analytic jets agree with the library closed forms") {
  for (const auto& name : problem_names()) {
    const Problem p = make_problem(name);
    for (double t : linspace(0.0, 1.0, 17)) {
      std::vector<double> x{p.domain.lo[0] + t * p.domain.width(0)};
      if (p.dim() == 2) x.push_back(1.0 - t);
      const double y = p.dim() == 2 ? x[1] : 0.0;
      CHECK(analytic(p, x) ==
            doctest::Approx(analytic_jet(p, jet_lift(x[0], false, 0), jet_lift(y, false, 0))[0])
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("first-order analytic solutions agree with a numeric integrator") {
  const Problem logistic = make_problem("logistic");
  const auto& q = logistic.params;
  auto f = [&](double, double u) { return q.gamma * u * (q.M - u); };
  for (double x1 : {1.0, 2.5, 5.0, 10.0}) {
    const double x[] = {x1};
    CHECK(oracle::rk4(f, 0.0, q.y0, x1, 20000) == doctest::Approx(analytic(logistic, x)).epsilon(1e-10));
  }
  const Problem ode = make_problem("expdecay-ode");
  auto g = [&](double, double u) { return -ode.params.lambda * u; };
  const double x3[] = {3.0};
  CHECK(oracle::rk4(g, 0.0, 1.0, 3.0, 20000) == doctest::Approx(analytic(ode, x3)).epsilon(1e-10));
  const Problem ed = make_problem("expdecay");
  auto h = [&](double x, double) { return std::exp(ed.params.gamma * x); };
  const double x2[] = {2.0};
  CHECK(oracle::rk4(h, 0.0, 0.1, 2.0, 20000) == doctest::Approx(analytic(ed, x2)).epsilon(1e-10));
}

TEST_CASE("hand-set trial jets give zero residual") {
  const Problem ed = make_problem("expdecay");
  const double x = 0.37;
  Jet<double> u(1);
  u[0] = 0.3;
  u[1] = std::exp(ed.params.gamma * x);
  const double xs[] = {x};
  CHECK(residual<double>(ed, xs, std::span(&u, 1)) == 0.0);

  const Problem lap = make_problem("laplace");
  const double pt[] = {0.3, 0.8};
  const Jet<double> ux[] = {jet_lift(0.3, true, 2), jet_lift(0.3, false, 2)};
  CHECK(residual<double>(lap, pt, ux) == 0.0);
  CHECK(pointwise_loss<double>(lap, pt, ux) == 0.0);
}

TEST_CASE("analytic solution has negligible pointwise loss") {
  for (const char* name : {"expdecay", "logistic", "expdecay-ode", "hatom-n1", "hatom-n2"}) {
    const Problem p = make_problem(name);
    const double x = p.domain.lo[0] + 0.3 * p.domain.width(0);
    const std::vector<double> xs{x};
    const std::vector<Jet<double>> u{analytic_jet(p, jet_lift(x, true, p.residual_order), {})};
    CHECK(pointwise_loss<double>(p, xs, u) < 1e-16);
  }
}

TEST_CASE("residual reports the singular point of the hydrogen equation") {
  const Problem p = make_problem("hatom-n1");
  Tape t;
  const std::vector<Var> x{Var::leaf(t, 0.0)};
  const std::vector<TapeJet> u{jet_lift(t, 0.0, true, 2)};
  CHECK_THROWS_AS(residual<Var>(p, x, u), DomainError);
  // the training path clamps the coordinate and stays finite
  const Mlp net = random_solver(1, 3);
  const double zero[] = {0.0};
  CHECK(std::isfinite(trial_residual(p, net, zero)));
}

TEST_CASE("trial constructions hold for random networks") {
  for (const char* name : {"expdecay", "logistic", "expdecay-ode"}) {
    const Problem p = make_problem(name);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Mlp net = random_solver(1, s);
      const double x0[] = {p.params.x0};
      CHECK(std::abs(trial_value(p, net, x0) - p.params.y0) < 1e-12);
    }
  }
  for (const char* name : {"hatom-n1", "hatom-n2"}) {
    const Problem p = make_problem(name);
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Mlp net = random_solver(1, s);
      const double zero[] = {0.0};
      const double end[] = {30.0};
      CHECK(trial_value(p, net, zero) == 0.0);
      CHECK(std::abs(trial_value(p, net, end)) < 1e-8);
    }
  }
  const Problem lap = make_problem("laplace");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Mlp net = random_solver(2, s);
    const double t = u(rng);
    const std::vector<std::vector<double>> pts{{0.0, t}, {1.0, t}, {t, 0.0}, {t, 1.0}};
    for (const auto& pt : pts) {
      const double expected = pt[0] == 0.0 ? std::sin(std::numbers::pi * pt[1]) : 0.0;
      CHECK(std::abs(trial_value(lap, net, pt) - expected) < 1e-12);
      CHECK(std::abs(laplace_boundary_value(lap, pt) - expected) < 1e-15);
    }
  }
}

TEST_CASE("hydrogen trial has the pinned initial slope") {
  for (const char* name : {"hatom-n1", "hatom-n2"}) {
    const Problem p = make_problem(name);
    const Mlp net = random_solver(1, 2);
    auto f = [&](double x) {
      const double xs[] = {x};
      return trial_value(p, net, xs);
    };
    const double analytic_slope = oracle::d1([&](double x) {
      const double xs[] = {x};
      return analytic(p, xs);
    }, 1e-2, 1e-3);
    CHECK(oracle::d1(f, 1e-2, 1e-3) == doctest::Approx(analytic_slope).epsilon(0.05));
  }
}

TEST_CASE("residual is pure") {
  const Problem p = make_problem("laplace");
  const Mlp net = random_solver(2, 4);
  const double x[] = {0.2, 0.7};
  CHECK(trial_residual(p, net, x) == trial_residual(p, net, x));
  Tape a, b;
  const BoundMlp ba = bind(net, a);
  const BoundMlp bb = bind(net, b);
  const std::vector<Var> xa{Var::leaf(a, 0.2), Var::leaf(a, 0.7)};
  const std::vector<Var> xb{Var::leaf(b, 0.2), Var::leaf(b, 0.7)};
  const Var ra = trial_residual<Var>(p, net, ba.params, xa);
  const Var rb = trial_residual<Var>(p, net, bb.params, xb);
  CHECK(ra.value() == rb.value());
  CHECK(ra.value() == trial_residual(p, net, x));
  CHECK(a.size() == b.size());
}

TEST_CASE("trial residual matches finite differences of the trial value") {
  const Problem lap = make_problem("laplace");
  const Mlp net = random_solver(2, 6);
  const double x0 = 0.4, y0 = 0.3;
  auto fx = [&](double x) {
    const double pt[] = {x, y0};
    return trial_value(lap, net, pt);
  };
  auto fy = [&](double y) {
    const double pt[] = {x0, y};
    return trial_value(lap, net, pt);
  };
  const double pt[] = {x0, y0};
  CHECK(trial_residual(lap, net, pt) ==
        doctest::Approx(oracle::d2(fx, x0) + oracle::d2(fy, y0)).epsilon(1e-5));

  const Problem lg = make_problem("logistic");
  const Mlp n1 = random_solver(1, 6);
  auto g = [&](double x) {
    const double xs[] = {x};
    return trial_value(lg, n1, xs);
  };
  const double xs[] = {2.0};
  const double u = g(2.0);
  CHECK(trial_residual(lg, n1, xs) ==
        doctest::Approx(oracle::d1(g, 2.0) - lg.params.gamma * u * (lg.params.M - u)).epsilon(1e-7));
}

TEST_CASE("input normalisation changes the network input, not the equation") {
  const Problem plain = make_problem("logistic");
  const Problem norm = make_problem("logistic", {{"normalize_inputs", true}});
  const Mlp net = random_solver(1, 7);
  auto g = [&](double x) {
    const double xs[] = {x};
    return trial_value(norm, net, xs);
  };
  const double xs[] = {3.0};
  const double u = g(3.0);
  CHECK(trial_residual(norm, net, xs) ==
        doctest::Approx(oracle::d1(g, 3.0) + u * (1.0 - u)).epsilon(1e-7));
  CHECK(trial_value(plain, net, xs) != trial_value(norm, net, xs));
}
