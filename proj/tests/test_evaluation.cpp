#include <doctest.h>

#include <cmath>
#include <vector>

#include "advcol/compare.hpp"
#include "advcol/metrics.hpp"
#include "oracles.hpp"

using namespace advcol;

namespace {

Mlp random_solver(int d, std::uint64_t seed) {
  MlpConfig c;
  c.layer_sizes = {d, 12, 12, 1};
  return init_mlp(c, seed);
}

TrainConfig quick_config() {
  TrainConfig c;
  c.n_points = 6;
  c.max_iters = 8;
  c.eval_every = 4;
  c.solver_hidden = {6};
  c.sampler.hidden = {6};
  c.sampler.z_dim = 3;
  c.mse_grid = 40;
  return c;
}

}  // namespace

TEST_CASE("linspace includes both endpoints") {
  const auto g = linspace(0.0, 1.0, 32);
  CHECK(g.size() == 32);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[1] == doctest::Approx(1.0 / 31.0));
  CHECK_THROWS(linspace(0.0, 1.0, 1));
}

TEST_CASE("MSE of stubs") {
  for (const char* name : {"expdecay", "logistic", "hatom-n1", "hatom-n2", "expdecay-ode", "laplace"}) {
    const Problem p = make_problem(name);
    auto exact = [&](std::span<const Jet<double>> x) {
      std::vector<double> pt;
      for (const auto& j : x) pt.push_back(j[0]);
      Jet<double> y(x[0].order());
      y[0] = analytic(p, pt);
      return y;
    };
    CHECK(mse_vs_analytic(exact, p, 200) == 0.0);
    const double c = 0.03;
    auto offset = [&](std::span<const Jet<double>> x) { return exact(x) + c; };
    CHECK(mse_vs_analytic(offset, p, 200) == doctest::Approx(c * c).epsilon(1e-9));
  }
  const Problem soft = make_problem("laplace", {{"boundary", "sin-y"}});
  CHECK_THROWS_AS(mse_vs_analytic(random_solver(2, 1), soft), std::logic_error);
}

TEST_CASE("MSE of a random network matches an independent accumulation") {
  const Problem p = make_problem("logistic");
  const Mlp net = random_solver(1, 21);
  std::vector<double> yhat, u;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double x = 10.0 * i / (n - 1);
    const double pt[] = {x};
    yhat.push_back(trial_value(p, net, pt));
    u.push_back(analytic(p, pt));
  }
  CHECK(std::abs(mse_vs_analytic(net, p) - oracle::mean_of_squares(yhat, u)) < 1e-12);
}

TEST_CASE("validation residual of stubs") {
  Problem p = make_problem("laplace", {{"trial", "pde-soft"}});
  REQUIRE(p.trial == TrialMode::pde_soft);
  p.params.beta = 0.0;  // PDE residual only
  auto xy = [](std::span<const Jet<double>> x) { return x[0] * x[1]; };
  CHECK(validation_residual(xy, p) == 0.0);
  auto x2 = [](std::span<const Jet<double>> x) { return x[0] * x[0]; };
  CHECK(validation_residual(x2, p) == doctest::Approx(4.0).epsilon(1e-12));

  // with the penalty, the boundary mismatch of x^2 against sin(pi y) is added
  Problem q = make_problem("laplace", {{"trial", "pde-soft"}});
  const auto bp = soft_boundary_points(q);
  double b = 0.0;
  for (std::size_t i = 0; i < bp.size(); i += 2) {
    const double g = bp[i] == 0.0 ? std::sin(std::numbers::pi * bp[i + 1]) : 0.0;
    b += square(bp[i] * bp[i] - g);
  }
  CHECK(validation_residual(x2, q) == doctest::Approx(4.0 + q.params.beta * b / (bp.size() / 2)).epsilon(1e-12));
  CHECK_THROWS_AS(validation_residual(x2, make_problem("logistic")), std::invalid_argument);
}

TEST_CASE("validation residual of a network matches a per-point evaluation") {
  for (const char* boundary : {"sin-pi-y", "sin-y"}) {
    const Problem p = make_problem("laplace", {{"boundary", boundary}});
    const Mlp net = random_solver(2, 5);
    // y-hat through single-direction jets, a separate code path from the training one
    auto yhat = [&](std::span<const Jet<double>> x) {
      const auto raw = forward_jet<double>(net, net.params(), x);
      return reparameterize<double>(p, x, raw[0]);
    };
    CHECK(std::abs(validation_residual(net, p) - validation_residual(yhat, p)) < 1e-10);
  }
  const Mlp net = random_solver(2, 5);
  CHECK_THROWS_AS(validation_residual(net, make_problem("hatom-n1")), std::invalid_argument);
}

TEST_CASE("evaluation loss dispatches on the loss type") {
  const Problem p = make_problem("laplace");
  const Mlp net = random_solver(2, 2);
  CHECK(evaluation_loss(net, p, LossType::val) == validation_residual(net, p));
  CHECK(evaluation_loss(net, p, LossType::mse, 50) == mse_vs_analytic(net, p, 50));
}

TEST_CASE("final loss is recomputable from the saved solver") {
  const Problem p = make_problem("expdecay");
  const RunReport r = run(p, quick_config());
  const Mlp reloaded = mlp_from_json(nlohmann::json::parse(to_json(r.solver).dump()));
  CHECK(std::abs(mse_vs_analytic(reloaded, p, 40) - r.final_loss) < 1e-12);
}

TEST_CASE("compare aggregates paired trials") {
  const Problem p = make_problem("logistic");
  const TrainConfig c = quick_config();
  SUBCASE("single trial") {
    const auto s = compare(p, {Scheme::adversarial}, c, 1);
    REQUIRE(s.schemes.size() == 1);
    const auto& a = s.schemes[0];
    CHECK(a.avg_loss == a.trials[0].final_loss);
    CHECK(a.avg_time_s == a.trials[0].wall_time_s);
    CHECK(s.loss_type == LossType::mse);
  }
  SUBCASE("paired seeds and exact averages") {
    const auto s = compare(p, {Scheme::adversarial, Scheme::noisy_linspace}, c, 3, 2);
    REQUIRE(s.schemes.size() == 2);
    for (const auto& sc : s.schemes) {
      REQUIRE(sc.trials.size() == 3);
      double loss = 0.0, time = 0.0;
      for (int i = 0; i < 3; ++i) {
        CHECK(sc.trials[i].seed == trial_seed(c.seed, i));
        loss += sc.trials[i].final_loss;
        time += sc.trials[i].wall_time_s;
      }
      CHECK(sc.avg_loss == doctest::Approx(loss / 3).epsilon(1e-15));
      CHECK(sc.avg_time_s == doctest::Approx(time / 3).epsilon(1e-15));
      CHECK(sc.completed == 3);
    }
    CHECK(s.schemes[0].scheme == "adversarial");
    CHECK(s.schemes[1].scheme == "noisy-linspace");
    // a sequential rerun reproduces every trial
    const auto again = compare(p, {Scheme::adversarial, Scheme::noisy_linspace}, c, 3, 1);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 3; ++i)
        CHECK(again.schemes[k].trials[i].final_loss == s.schemes[k].trials[i].final_loss);
  }
}

TEST_CASE("aborted trials are flagged and excluded from averages") {
  SchemeSummary s;
  s.scheme = "uniform";
  for (int i = 0; i < 3; ++i) {
    RunReport r;
    r.final_loss = i + 1.0;
    r.wall_time_s = 2.0 * (i + 1);
    r.stop_reason = i == 1 ? StopReason::aborted : StopReason::max_iters;
    s.trials.push_back(r);
  }
  summarize(s);
  CHECK(s.completed == 2);
  CHECK(s.aborted == 1);
  CHECK(s.avg_loss == 2.0);
  CHECK(s.avg_time_s == 4.0);
}
