#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "advcol/jet.hpp"
#include "advcol/tape.hpp"
#include "advcol/var.hpp"
#include "oracles.hpp"

using namespace advcol;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Composite exercising every unary and binary op, written once as a template
// so the same expression can be taped or evaluated in plain doubles.
template <class S>
S composite(const std::vector<S>& x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tanh;
  S a = x[0] * x[1] + sin(x[2]);
  S b = exp(x[0] * 0.3) / (2.0 + cos(x[1]));
  S c = tanh(a - b) + square(x[2]) * 0.5;
  S d = log(1.5 + sin(x[1] * x[2])) + sqrt(square(x[0]) + 1.0);
  S e = pow(2.0 + square(c), 1.5) - d / (1.0 + square(a));
  return max_const(e, -1e6) * 0.25 - (-c) + 3.0 - x[0] / 4.0;
}

}  // namespace

TEST_CASE("record computes forward values") {
  Tape t;
  const NodeRef x = t.leaf(3.0);
  const NodeRef y = t.leaf(4.0);
  const NodeRef xy[] = {x, y};
  CHECK(t.value(t.record(OpKind::mul, xy)) == 12.0);
  const NodeRef z = t.leaf(0.0);
  CHECK(t.value(t.record(OpKind::tanh, std::span(&z, 1))) == 0.0);
  const NodeRef w = t.leaf(1.5);
  CHECK(t.value(t.record(OpKind::exp, std::span(&w, 1))) == doctest::Approx(4.4817).epsilon(1e-4));
  CHECK(t.value(t.record(OpKind::pow_const, std::span(&w, 1), 2.0)) == 2.25);
  CHECK(t.value(t.record(OpKind::max_const, std::span(&z, 1), 1.0)) == 1.0);
}

TEST_CASE("record rejects domain errors with the node index") {
  Tape t;
  const NodeRef one = t.leaf(1.0);
  const NodeRef zero = t.leaf(0.0);
  const NodeRef neg = t.leaf(-2.0);
  const NodeRef div_args[] = {one, zero};
  CHECK_THROWS_AS(t.record(OpKind::div, div_args), DomainError);
  CHECK_THROWS_AS(t.record(OpKind::ln, std::span(&zero, 1)), DomainError);
  CHECK_THROWS_AS(t.record(OpKind::sqrt, std::span(&neg, 1)), DomainError);
  CHECK_THROWS_AS(t.record(OpKind::pow_const, std::span(&neg, 1), 0.5), DomainError);
  try {
    t.record(OpKind::ln, std::span(&neg, 1));
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.node() == t.size());
  }
  CHECK(t.size() == 3);
}

TEST_CASE("record rejects operands that are not on the tape") {
  Tape t;
  t.leaf(1.0);
  const NodeRef bogus{7};
  CHECK_THROWS(t.record(OpKind::exp, std::span(&bogus, 1)));
}

TEST_CASE("non-finite values are reported") {
  Tape t;
  const Var x = Var::leaf(t, 1000.0);
  CHECK_THROWS_AS(exp(x), NonFiniteError);
}

TEST_CASE("backward on small examples") {
  Tape t;
  const Var x = Var::leaf(t, 3.0);
  const Var y = Var::leaf(t, 4.0);
  const Var f = x * y;
  const GradientMap g = backward(t, f.node());
  CHECK(g[x.node()] == 4.0);
  CHECK(g[y.node()] == 3.0);
  CHECK(g[f.node()] == 1.0);

  Tape t2;
  const Var z = Var::leaf(t2, 0.0);
  const Var h = tanh(z);
  CHECK(backward(t2, h.node())[z.node()] == 1.0);
}

TEST_CASE("backward matches finite differences on random composites") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x0{u(rng), u(rng), u(rng)};
    Tape t;
    std::vector<Var> x;
    for (double v : x0) x.push_back(Var::leaf(t, v));
    const Var f = composite(x);
    CHECK(f.value() == doctest::Approx(composite(x0)).epsilon(1e-14));
    const GradientMap g = backward(t, f.node());
    const auto fd = oracle::gradient([](const std::vector<double>& p) { return composite(p); }, x0);
    for (std::size_t i = 0; i < x0.size(); ++i) CHECK(rel_err(g[x[i].node()], fd[i]) < 1e-5);
  }
}

TEST_CASE("fused dot records one node with correct partials") {
  Tape t;
  std::vector<NodeRef> a{t.leaf(1.0), t.leaf(2.0)};
  std::vector<NodeRef> b{t.leaf(3.0), t.leaf(-1.0)};
  const NodeRef off = t.leaf(0.5);
  const NodeRef d = t.dot(a, b, off);
  CHECK(t.value(d) == 1.5);
  CHECK(t.kind(d) == OpKind::dot);
  const GradientMap g = backward(t, d);
  CHECK(g[a[0]] == 3.0);
  CHECK(g[a[1]] == -1.0);
  CHECK(g[b[0]] == 1.0);
  CHECK(g[b[1]] == 2.0);
  CHECK(g[off] == 1.0);
}

TEST_CASE("shared subexpressions accumulate adjoints") {
  Tape t;
  const Var x = Var::leaf(t, 2.0);
  const Var s = x * x;
  const Var f = s * s + s;  // x^4 + x^2
  CHECK(backward(t, f.node())[x.node()] == doctest::Approx(4 * 8.0 + 2 * 2.0));
}

TEST_CASE("jet_lift seeds") {
  Tape t;
  const TapeJet a = jet_lift(t, 5.0, true, 2);
  CHECK(a.order() == 2);
  CHECK(a[0].value() == 5.0);
  CHECK(a[1].value() == 1.0);
  CHECK(a[2].value() == 0.0);
  const TapeJet b = jet_lift(t, 5.0, false, 2);
  CHECK(b[1].value() == 0.0);
  CHECK(b[2].value() == 0.0);
  CHECK(a.coeffs().size() == 3);
}

TEST_CASE("jet_apply on elementary functions") {
  Tape t;
  const TapeJet x0 = jet_lift(t, 0.0, true, 2);
  const TapeJet args[] = {x0};
  const TapeJet e = jet_apply(OpKind::exp, args);
  CHECK(e[0].value() == 1.0);
  CHECK(e[1].value() == 1.0);
  CHECK(e[2].value() == 1.0);
  const TapeJet th = jet_apply(OpKind::tanh, args);
  CHECK(th[0].value() == 0.0);
  CHECK(th[1].value() == 1.0);
  CHECK(th[2].value() == 0.0);

  const TapeJet x = jet_lift(t, 0.7, true, 2);
  const TapeJet sx_args[] = {x};
  const TapeJet s = jet_apply(OpKind::sin, sx_args);
  const TapeJet prod_args[] = {s, x};
  const TapeJet p = jet_apply(OpKind::mul, prod_args);
  auto f = [](double v) { return v * std::sin(v); };
  CHECK(rel_err(p[1].value(), oracle::d1(f, 0.7)) < 1e-4);
  CHECK(rel_err(p[2].value(), oracle::d2(f, 0.7)) < 1e-4);

  const TapeJet neg = jet_lift(t, -1.0, true, 1);
  const TapeJet neg_args[] = {neg};
  CHECK_THROWS_AS(jet_apply(OpKind::ln, neg_args), DomainError);
}

TEST_CASE("jets of orders 1 to 3 match finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = u(rng);
    const double c1 = u(rng);
    const double c2 = u(rng);
    auto f = [&](double x) {
      std::vector<double> v{x, c1 + 0.5 * x, c2 - x};
      return composite(v);
    };
    Tape t;
    const TapeJet x = jet_lift(t, x0, true, 3);
    std::vector<TapeJet> v{x, 0.5 * x + c1, c2 - x};
    // Jet version of the composite, built from the same operator set.
    const TapeJet j = composite(v);
    CHECK(rel_err(j[0].value(), f(x0)) < 1e-12);
    CHECK(rel_err(j[1].value(), oracle::d1(f, x0)) < 1e-4);
    CHECK(rel_err(j[2].value(), oracle::d2(f, x0)) < 1e-4);
    CHECK(rel_err(j[3].value(), oracle::d3(f, x0)) < 1e-4);
  }
}

TEST_CASE("parameter gradients of jet coefficients match finite differences") {
  // g(x; w) = tanh(w0 * x + w1) * exp(w2 * x); check d/dw of g'(x) and g''(x).
  const double x0 = 0.4;
  const std::vector<double> w0{0.8, -0.3, 0.6};
  auto coeff = [&](const std::vector<double>& w, int k) {
    Tape t;
    const TapeJet x = jet_lift(t, x0, true, 2);
    const TapeJet g = tanh(x * w[0] + w[1]) * exp(x * w[2]);
    return g[k].value();
  };
  for (int k = 1; k <= 2; ++k) {
    Tape t;
    std::vector<Var> w;
    for (double v : w0) w.push_back(Var::leaf(t, v));
    const TapeJet x = jet_lift(t, x0, true, 2);
    auto lift = [&](const Var& v) { return jet_lift(v, false, 2); };
    const TapeJet g = tanh(x * lift(w[0]) + lift(w[1])) * exp(x * lift(w[2]));
    const GradientMap grads = backward(t, g[k].node());
    const auto fd = oracle::gradient([&](const std::vector<double>& p) { return coeff(p, k); }, w0);
    for (int i = 0; i < 3; ++i) CHECK(rel_err(grads[w[i].node()], fd[i]) < 1e-5);
  }
}

TEST_CASE("tape replay is bit-identical") {
  auto run = [] {
    Tape t;
    std::vector<Var> x{Var::leaf(t, 0.3), Var::leaf(t, -0.8), Var::leaf(t, 1.1)};
    const Var f = composite(x);
    std::vector<double> values;
    for (std::uint32_t i = 0; i < t.size(); ++i) values.push_back(t.value(NodeRef{i}));
    const GradientMap g = backward(t, f.node());
    values.insert(values.end(), g.adjoints().begin(), g.adjoints().end());
    return values;
  };
  CHECK(run() == run());
}

TEST_CASE("clear empties the tape") {
  Tape t;
  const Var x = Var::leaf(t, 1.0);
  (void)(x * x);
  t.clear();
  CHECK(t.size() == 0);
  CHECK(t.edge_count() == 0);
}
