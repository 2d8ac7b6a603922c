#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>

#include "advcol/var.hpp"

namespace advcol {

inline constexpr int kMaxJetOrder = 3;

/// Truncated expansion of a quantity along one input direction.
/// coeff(k) holds the k-th derivative (not the Taylor coefficient), k <= order.
/// With S = Var every coefficient is a tape node, so derivatives stay
/// differentiable with respect to anything upstream.
template <class S>
class Jet {
 public:
  Jet() = default;
  explicit Jet(int order) : order_(order) {
    if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order must be in [0, 3]");
  }

  int order() const { return order_; }
  S& operator[](int k) { return coeffs_[k]; }
  const S& operator[](int k) const { return coeffs_[k]; }
  std::span<const S> coeffs() const { return {coeffs_.data(), static_cast<std::size_t>(order_ + 1)}; }

 private:
  std::array<S, kMaxJetOrder + 1> coeffs_{};
  int order_ = 0;
};

using TapeJet = Jet<Var>;

/// Jet of an input coordinate: (value, 1 or 0, 0, ...). The seed entries are
/// tape constants.
TapeJet jet_lift(Tape& tape, double value, bool active, int order);
/// Same, with coefficient 0 an existing node (points that need gradients).
TapeJet jet_lift(const Var& value, bool active, int order);

inline Jet<double> jet_lift(double value, bool active, int order) {
  Jet<double> j(order);
  j[0] = value;
  if (order >= 1) j[1] = active ? 1.0 : 0.0;
  return j;
}

namespace jet_detail {
template <class S>
void check_same_order(const Jet<S>& a, const Jet<S>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("jet orders differ");
}

// Chain rule for y = f(u) given f and its derivatives at u[0] (Faa di Bruno,
// derivative convention). Entries of `df` beyond u.order() are ignored.
template <class S>
Jet<S> compose(const Jet<S>& u, const S& f0, const std::array<S, kMaxJetOrder>& df) {
  Jet<S> y(u.order());
  y[0] = f0;
  const int n = u.order();
  if (n >= 1) y[1] = df[0] * u[1];
  if (n >= 2) y[2] = df[1] * square(u[1]) + df[0] * u[2];
  if (n >= 3) y[3] = df[2] * (u[1] * square(u[1])) + 3.0 * (df[1] * (u[1] * u[2])) + df[0] * u[3];
  return y;
}
}  // namespace jet_detail

template <class S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  jet_detail::check_same_order(a, b);
  Jet<S> y(a.order());
  for (int k = 0; k <= a.order(); ++k) y[k] = a[k] + b[k];
  return y;
}

template <class S>
Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
  jet_detail::check_same_order(a, b);
  Jet<S> y(a.order());
  for (int k = 0; k <= a.order(); ++k) y[k] = a[k] - b[k];
  return y;
}

template <class S>
Jet<S> operator-(const Jet<S>& a) {
  Jet<S> y(a.order());
  for (int k = 0; k <= a.order(); ++k) y[k] = -a[k];
  return y;
}

template <class S>
Jet<S> operator+(const Jet<S>& a, double c) {
  Jet<S> y = a;
  y[0] = a[0] + c;
  return y;
}
template <class S>
Jet<S> operator+(double c, const Jet<S>& a) { return a + c; }

template <class S>
Jet<S> operator-(const Jet<S>& a, double c) { return a + (-c); }

template <class S>
Jet<S> operator-(double c, const Jet<S>& a) {
  Jet<S> y = -a;
  y[0] = c - a[0];
  return y;
}

template <class S>
Jet<S> operator*(const Jet<S>& a, double c) {
  Jet<S> y(a.order());
  for (int k = 0; k <= a.order(); ++k) y[k] = a[k] * c;
  return y;
}
template <class S>
Jet<S> operator*(double c, const Jet<S>& a) { return a * c; }
template <class S>
Jet<S> operator/(const Jet<S>& a, double c) {
  if (c == 0.0) throw std::domain_error("div: division by zero");
  return a * (1.0 / c);
}

/// Leibniz rule.
template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  jet_detail::check_same_order(a, b);
  const int n = a.order();
  Jet<S> y(n);
  y[0] = a[0] * b[0];
  if (n >= 1) y[1] = a[1] * b[0] + a[0] * b[1];
  if (n >= 2) y[2] = a[2] * b[0] + 2.0 * (a[1] * b[1]) + a[0] * b[2];
  if (n >= 3) y[3] = a[3] * b[0] + 3.0 * (a[2] * b[1] + a[1] * b[2]) + a[0] * b[3];
  return y;
}

/// Quotient recursion h_k = (f_k - sum_{i>=1} C(k,i) g_i h_{k-i}) / g_0.
template <class S>
Jet<S> operator/(const Jet<S>& f, const Jet<S>& g) {
  jet_detail::check_same_order(f, g);
  const int n = f.order();
  Jet<S> h(n);
  const S inv = 1.0 / g[0];
  h[0] = f[0] * inv;
  if (n >= 1) h[1] = (f[1] - g[1] * h[0]) * inv;
  if (n >= 2) h[2] = (f[2] - 2.0 * (g[1] * h[1]) - g[2] * h[0]) * inv;
  if (n >= 3) h[3] = (f[3] - 3.0 * (g[1] * h[2]) - 3.0 * (g[2] * h[1]) - g[3] * h[0]) * inv;
  return h;
}

/// c / g, the quotient recursion with a constant numerator.
template <class S>
Jet<S> operator/(double c, const Jet<S>& g) {
  const int n = g.order();
  Jet<S> h(n);
  const S inv = 1.0 / g[0];
  h[0] = c * inv;
  if (n >= 1) h[1] = -(g[1] * h[0]) * inv;
  if (n >= 2) h[2] = -(2.0 * (g[1] * h[1]) + g[2] * h[0]) * inv;
  if (n >= 3) h[3] = -(3.0 * (g[1] * h[2]) + 3.0 * (g[2] * h[1]) + g[3] * h[0]) * inv;
  return h;
}

template <class S>
Jet<S> exp(const Jet<S>& u) {
  using std::exp;
  const S e = exp(u[0]);
  return jet_detail::compose(u, e, {e, e, e});
}

template <class S>
Jet<S> tanh(const Jet<S>& u) {
  using std::tanh;
  const S t = tanh(u[0]);
  std::array<S, kMaxJetOrder> df{};
  if (u.order() >= 1) {
    const S t2 = square(t);
    df[0] = 1.0 - t2;
    if (u.order() >= 2) df[1] = -2.0 * (t * df[0]);
    if (u.order() >= 3) df[2] = df[0] * (6.0 * t2 - 2.0);
  }
  return jet_detail::compose(u, t, df);
}

template <class S>
Jet<S> sin(const Jet<S>& u) {
  using std::sin;
  using std::cos;
  const S s = sin(u[0]);
  std::array<S, kMaxJetOrder> df{};
  if (u.order() >= 1) {
    const S c = cos(u[0]);
    df = {c, -s, -c};
  }
  return jet_detail::compose(u, s, df);
}

template <class S>
Jet<S> cos(const Jet<S>& u) {
  using std::sin;
  using std::cos;
  const S c = cos(u[0]);
  std::array<S, kMaxJetOrder> df{};
  if (u.order() >= 1) {
    const S s = sin(u[0]);
    df = {-s, -c, s};
  }
  return jet_detail::compose(u, c, df);
}

template <class S>
Jet<S> log(const Jet<S>& u) {
  using std::log;
  if (!(value_of(u[0]) > 0.0) && !std::is_same_v<S, Var>)
    throw std::domain_error("ln: logarithm of non-positive value");
  const S y = log(u[0]);
  std::array<S, kMaxJetOrder> df{};
  if (u.order() >= 1) {
    const S r = 1.0 / u[0];
    df[0] = r;
    if (u.order() >= 2) df[1] = -square(r);
    if (u.order() >= 3) df[2] = 2.0 * (r * square(r));
  }
  return jet_detail::compose(u, y, df);
}

template <class S>
Jet<S> sqrt(const Jet<S>& u) {
  using std::sqrt;
  if (value_of(u[0]) < 0.0 && !std::is_same_v<S, Var>)
    throw std::domain_error("sqrt: square root of negative value");
  const S s = sqrt(u[0]);
  std::array<S, kMaxJetOrder> df{};
  if (u.order() >= 1) {
    const S r = 1.0 / s;
    df[0] = 0.5 * r;
    if (u.order() >= 2) df[1] = -0.25 * (r * square(r));
    if (u.order() >= 3) df[2] = 0.375 * (r * square(square(r)));
  }
  return jet_detail::compose(u, s, df);
}

template <class S>
Jet<S> square(const Jet<S>& u) { return u * u; }

template <class S>
Jet<S> pow(const Jet<S>& u, double p) {
  using std::pow;
  const S y = pow(u[0], p);
  std::array<S, kMaxJetOrder> df{};
  double coef = p;
  for (int k = 1; k <= u.order(); ++k) {
    df[k - 1] = coef == 0.0 ? constant_like(u[0], 0.0) : coef * pow(u[0], p - k);
    coef *= p - k;
  }
  return jet_detail::compose(u, y, df);
}

/// max(u, c): the jet of u where u[0] > c, otherwise the constant c.
template <class S>
Jet<S> max_const(const Jet<S>& u, double c) {
  if (value_of(u[0]) > c) return u;
  Jet<S> y(u.order());
  y[0] = max_const(u[0], c);
  for (int k = 1; k <= u.order(); ++k) y[k] = constant_like(u[0], 0.0);
  return y;
}

/// Dispatch by op kind; `constant` carries the exponent / threshold / scale.
TapeJet jet_apply(OpKind kind, std::span<const TapeJet> args,
                  std::optional<double> constant = std::nullopt);

}  // namespace advcol
