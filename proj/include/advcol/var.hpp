#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "advcol/tape.hpp"

namespace advcol {

/// Handle to a tape node with arithmetic operators, so that the same generic
/// code evaluates either on plain doubles or on a tape.
class Var {
 public:
  Var() = default;
  Var(Tape& tape, NodeRef node) : tape_(&tape), node_(node) {}

  static Var leaf(Tape& tape, double value) { return {tape, tape.leaf(value)}; }

  double value() const { return tape_->value(node_); }
  NodeRef node() const { return node_; }
  Tape& tape() const { return *tape_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  NodeRef node_{};
};

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }

// Binary operators. Mixed Var/double forms record a single node.
inline Var operator+(const Var& a, const Var& b) {
  return {a.tape(), a.tape().push_binary(OpKind::add, a.node(), b.node(),
                                         a.value() + b.value(), 1.0, 1.0)};
}
inline Var operator-(const Var& a, const Var& b) {
  return {a.tape(), a.tape().push_binary(OpKind::sub, a.node(), b.node(),
                                         a.value() - b.value(), 1.0, -1.0)};
}
inline Var operator*(const Var& a, const Var& b) {
  const double va = a.value();
  const double vb = b.value();
  return {a.tape(), a.tape().push_binary(OpKind::mul, a.node(), b.node(), va * vb, vb, va)};
}
Var operator/(const Var& a, const Var& b);

inline Var operator+(const Var& a, double c) {
  return {a.tape(), a.tape().push_unary(OpKind::add, a.node(), a.value() + c, 1.0)};
}
inline Var operator+(double c, const Var& a) { return a + c; }
inline Var operator-(const Var& a, double c) {
  return {a.tape(), a.tape().push_unary(OpKind::sub, a.node(), a.value() - c, 1.0)};
}
inline Var operator-(double c, const Var& a) {
  // c - a, recorded as an affine node
  return {a.tape(), a.tape().push_unary(OpKind::add, a.node(), c - a.value(), -1.0)};
}
inline Var operator*(const Var& a, double c) {
  return {a.tape(), a.tape().push_unary(OpKind::mul, a.node(), c * a.value(), c)};
}
inline Var operator*(double c, const Var& a) { return a * c; }
Var operator/(const Var& a, double c);
Var operator/(double c, const Var& a);

inline Var operator-(const Var& a) {
  return {a.tape(), a.tape().push_unary(OpKind::neg, a.node(), -a.value(), -1.0)};
}

inline Var exp(const Var& x) {
  const double y = std::exp(x.value());
  return {x.tape(), x.tape().push_unary(OpKind::exp, x.node(), y, y)};
}
inline Var tanh(const Var& x) {
  const double y = std::tanh(x.value());
  return {x.tape(), x.tape().push_unary(OpKind::tanh, x.node(), y, 1.0 - y * y)};
}
inline Var sin(const Var& x) {
  const double v = x.value();
  return {x.tape(), x.tape().push_unary(OpKind::sin, x.node(), std::sin(v), std::cos(v))};
}
inline Var cos(const Var& x) {
  const double v = x.value();
  return {x.tape(), x.tape().push_unary(OpKind::cos, x.node(), std::cos(v), -std::sin(v))};
}
inline Var square(const Var& x) {
  const double v = x.value();
  return {x.tape(), x.tape().push_unary(OpKind::square, x.node(), v * v, 2.0 * v)};
}
Var log(const Var& x);
Var sqrt(const Var& x);
Var pow(const Var& x, double p);
/// max(x, c) with a constant floor.
Var max_const(const Var& x, double c);

inline double square(double x) { return x * x; }
inline double max_const(double x, double c) { return x > c ? x : c; }

/// sum_i a[i] * b[i] + offset.
inline double dot(std::span<const double> a, std::span<const double> b, double offset = 0.0) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum + offset;
}
Var dot(std::span<const Var> a, std::span<const Var> b);
Var dot(std::span<const Var> a, std::span<const Var> b, const Var& offset);

/// n-ary sum recorded as a single node.
inline double sum(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}
Var sum(std::span<const Var> xs);

/// A constant of scalar type S; for Var it is a leaf on `like`'s tape.
inline double constant_like(double, double c) { return c; }
inline Var constant_like(const Var& like, double c) { return Var::leaf(like.tape(), c); }

}  // namespace advcol
