#include "advcol/var.hpp"

#include <array>

namespace advcol {

Var operator/(const Var& a, const Var& b) {
  const std::array<NodeRef, 2> ops{a.node(), b.node()};
  return {a.tape(), a.tape().record(OpKind::div, ops)};
}

Var operator/(const Var& a, double c) {
  const std::array<NodeRef, 1> ops{a.node()};
  return {a.tape(), a.tape().record(OpKind::div, ops, c)};
}

Var operator/(double c, const Var& a) {
  const double v = a.value();
  if (v == 0.0) {
    const std::array<NodeRef, 2> ops{a.tape().leaf(c), a.node()};
    return {a.tape(), a.tape().record(OpKind::div, ops)};  // throws DomainError
  }
  return {a.tape(), a.tape().push_unary(OpKind::div, a.node(), c / v, -c / (v * v))};
}

namespace {
Var unary(const Var& x, OpKind kind, std::optional<double> constant = std::nullopt) {
  const std::array<NodeRef, 1> ops{x.node()};
  return {x.tape(), x.tape().record(kind, ops, constant)};
}
}  // namespace

Var log(const Var& x) { return unary(x, OpKind::ln); }
Var sqrt(const Var& x) { return unary(x, OpKind::sqrt); }
Var pow(const Var& x, double p) { return unary(x, OpKind::pow_const, p); }
Var max_const(const Var& x, double c) { return unary(x, OpKind::max_const, c); }

namespace {
thread_local std::vector<NodeRef> scratch_a;
thread_local std::vector<NodeRef> scratch_b;

void gather(std::span<const Var> xs, std::vector<NodeRef>& out) {
  out.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].node();
}
}  // namespace

Var dot(std::span<const Var> a, std::span<const Var> b) {
  Tape& tape = a.empty() ? b.front().tape() : a.front().tape();
  gather(a, scratch_a);
  gather(b, scratch_b);
  return {tape, tape.dot(scratch_a, scratch_b)};
}

Var dot(std::span<const Var> a, std::span<const Var> b, const Var& offset) {
  gather(a, scratch_a);
  gather(b, scratch_b);
  return {offset.tape(), offset.tape().dot(scratch_a, scratch_b, offset.node())};
}

Var sum(std::span<const Var> xs) {
  gather(xs, scratch_a);
  Tape& tape = xs.front().tape();
  return {tape, tape.record(OpKind::add, scratch_a)};
}

}  // namespace advcol
