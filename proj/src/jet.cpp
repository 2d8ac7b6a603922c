#include "advcol/jet.hpp"

namespace advcol {

TapeJet jet_lift(Tape& tape, double value, bool active, int order) {
  return jet_lift(Var::leaf(tape, value), active, order);
}

TapeJet jet_lift(const Var& value, bool active, int order) {
  TapeJet j(order);
  j[0] = value;
  if (order >= 1) j[1] = Var::leaf(value.tape(), active ? 1.0 : 0.0);
  for (int k = 2; k <= order; ++k) j[k] = Var::leaf(value.tape(), 0.0);
  return j;
}

TapeJet jet_apply(OpKind kind, std::span<const TapeJet> args, std::optional<double> constant) {
  auto arity = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("jet_apply: wrong number of arguments");
  };
  auto need_constant = [&] {
    if (!constant) throw std::invalid_argument("jet_apply: missing constant");
    return *constant;
  };
  switch (kind) {
    case OpKind::add:
      if (args.size() == 1) return args[0] + constant.value_or(0.0);
      arity(2);
      return args[0] + args[1];
    case OpKind::sub:
      if (args.size() == 1) return args[0] + (-need_constant());
      arity(2);
      return args[0] - args[1];
    case OpKind::mul:
      if (args.size() == 1) return args[0] * need_constant();
      arity(2);
      return args[0] * args[1];
    case OpKind::div:
      if (args.size() == 1) {
        const double c = need_constant();
        if (c == 0.0) throw DomainError("div: division by zero", args[0][0].tape().size());
        return args[0] * (1.0 / c);
      }
      arity(2);
      return args[0] / args[1];
    case OpKind::neg: arity(1); return -args[0];
    case OpKind::exp: arity(1); return exp(args[0]);
    case OpKind::ln: arity(1); return log(args[0]);
    case OpKind::sin: arity(1); return sin(args[0]);
    case OpKind::cos: arity(1); return cos(args[0]);
    case OpKind::tanh: arity(1); return tanh(args[0]);
    case OpKind::sqrt: arity(1); return sqrt(args[0]);
    case OpKind::square: arity(1); return square(args[0]);
    case OpKind::pow_const: arity(1); return pow(args[0], need_constant());
    case OpKind::max_const: arity(1); return max_const(args[0], need_constant());
    case OpKind::leaf:
    case OpKind::dot:
      break;
  }
  throw std::invalid_argument("jet_apply: unsupported operation");
}

}  // namespace advcol
