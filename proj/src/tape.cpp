#include "advcol/tape.hpp"

#include <cmath>
#include <sstream>

namespace advcol {

std::string_view op_name(OpKind kind) {
  switch (kind) {
    case OpKind::leaf: return "leaf";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::mul: return "mul";
    case OpKind::div: return "div";
    case OpKind::neg: return "neg";
    case OpKind::exp: return "exp";
    case OpKind::ln: return "ln";
    case OpKind::sin: return "sin";
    case OpKind::cos: return "cos";
    case OpKind::tanh: return "tanh";
    case OpKind::sqrt: return "sqrt";
    case OpKind::pow_const: return "pow_const";
    case OpKind::max_const: return "max_const";
    case OpKind::square: return "square";
    case OpKind::dot: return "dot";
  }
  return "unknown";
}

NodeRef Tape::finish(OpKind kind, double value) {
  const auto index = values_.size();
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "non-finite value " << value << " recorded by " << op_name(kind)
        << " at node " << index;
    // roll back edges pushed for this node
    operands_.resize(edge_begin_.back());
    partials_.resize(edge_begin_.back());
    throw NonFiniteError(msg.str(), index);
  }
  values_.push_back(value);
  kinds_.push_back(kind);
  edge_begin_.push_back(static_cast<std::uint32_t>(operands_.size()));
  return NodeRef{static_cast<std::uint32_t>(index)};
}

void Tape::check(NodeRef node) const {
  if (node.index >= values_.size()) {
    std::ostringstream msg;
    msg << "operand node " << node.index << " is not on the tape (size " << values_.size()
        << ")";
    throw std::out_of_range(msg.str());
  }
}

void Tape::domain_error(OpKind kind, const char* reason) const {
  std::ostringstream msg;
  msg << op_name(kind) << ": " << reason << " at node " << values_.size();
  throw DomainError(msg.str(), values_.size());
}

NodeRef Tape::leaf(double value) { return finish(OpKind::leaf, value); }

NodeRef Tape::push_unary(OpKind kind, NodeRef x, double value, double partial) {
  operands_.push_back(x.index);
  partials_.push_back(partial);
  return finish(kind, value);
}

NodeRef Tape::push_binary(OpKind kind, NodeRef a, NodeRef b, double value, double partial_a,
                          double partial_b) {
  operands_.push_back(a.index);
  operands_.push_back(b.index);
  partials_.push_back(partial_a);
  partials_.push_back(partial_b);
  return finish(kind, value);
}

NodeRef Tape::dot(std::span<const NodeRef> a, std::span<const NodeRef> b,
                  std::optional<NodeRef> offset) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: operand lists differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double va = values_[a[i].index];
    const double vb = values_[b[i].index];
    sum += va * vb;
    operands_.push_back(a[i].index);
    partials_.push_back(vb);
    operands_.push_back(b[i].index);
    partials_.push_back(va);
  }
  if (offset) {
    sum += values_[offset->index];
    operands_.push_back(offset->index);
    partials_.push_back(1.0);
  }
  return finish(OpKind::dot, sum);
}

NodeRef Tape::record(OpKind kind, std::span<const NodeRef> operands,
                     std::optional<double> constant) {
  for (auto node : operands) check(node);
  const auto arity = operands.size();
  auto need = [&](bool ok, const char* what) {
    if (!ok) {
      std::ostringstream msg;
      msg << op_name(kind) << ": " << what;
      throw std::invalid_argument(msg.str());
    }
  };
  auto val = [&](std::size_t i) { return values_[operands[i].index]; };

  switch (kind) {
    case OpKind::leaf:
      need(arity == 0 && constant.has_value(), "leaf takes no operands and a value");
      return leaf(*constant);
    case OpKind::add: {
      need(arity >= 1, "needs at least one operand");
      double sum = constant.value_or(0.0);
      for (std::size_t i = 0; i < arity; ++i) {
        sum += val(i);
        operands_.push_back(operands[i].index);
        partials_.push_back(1.0);
      }
      return finish(kind, sum);
    }
    case OpKind::sub:
      if (arity == 1) {
        need(constant.has_value(), "single-operand sub needs a constant");
        return push_unary(kind, operands[0], val(0) - *constant, 1.0);
      }
      need(arity == 2 && !constant, "takes two operands");
      return push_binary(kind, operands[0], operands[1], val(0) - val(1), 1.0, -1.0);
    case OpKind::mul:
      if (arity == 1) {
        need(constant.has_value(), "single-operand mul needs a constant");
        return push_unary(kind, operands[0], *constant * val(0), *constant);
      }
      need(arity == 2 && !constant, "takes two operands");
      return push_binary(kind, operands[0], operands[1], val(0) * val(1), val(1), val(0));
    case OpKind::div:
      if (arity == 1) {
        need(constant.has_value(), "single-operand div needs a constant");
        if (*constant == 0.0) domain_error(kind, "division by zero");
        return push_unary(kind, operands[0], val(0) / *constant, 1.0 / *constant);
      }
      need(arity == 2 && !constant, "takes two operands");
      if (val(1) == 0.0) domain_error(kind, "division by zero");
      return push_binary(kind, operands[0], operands[1], val(0) / val(1), 1.0 / val(1),
                         -val(0) / (val(1) * val(1)));
    case OpKind::dot: {
      need(arity >= 2 && !constant.has_value(), "takes 2m (+1) operands");
      const auto m = arity / 2;
      std::optional<NodeRef> offset;
      if (arity % 2 == 1) offset = operands.back();
      return dot(operands.subspan(0, m), operands.subspan(m, m), offset);
    }
    default:
      break;
  }

  need(arity == 1, "takes exactly one operand");
  const double x = val(0);
  const NodeRef in = operands[0];
  switch (kind) {
    case OpKind::neg:
      return push_unary(kind, in, -x, -1.0);
    case OpKind::exp: {
      const double y = std::exp(x);
      return push_unary(kind, in, y, y);
    }
    case OpKind::ln:
      if (!(x > 0.0)) domain_error(kind, "logarithm of non-positive value");
      return push_unary(kind, in, std::log(x), 1.0 / x);
    case OpKind::sin:
      return push_unary(kind, in, std::sin(x), std::cos(x));
    case OpKind::cos:
      return push_unary(kind, in, std::cos(x), -std::sin(x));
    case OpKind::tanh: {
      const double y = std::tanh(x);
      return push_unary(kind, in, y, 1.0 - y * y);
    }
    case OpKind::sqrt: {
      if (x < 0.0) domain_error(kind, "square root of negative value");
      const double y = std::sqrt(x);
      return push_unary(kind, in, y, 0.5 / y);
    }
    case OpKind::square:
      return push_unary(kind, in, x * x, 2.0 * x);
    case OpKind::pow_const: {
      need(constant.has_value(), "needs an exponent");
      const double p = *constant;
      if (x < 0.0 && p != std::floor(p)) domain_error(kind, "fractional power of negative value");
      if (x == 0.0 && p < 0.0) domain_error(kind, "negative power of zero");
      return push_unary(kind, in, std::pow(x, p), p == 0.0 ? 0.0 : p * std::pow(x, p - 1.0));
    }
    case OpKind::max_const: {
      need(constant.has_value(), "needs a threshold");
      const double c = *constant;
      return x > c ? push_unary(kind, in, x, 1.0) : push_unary(kind, in, c, 0.0);
    }
    default:
      break;
  }
  throw std::invalid_argument("record: unsupported operation");
}

std::span<const std::uint32_t> Tape::operands(NodeRef node) const {
  check(node);
  const auto b = edge_begin_[node.index];
  const auto e = edge_begin_[node.index + 1];
  return {operands_.data() + b, e - b};
}

std::span<const double> Tape::partials(NodeRef node) const {
  check(node);
  const auto b = edge_begin_[node.index];
  const auto e = edge_begin_[node.index + 1];
  return {partials_.data() + b, e - b};
}

void Tape::clear() {
  values_.clear();
  kinds_.clear();
  edge_begin_.assign(1, 0);
  operands_.clear();
  partials_.clear();
}

void backward(const Tape& tape, NodeRef output, GradientMap& into) {
  tape.check(output);
  auto& adj = into.adjoints_;
  adj.assign(tape.size(), 0.0);
  adj[output.index] = 1.0;
  const auto* operands = tape.operands_.data();
  const auto* partials = tape.partials_.data();
  const auto* begin = tape.edge_begin_.data();
  for (std::size_t i = output.index + 1; i-- > 0;) {
    const double a = adj[i];
    if (a == 0.0) continue;
    if (!std::isfinite(a)) {
      std::ostringstream msg;
      msg << "non-finite adjoint at node " << i << " (" << op_name(tape.kinds_[i]) << ")";
      throw NonFiniteError(msg.str(), i);
    }
    for (auto e = begin[i]; e < begin[i + 1]; ++e) adj[operands[e]] += partials[e] * a;
  }
}

GradientMap backward(const Tape& tape, NodeRef output) {
  GradientMap grads;
  backward(tape, output, grads);
  return grads;
}

}  // namespace advcol
