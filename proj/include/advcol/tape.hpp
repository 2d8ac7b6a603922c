#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advcol {

/// Elementary operations a tape can record. The set is closed.
///
/// Operand/constant conventions for `Tape::record`:
///   leaf       no operands, constant = value
///   add        n >= 1 operands, value = sum + constant (default 0)
///   sub        a - b, or (one operand + constant) x - c
///   mul        a * b, or (one operand + constant) c * x
///   div        a / b, or (one operand + constant) x / c
///   pow_const  x^c
///   max_const  max(x, c)
///   dot        [a_1..a_m, b_1..b_m, (offset)] -> sum a_i*b_i (+ offset) (+ constant)
enum class OpKind : std::uint8_t {
  leaf,
  add,
  sub,
  mul,
  div,
  neg,
  exp,
  ln,
  sin,
  cos,
  tanh,
  sqrt,
  pow_const,
  max_const,
  square,
  dot,
};

std::string_view op_name(OpKind kind);

struct NodeRef {
  std::uint32_t index = 0;

  friend bool operator==(NodeRef, NodeRef) = default;
};

/// Raised when an operation is recorded outside its mathematical domain
/// (division by zero, log of non-positive, sqrt of negative).
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::size_t node)
      : std::domain_error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// Raised when a forward value or an adjoint stops being finite.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, std::size_t node)
      : std::runtime_error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class Tape;
class GradientMap;
void backward(const Tape& tape, NodeRef output, GradientMap& into);

/// Append-only record of a scalar computation. Nodes are stored in
/// topological order; each node keeps its forward value and the local
/// partial derivative with respect to every operand.
///
/// Storage is flat (struct of arrays) so that clearing and re-recording every
/// iteration reuses capacity.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  NodeRef leaf(double value);

  NodeRef record(OpKind kind, std::span<const NodeRef> operands,
                 std::optional<double> constant = std::nullopt);

  /// sum_i a[i] * b[i] + offset (offset optional).
  NodeRef dot(std::span<const NodeRef> a, std::span<const NodeRef> b,
              std::optional<NodeRef> offset = std::nullopt);

  // Fast paths used by Var; they bypass operand-list validation.
  NodeRef push_unary(OpKind kind, NodeRef x, double value, double partial);
  NodeRef push_binary(OpKind kind, NodeRef a, NodeRef b, double value,
                      double partial_a, double partial_b);

  double value(NodeRef node) const { return values_[node.index]; }
  OpKind kind(NodeRef node) const { return kinds_[node.index]; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t edge_count() const noexcept { return operands_.size(); }
  bool contains(NodeRef node) const noexcept { return node.index < values_.size(); }

  std::span<const std::uint32_t> operands(NodeRef node) const;
  std::span<const double> partials(NodeRef node) const;

  /// Drops all nodes; keeps allocated capacity.
  void clear();

 private:
  friend void backward(const Tape& tape, NodeRef output, GradientMap& into);

  NodeRef finish(OpKind kind, double value);
  void check(NodeRef node) const;
  [[noreturn]] void domain_error(OpKind kind, const char* reason) const;

  std::vector<double> values_;
  std::vector<OpKind> kinds_;
  std::vector<std::uint32_t> edge_begin_{0};
  std::vector<std::uint32_t> operands_;
  std::vector<double> partials_;
};

/// Adjoints of one designated output with respect to every tape node.
class GradientMap {
 public:
  GradientMap() = default;
  explicit GradientMap(std::vector<double> adjoints) : adjoints_(std::move(adjoints)) {}

  double operator[](NodeRef node) const { return adjoints_[node.index]; }
  std::size_t size() const noexcept { return adjoints_.size(); }
  std::span<const double> adjoints() const noexcept { return adjoints_; }

 private:
  friend void backward(const Tape& tape, NodeRef output, GradientMap& into);

  std::vector<double> adjoints_;
};

/// Single reverse sweep from `output`. Throws NonFiniteError naming the first
/// node whose adjoint becomes non-finite.
GradientMap backward(const Tape& tape, NodeRef output);

/// Same sweep, reusing the storage of `into`.
void backward(const Tape& tape, NodeRef output, GradientMap& into);

}  // namespace advcol
