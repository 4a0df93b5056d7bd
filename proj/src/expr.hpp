#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rdde::expr {

/// Syntax error raised by parse(); carries the character offset into the source.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Division by zero, domain fault or non-finite intermediate during evaluation.
class EvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct Node {
  NodeKind kind;
  double value = 0.0;  // Constant only
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

/// Immutable scalar expression in the single variable t.
///
/// The tree is shared and never mutated, so copies are cheap and concurrent
/// evaluation from several threads is safe. A flattened postfix program is
/// built once at construction and used by evaluate().
class Expression {
public:
  Expression();  // the constant 0
  explicit Expression(NodePtr root);

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }

  double evaluate(double t) const;

  /// True when the tree contains no occurrence of t.
  bool is_constant() const noexcept { return constant_; }

private:
  struct Instr {
    NodeKind op;
    double value;
  };

  NodePtr root_;
  std::shared_ptr<const std::vector<Instr>> program_;
  std::size_t stack_depth_ = 0;
  bool constant_ = true;
};

Expression parse(std::string_view source);

/// Evaluates e at t. Throws EvaluationError on division by zero or any
/// non-finite intermediate result.
double evaluate(const Expression& e, double t);

/// Exact symbolic derivative d/dt. Only trivial zero/one folding is applied.
Expression differentiate(const Expression& e);

/// Canonical fully parenthesized text; parse(print(e)) reproduces the tree
/// for every tree produced by parse().
std::string print(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

// Node constructors (no folding).
NodePtr make_constant(double v);
NodePtr make_variable();
NodePtr make_unary(NodeKind kind, NodePtr arg);
NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs);

}  // namespace rdde::expr
