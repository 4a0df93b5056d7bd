#include "expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <functional>
#include <system_error>

namespace rdde::expr {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

NodePtr make_constant(double v) {
  return std::make_shared<const Node>(Node{NodeKind::Constant, v, nullptr, nullptr});
}

NodePtr make_variable() {
  return std::make_shared<const Node>(Node{NodeKind::Variable, 0.0, nullptr, nullptr});
}

NodePtr make_unary(NodeKind kind, NodePtr arg) {
  return std::make_shared<const Node>(Node{kind, 0.0, std::move(arg), nullptr});
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{kind, 0.0, std::move(lhs), std::move(rhs)});
}

namespace {

bool is_binary(NodeKind k) {
  return k == NodeKind::Add || k == NodeKind::Sub || k == NodeKind::Mul ||
         k == NodeKind::Div || k == NodeKind::Pow;
}

bool contains_variable(const Node& n) {
  if (n.kind == NodeKind::Variable) return true;
  if (n.kind == NodeKind::Constant) return false;
  if (contains_variable(*n.lhs)) return true;
  return n.rhs && contains_variable(*n.rhs);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr run() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = parse_sum();
    skip_space();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError("unexpected trailing input", pos_);
    }
    return e;
  }

private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(NodeKind::Negate, parse_unary());
    return parse_power();
  }

  // ^ binds tighter than unary minus on its left and is right-associative;
  // its right operand may itself carry a leading minus (2^-1).
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t exponent_at = pos_;
    NodePtr exponent = parse_unary();
    if (contains_variable(*exponent)) throw ParseError("non-constant exponent", exponent_at);
    return make_binary(NodeKind::Pow, base, exponent);
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("expected operand", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) {
        skip_space();
        throw ParseError(pos_ >= src_.size() ? "unbalanced '(' opened at " + std::to_string(open)
                                             : std::string("expected ')'"),
                         pos_);
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
      ++digits;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++digits;
      }
    }
    if (digits == 0) throw ParseError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        pos_ = p;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw ParseError("malformed number", start);
    }
    return make_constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "t") return make_variable();

    NodeKind kind;
    if (name == "sin") {
      kind = NodeKind::Sin;
    } else if (name == "cos") {
      kind = NodeKind::Cos;
    } else if (name == "exp") {
      kind = NodeKind::Exp;
    } else {
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    if (!accept('(')) {
      skip_space();
      throw ParseError("expected '(' after " + std::string(name), pos_);
    }
    NodePtr arg = parse_sum();
    if (!accept(')')) {
      skip_space();
      throw ParseError("expected ')'", pos_);
    }
    return make_unary(kind, arg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Folding constructors used by differentiate()

bool is_value(const NodePtr& n, double v) {
  return n->kind == NodeKind::Constant && n->value == v;
}

NodePtr neg(NodePtr a) {
  if (is_value(a, 0.0)) return a;
  return make_unary(NodeKind::Negate, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return make_binary(NodeKind::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return neg(std::move(b));
  return make_binary(NodeKind::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_value(a, 0.0) || is_value(b, 0.0)) return make_constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  return make_binary(NodeKind::Mul, std::move(a), std::move(b));
}

NodePtr divide(NodePtr a, NodePtr b) {
  if (is_value(a, 0.0)) return a;
  if (is_value(b, 1.0)) return a;
  return make_binary(NodeKind::Div, std::move(a), std::move(b));
}

NodePtr power(NodePtr base, NodePtr exponent) {
  if (is_value(exponent, 1.0)) return base;
  if (is_value(exponent, 0.0)) return make_constant(1.0);
  return make_binary(NodeKind::Pow, std::move(base), std::move(exponent));
}

NodePtr derive(const NodePtr& n) {
  if (!contains_variable(*n)) return make_constant(0.0);
  switch (n->kind) {
    case NodeKind::Constant:
      return make_constant(0.0);
    case NodeKind::Variable:
      return make_constant(1.0);
    case NodeKind::Negate:
      return neg(derive(n->lhs));
    case NodeKind::Add:
      return add(derive(n->lhs), derive(n->rhs));
    case NodeKind::Sub:
      return sub(derive(n->lhs), derive(n->rhs));
    case NodeKind::Mul:
      return add(mul(derive(n->lhs), n->rhs), mul(n->lhs, derive(n->rhs)));
    case NodeKind::Div:
      return divide(sub(mul(derive(n->lhs), n->rhs), mul(n->lhs, derive(n->rhs))),
                    mul(n->rhs, n->rhs));
    case NodeKind::Pow: {
      // exponent is constant by construction
      const NodePtr& c = n->rhs;
      NodePtr reduced = c->kind == NodeKind::Constant ? make_constant(c->value - 1.0)
                                                      : sub(c, make_constant(1.0));
      return mul(mul(c, power(n->lhs, reduced)), derive(n->lhs));
    }
    case NodeKind::Sin:
      return mul(make_unary(NodeKind::Cos, n->lhs), derive(n->lhs));
    case NodeKind::Cos:
      return mul(neg(make_unary(NodeKind::Sin, n->lhs)), derive(n->lhs));
    case NodeKind::Exp:
      return mul(n, derive(n->lhs));
  }
  return make_constant(0.0);
}

void print_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  const std::string_view text(buf.data(), static_cast<std::size_t>(ptr - buf.data()));
  if (v < 0 || std::signbit(v)) {
    out += "(-";
    out += text.substr(1);
    out += ')';
  } else {
    out += text;
  }
}

void print_node(std::string& out, const Node& n) {
  switch (n.kind) {
    case NodeKind::Constant:
      print_number(out, n.value);
      return;
    case NodeKind::Variable:
      out += 't';
      return;
    case NodeKind::Negate:
      out += "(-";
      print_node(out, *n.lhs);
      out += ')';
      return;
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
      out += n.kind == NodeKind::Sin ? "sin(" : n.kind == NodeKind::Cos ? "cos(" : "exp(";
      print_node(out, *n.lhs);
      out += ')';
      return;
    default:
      break;
  }
  static constexpr std::array<char, 5> ops{'+', '-', '*', '/', '^'};
  const auto op = ops[static_cast<std::size_t>(n.kind) - static_cast<std::size_t>(NodeKind::Add)];
  out += '(';
  print_node(out, *n.lhs);
  out += op;
  print_node(out, *n.rhs);
  out += ')';
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case NodeKind::Variable:
      return true;
    default:
      break;
  }
  if (!equal_nodes(*a.lhs, *b.lhs)) return false;
  return !is_binary(a.kind) || equal_nodes(*a.rhs, *b.rhs);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression

Expression::Expression() : Expression(make_constant(0.0)) {}

Expression::Expression(NodePtr root) : root_(std::move(root)) {
  auto program = std::make_shared<std::vector<Instr>>();
  std::size_t depth = 0;
  std::function<void(const Node&)> emit = [&](const Node& n) {
    if (n.kind == NodeKind::Constant || n.kind == NodeKind::Variable) {
      program->push_back({n.kind, n.value});
      ++depth;
      stack_depth_ = std::max(stack_depth_, depth);
      return;
    }
    emit(*n.lhs);
    if (is_binary(n.kind)) {
      emit(*n.rhs);
      --depth;
    }
    program->push_back({n.kind, 0.0});
  };
  emit(*root_);
  constant_ = !contains_variable(*root_);
  program_ = std::move(program);
}

double Expression::evaluate(double t) const {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (stack_depth_ > kInline) {
    heap_stack.resize(stack_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Instr& in : *program_) {
    double r;
    switch (in.op) {
      case NodeKind::Constant:
        stack[top++] = in.value;
        continue;
      case NodeKind::Variable:
        stack[top++] = t;
        continue;
      case NodeKind::Negate:
        stack[top - 1] = -stack[top - 1];
        continue;
      case NodeKind::Sin:
        r = std::sin(stack[top - 1]);
        break;
      case NodeKind::Cos:
        r = std::cos(stack[top - 1]);
        break;
      case NodeKind::Exp:
        r = std::exp(stack[top - 1]);
        break;
      case NodeKind::Add:
        --top;
        r = stack[top - 1] + stack[top];
        break;
      case NodeKind::Sub:
        --top;
        r = stack[top - 1] - stack[top];
        break;
      case NodeKind::Mul:
        --top;
        r = stack[top - 1] * stack[top];
        break;
      case NodeKind::Div:
        --top;
        if (stack[top] == 0.0) throw EvaluationError("division by zero at t=" + std::to_string(t));
        r = stack[top - 1] / stack[top];
        break;
      case NodeKind::Pow:
        --top;
        r = std::pow(stack[top - 1], stack[top]);
        break;
      default:
        r = 0.0;
        break;
    }
    if (!std::isfinite(r)) throw EvaluationError("non-finite result at t=" + std::to_string(t));
    stack[top - 1] = r;
  }
  return stack[0];
}

Expression parse(std::string_view source) { return Expression(Parser(source).run()); }

double evaluate(const Expression& e, double t) { return e.evaluate(t); }

Expression differentiate(const Expression& e) { return Expression(derive(e.root_ptr())); }

std::string print(const Expression& e) {
  std::string out;
  print_node(out, e.root());
  return out;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  return equal_nodes(a.root(), b.root());
}

}  // namespace rdde::expr
