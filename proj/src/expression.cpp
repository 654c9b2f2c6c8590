#include "gasket/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gasket {

struct Expression::Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call } kind;
  double number = 0.0;
  std::size_t slot = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

double (*lookup_function(const std::string& name))(double) {
  if (name == "sin") return [](double v) { return std::sin(v); };
  if (name == "cos") return [](double v) { return std::cos(v); };
  if (name == "tan") return [](double v) { return std::tan(v); };
  if (name == "exp") return [](double v) { return std::exp(v); };
  if (name == "log") return [](double v) { return std::log(v); };
  if (name == "sqrt") return [](double v) { return std::sqrt(v); };
  if (name == "abs") return [](double v) { return std::abs(v); };
  return nullptr;
}

class Parser {
public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (eat('+')) n = make(Kind::Add, n, product());
      else if (eat('-')) n = make(Kind::Sub, n, product());
      else return n;
    }
  }
  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::Mul, n, unary());
      else if (eat('/')) n = make(Kind::Div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Negate, unary());
    if (eat('+')) return unary();
    return power();
  }
  // Right associative; binds tighter than unary minus on its left.
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      NodePtr n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        auto fn = lookup_function(name);
        if (!fn) fail("unknown function '" + name + "'");
        NodePtr arg = sum();
        if (!eat(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Call;
        n->fn = fn;
        n->lhs = arg;
        return n;
      }
      auto n = std::make_shared<Expression::Node>();
      if (name == "pi") {
        n->kind = Kind::Number;
        n->number = std::numbers::pi;
        return n;
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          n->kind = Kind::Variable;
          n->slot = i;
          return n;
        }
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double evaluate(const Expression::Node& n, std::span<const double> v) {
  switch (n.kind) {
    case Kind::Number: return n.number;
    case Kind::Variable: return v[n.slot];
    case Kind::Negate: return -evaluate(*n.lhs, v);
    case Kind::Add: return evaluate(*n.lhs, v) + evaluate(*n.rhs, v);
    case Kind::Sub: return evaluate(*n.lhs, v) - evaluate(*n.rhs, v);
    case Kind::Mul: return evaluate(*n.lhs, v) * evaluate(*n.rhs, v);
    case Kind::Div: return evaluate(*n.lhs, v) / evaluate(*n.rhs, v);
    case Kind::Pow: return std::pow(evaluate(*n.lhs, v), evaluate(*n.rhs, v));
    case Kind::Call: return n.fn(evaluate(*n.lhs, v));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = text;
  e.variables_ = std::move(variables);
  e.root_ = Parser(text, e.variables_).parse();
  return e;
}

double Expression::operator()(std::span<const double> values) const {
  if (values.size() != variables_.size()) throw std::invalid_argument("expression: wrong number of values");
  return evaluate(*root_, values);
}

}  // namespace gasket
