#include "infharm/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "infharm/error.hpp"

namespace infharm {

namespace detail {

enum class Op { constant, variable, neg, add, sub, mul, div, pow, call };

struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;
  int index = 0;
  std::string function;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

}  // namespace detail

namespace {

using detail::ExprNode;
using detail::Op;
using Node = std::shared_ptr<const ExprNode>;

struct FunctionInfo {
  const char* name;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {{"sin", 1},  {"cos", 1},  {"exp", 1},   {"log", 1},
                                       {"sqrt", 1}, {"atan", 1}, {"atan2", 2}, {"pow", 2}};

Node make(Op op, std::vector<Node> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

Node constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(const std::string& s, int dim, int line, int column) : s_(s), dim_(dim), line_(line), col0_(column) {}

  Node parse() {
    Node n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Op::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Op::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  Node unary() {
    if (accept('-')) return make(Op::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  Node power() {
    Node base = primary();
    if (accept('^')) return make(Op::pow, {base, unary()});
    return base;
  }

  Node primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Node n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Node number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return constant(v);
  }

  Node identifier() {
    const size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "pi") return constant(std::numbers::pi);
    if (name == "e") return constant(std::numbers::e);
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos && name[1] != '0') {
      const int idx = std::stoi(name.substr(1));
      if (idx < 1 || idx > dim_) {
        pos_ = start;
        fail("coordinate " + name + " out of range (dimension " + std::to_string(dim_) + ")");
      }
      auto n = std::make_shared<ExprNode>();
      n->op = Op::variable;
      n->index = idx - 1;
      return n;
    }
    for (const FunctionInfo& f : kFunctions) {
      if (name != f.name) continue;
      if (!accept('(')) fail("expected '(' after " + name);
      std::vector<Node> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')'");
      if (static_cast<int>(args.size()) != f.arity) {
        pos_ = start;
        fail(name + " takes " + std::to_string(f.arity) + " argument(s)");
      }
      auto n = std::make_shared<ExprNode>();
      n->op = Op::call;
      n->function = name;
      n->args = std::move(args);
      return n;
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  const std::string& s_;
  int dim_;
  int line_;
  int col0_;
  size_t pos_ = 0;
};

bool is_constant(const Node& n, double& v) {
  if (n->op != Op::constant) return false;
  v = n->value;
  return true;
}

Jet2 power(const Jet2& a, const Node& exponent, std::span<const Jet2> c);

Jet2 eval(const Node& n, std::span<const Jet2> c) {
  const int dim = c.empty() ? 0 : c[0].dim();
  switch (n->op) {
    case Op::constant: return Jet2(n->value, dim);
    case Op::variable: return c[static_cast<size_t>(n->index)];
    case Op::neg: return -eval(n->args[0], c);
    case Op::add: return eval(n->args[0], c) + eval(n->args[1], c);
    case Op::sub: return eval(n->args[0], c) - eval(n->args[1], c);
    case Op::mul: return eval(n->args[0], c) * eval(n->args[1], c);
    case Op::div: return eval(n->args[0], c) / eval(n->args[1], c);
    case Op::pow: return power(eval(n->args[0], c), n->args[1], c);
    case Op::call: {
      const std::string& f = n->function;
      if (f == "pow") return power(eval(n->args[0], c), n->args[1], c);
      if (f == "atan2") return atan2(eval(n->args[0], c), eval(n->args[1], c));
      const Jet2 a = eval(n->args[0], c);
      if (f == "sin") return sin(a);
      if (f == "cos") return cos(a);
      if (f == "exp") return exp(a);
      if (f == "log") return log(a);
      if (f == "sqrt") return sqrt(a);
      return atan(a);
    }
  }
  return Jet2(0.0, dim);
}

Jet2 power(const Jet2& a, const Node& exponent, std::span<const Jet2> c) {
  double q = 0.0;
  if (is_constant(exponent, q) ||
      (exponent->op == Op::neg && is_constant(exponent->args[0], q) && ((q = -q), true))) {
    return pow(a, q);
  }
  return exp(eval(exponent, c) * log(a));
}

}  // namespace

Expression Expression::parse(const std::string& text, int dim, int line, int column) {
  if (dim < 1 || dim > kMaxJetDim) throw ArgumentError("expression dimension out of range");
  Expression e;
  e.root_ = Parser(text, dim, line, column).parse();
  e.text_ = text;
  e.dim_ = dim;
  return e;
}

Jet2 Expression::evaluate(std::span<const Jet2> coords) const {
  if (static_cast<int>(coords.size()) != dim_) throw ArgumentError("expression evaluated with wrong dimension");
  return eval(root_, coords);
}

double Expression::evaluate(std::span<const double> x) const {
  std::vector<Jet2> c;
  for (double v : x) c.emplace_back(v, 0);
  return evaluate(c).value();
}

}  // namespace infharm
