#pragma once

// Tiny expression language for map descriptions:
//   numbers, pi, e, x1..xd, + - * / ^ (right associative), unary minus,
//   sin cos exp log sqrt atan atan2 pow.

#include <memory>
#include <span>
#include <string>

#include "infharm/jet.hpp"

namespace infharm {

namespace detail {
struct ExprNode;
}

class Expression {
 public:
  /// Throws ParseError with a 1-based position; `line` and `column` locate
  /// the first character of `text` in the enclosing file.
  static Expression parse(const std::string& text, int dim, int line = 1, int column = 1);

  Jet2 evaluate(std::span<const Jet2> coords) const;
  double evaluate(std::span<const double> x) const;

  const std::string& text() const { return text_; }
  int dim() const { return dim_; }

 private:
  std::shared_ptr<const detail::ExprNode> root_;
  std::string text_;
  int dim_ = 0;
};

}  // namespace infharm
