#pragma once

#include <memory>
#include <string>

namespace kst {

/// Arithmetic expression over the variables x and y.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-'? atom
///   atom   := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
/// with func in {sin, cos, exp, abs}. Printing emits text that reparses to
/// the identical tree.
class Expression {
 public:
  struct Node {
    enum class Kind { Number, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string func;  // Call only: sin, cos, exp, abs
    std::shared_ptr<const Node> lhs, rhs;
  };

  /// Throws ConfigError with the offending position on syntax errors or
  /// unknown identifiers.
  static Expression parse(const std::string& text);

  double eval(double x, double y) const;
  std::string str() const;

  const Node& root() const { return *root_; }
  bool same_tree(const Expression& o) const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace kst
