#pragma once

#include <functional>
#include <string>

namespace cy::cli
{

/// Closed-form expression in the single variable t.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | 't' | 'exp' '(' expr ')' | '(' expr ')'
///
/// Parse errors throw ValidationError naming the column.
class Expression
{
public:
  Expression() = default;
  explicit Expression(double constant);

  static Expression parse(const std::string& text);

  double operator()(double t) const { return eval_(t); }
  bool depends_on_t() const { return uses_t_; }
  const std::string& text() const { return text_; }

private:
  std::function<double(double)> eval_ = [](double) { return 0.0; };
  bool uses_t_ = false;
  std::string text_ = "0";

  friend class ExpressionParser;
};

} // namespace cy::cli
