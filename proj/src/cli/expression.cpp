#include "cy/cli/expression.hpp"

#include "cy/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace cy::cli
{

using Fn = std::function<double(double)>;

class ExpressionParser
{
public:
  explicit ExpressionParser(const std::string& text) : text_(text) {}

  Expression run()
  {
    Expression e;
    e.eval_ = expr();
    skip();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    e.uses_t_ = uses_t_;
    e.text_ = text_;
    return e;
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;
  bool uses_t_ = false;

  [[noreturn]] void fail(const std::string& what) const
  {
    throw ValidationError("expression \"" + text_ + "\", column " + std::to_string(pos_ + 1) +
                          ": " + what);
  }

  void skip()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c)
  {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn expr()
  {
    Fn left = term();
    for (;;)
    {
      if (accept('+'))
        left = [a = left, b = term()](double t) { return a(t) + b(t); };
      else if (accept('-'))
        left = [a = left, b = term()](double t) { return a(t) - b(t); };
      else
        return left;
    }
  }

  Fn term()
  {
    Fn left = unary();
    for (;;)
    {
      if (accept('*'))
        left = [a = left, b = unary()](double t) { return a(t) * b(t); };
      else if (accept('/'))
        left = [a = left, b = unary()](double t) { return a(t) / b(t); };
      else
        return left;
    }
  }

  Fn unary()
  {
    if (accept('-'))
      return [a = unary()](double t) { return -a(t); };
    if (accept('+'))
      return unary();
    return power();
  }

  Fn power()
  {
    Fn base = primary();
    if (accept('^'))
      return [a = base, b = unary()](double t) { return std::pow(a(t), b(t)); };
    return base;
  }

  Fn primary()
  {
    skip();
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('('))
    {
      Fn inner = expr();
      if (!accept(')'))
        fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
    {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin)
        fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return [v](double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c)))
    {
      std::size_t end = pos_;
      while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end])))
        ++end;
      const std::string word = text_.substr(pos_, end - pos_);
      if (word == "t")
      {
        pos_ = end;
        uses_t_ = true;
        return [](double t) { return t; };
      }
      if (word == "exp")
      {
        pos_ = end;
        if (!accept('('))
          fail("expected '(' after exp");
        Fn inner = expr();
        if (!accept(')'))
          fail("expected ')'");
        return [a = inner](double t) { return std::exp(a(t)); };
      }
      fail("unknown identifier '" + word + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

Expression::Expression(double constant)
    : eval_([constant](double) { return constant; }), text_(std::to_string(constant))
{
}

Expression Expression::parse(const std::string& text)
{
  return ExpressionParser(text).run();
}

} // namespace cy::cli
