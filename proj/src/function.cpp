#include "cy/function.hpp"

#include "cy/errors.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace cy
{

namespace
{

void check_dimension(const SmoothFunction& f, std::span<const double> x)
{
  if (static_cast<int>(x.size()) != f.dimension())
    throw ValidationError("function evaluated at a point of wrong dimension");
}

class PolynomialFunction final : public SmoothFunction
{
public:
  explicit PolynomialFunction(MultiPoly p) : p_(std::move(p)) {}

  int dimension() const override { return p_.dimension(); }
  double value(std::span<const double> x) const override
  {
    check_dimension(*this, x);
    return p_(x);
  }
  double derivative(std::span<const double> x, std::span<const Vector> directions) const override
  {
    check_dimension(*this, x);
    if (static_cast<int>(directions.size()) > p_.degree())
      return 0.0;
    MultiPoly q = p_;
    for (const Vector& v : directions)
      q = q.directional_derivative(v);
    return q(x);
  }
  const MultiPoly* as_polynomial() const override { return &p_; }
  std::optional<double> derivative_norm_bound(int order, double radius) const override
  {
    // |D_v^m p(a)| <= sum_{|beta|=m} m!/beta! |d^beta p(a)| for |v| = 1, and
    // |d^beta p(a)| <= sum_{alpha >= beta} |c_alpha| alpha!/(alpha-beta)! R^{|alpha-beta|}
    const int n = p_.dimension();
    CompensatedSum total;
    for (const MultiIndex& beta : homogeneous_indices(n, order))
    {
      double beta_factorial = 1.0;
      for (int b : beta)
        beta_factorial *= factorial(b);
      CompensatedSum partial;
      for (std::size_t i = 0; i < p_.coefficients().size(); ++i)
      {
        const MultiIndex& alpha = p_.basis()[i];
        bool dominates = true;
        double falling = 1.0;
        int rest = 0;
        for (int j = 0; j < n && dominates; ++j)
        {
          dominates = alpha[j] >= beta[j];
          if (dominates)
          {
            falling *= factorial(alpha[j]) / factorial(alpha[j] - beta[j]);
            rest += alpha[j] - beta[j];
          }
        }
        if (dominates)
          partial.add(std::abs(p_.coefficients()[i]) * falling * std::pow(radius, rest));
      }
      total.add(factorial(order) / beta_factorial * partial.value());
    }
    return total.value();
  }
  std::string describe() const override { return "polynomial"; }

private:
  MultiPoly p_;
};

class RidgeFunction final : public SmoothFunction
{
public:
  RidgeFunction(RidgeKind kind, Vector c, double shift, double amplitude)
      : kind_(kind), c_(std::move(c)), shift_(shift), amplitude_(amplitude)
  {
  }

  int dimension() const override { return static_cast<int>(c_.size()); }
  double value(std::span<const double> x) const override
  {
    check_dimension(*this, x);
    return amplitude_ * profile(0, dot(c_, x) + shift_);
  }
  double derivative(std::span<const double> x, std::span<const Vector> directions) const override
  {
    check_dimension(*this, x);
    double chain = amplitude_;
    for (const Vector& v : directions)
      chain *= dot(c_, v);
    return chain * profile(static_cast<int>(directions.size()), dot(c_, x) + shift_);
  }
  std::optional<double> derivative_norm_bound(int order, double radius) const override
  {
    // |f^{(k)}(a)(v,...,v)| = |amplitude g^{(k)}(u)| |<c,v>|^k with |u - shift| <= R|c|
    const double cn = norm(c_);
    const double g = kind_ == RidgeKind::exp ? std::exp(shift_ + radius * cn) : 1.0;
    return std::abs(amplitude_) * g * std::pow(cn, order);
  }
  std::string describe() const override
  {
    std::ostringstream os;
    os << (kind_ == RidgeKind::exp ? "exp" : kind_ == RidgeKind::sin ? "sin" : "cos") << "(<c,x>+"
       << shift_ << ")";
    return os.str();
  }

private:
  // k-th derivative of the scalar profile
  double profile(int k, double u) const
  {
    switch (kind_)
    {
    case RidgeKind::exp:
      return std::exp(u);
    case RidgeKind::sin:
      return std::sin(u + k * M_PI / 2);
    case RidgeKind::cos:
      return std::cos(u + k * M_PI / 2);
    }
    return 0.0;
  }

  RidgeKind kind_;
  Vector c_;
  double shift_;
  double amplitude_;
};

class SumFunction final : public SmoothFunction
{
public:
  SumFunction(FunctionPtr a, FunctionPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  int dimension() const override { return a_->dimension(); }
  double value(std::span<const double> x) const override { return a_->value(x) + b_->value(x); }
  double derivative(std::span<const double> x, std::span<const Vector> directions) const override
  {
    return a_->derivative(x, directions) + b_->derivative(x, directions);
  }
  std::optional<int> max_order() const override
  {
    return combine(a_->max_order(), b_->max_order());
  }
  std::optional<double> derivative_norm_bound(int order, double radius) const override
  {
    auto ba = a_->derivative_norm_bound(order, radius);
    auto bb = b_->derivative_norm_bound(order, radius);
    if (!ba || !bb)
      return std::nullopt;
    return *ba + *bb;
  }
  std::string describe() const override { return a_->describe() + " + " + b_->describe(); }

  static std::optional<int> combine(std::optional<int> a, std::optional<int> b)
  {
    if (!a)
      return b;
    if (!b)
      return a;
    return std::min(*a, *b);
  }

private:
  FunctionPtr a_, b_;
};

class ProductFunction final : public SmoothFunction
{
public:
  ProductFunction(FunctionPtr a, FunctionPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  int dimension() const override { return a_->dimension(); }
  double value(std::span<const double> x) const override { return a_->value(x) * b_->value(x); }
  double derivative(std::span<const double> x, std::span<const Vector> directions) const override
  {
    // Leibniz rule over subsets of the direction list
    const std::size_t k = directions.size();
    if (k > 20)
      throw ConfigurationError("product derivative: order too high");
    CompensatedSum sum;
    std::vector<Vector> left, right;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask)
    {
      left.clear();
      right.clear();
      for (std::size_t i = 0; i < k; ++i)
        ((mask >> i) & 1U ? left : right).push_back(directions[i]);
      sum.add(a_->derivative(x, left) * b_->derivative(x, right));
    }
    return sum.value();
  }
  std::optional<int> max_order() const override
  {
    return SumFunction::combine(a_->max_order(), b_->max_order());
  }
  std::optional<double> derivative_norm_bound(int order, double radius) const override
  {
    CompensatedSum sum;
    for (int j = 0; j <= order; ++j)
    {
      auto ba = a_->derivative_norm_bound(j, radius);
      auto bb = b_->derivative_norm_bound(order - j, radius);
      if (!ba || !bb)
        return std::nullopt;
      sum.add(binomial(order, j) * *ba * *bb);
    }
    return sum.value();
  }
  std::string describe() const override
  {
    return "(" + a_->describe() + ") * (" + b_->describe() + ")";
  }

private:
  FunctionPtr a_, b_;
};

class ValueOnlyFunction final : public SmoothFunction
{
public:
  ValueOnlyFunction(int dimension, std::function<double(std::span<const double>)> g,
                    std::string name)
      : dimension_(dimension), g_(std::move(g)), name_(std::move(name))
  {
  }

  int dimension() const override { return dimension_; }
  double value(std::span<const double> x) const override
  {
    check_dimension(*this, x);
    return g_(x);
  }
  double derivative(std::span<const double> x, std::span<const Vector> directions) const override
  {
    if (!directions.empty())
      throw CapabilityError("function '" + name_ + "' provides values only");
    return value(x);
  }
  std::optional<int> max_order() const override { return 0; }
  std::string describe() const override { return name_; }

private:
  int dimension_;
  std::function<double(std::span<const double>)> g_;
  std::string name_;
};

void check_same_dimension(const FunctionPtr& a, const FunctionPtr& b)
{
  if (!a || !b)
    throw ValidationError("null function");
  if (a->dimension() != b->dimension())
    throw ValidationError("combined functions must share the same dimension");
}

} // namespace

void require_order(const SmoothFunction& f, int order)
{
  const auto available = f.max_order();
  if (available && *available < order)
    throw CapabilityError("function '" + f.describe() + "' provides derivatives up to order " +
                          std::to_string(*available) + ", " + std::to_string(order) +
                          " requested");
}

FunctionPtr make_polynomial(MultiPoly p)
{
  return std::make_shared<PolynomialFunction>(std::move(p));
}

FunctionPtr make_monomial(const MultiIndex& alpha)
{
  return make_polynomial(MultiPoly::monomial(alpha));
}

FunctionPtr make_ridge(RidgeKind kind, Vector coefficients, double shift, double amplitude)
{
  if (coefficients.empty())
    throw ValidationError("ridge function needs at least one coefficient");
  return std::make_shared<RidgeFunction>(kind, std::move(coefficients), shift, amplitude);
}

FunctionPtr make_sum(FunctionPtr a, FunctionPtr b)
{
  check_same_dimension(a, b);
  if (a->as_polynomial() && b->as_polynomial())
    return make_polynomial(*a->as_polynomial() + *b->as_polynomial());
  return std::make_shared<SumFunction>(std::move(a), std::move(b));
}

FunctionPtr make_product(FunctionPtr a, FunctionPtr b)
{
  check_same_dimension(a, b);
  if (a->as_polynomial() && b->as_polynomial())
    return make_polynomial(*a->as_polynomial() * *b->as_polynomial());
  return std::make_shared<ProductFunction>(std::move(a), std::move(b));
}

FunctionPtr make_value_only(int dimension, std::function<double(std::span<const double>)> g,
                            std::string name)
{
  return std::make_shared<ValueOnlyFunction>(dimension, std::move(g), std::move(name));
}

MultiPoly taylor(const SmoothFunction& f, std::span<const double> center, int order)
{
  require_order(f, order);
  const int n = f.dimension();
  if (static_cast<int>(center.size()) != n)
    throw ValidationError("taylor: center has wrong dimension");

  // q(y) = sum d^alpha f(a) / alpha! y^alpha, then p(x) = q(x - a)
  MultiPoly q(n, order);
  std::vector<Vector> directions;
  for (const MultiIndex& alpha : q.basis().exponents())
  {
    directions.clear();
    double alpha_factorial = 1.0;
    for (int j = 0; j < n; ++j)
    {
      Vector e(n, 0.0);
      e[j] = 1.0;
      for (int r = 0; r < alpha[j]; ++r)
        directions.push_back(e);
      alpha_factorial *= factorial(alpha[j]);
    }
    q.set_coefficient(alpha, f.derivative(center, directions) / alpha_factorial);
  }
  Vector shift(center.begin(), center.end());
  for (double& c : shift)
    c = -c;
  return q.compose_affine(shift, Matrix::identity(n));
}

SymmetricForm derivative_form(const SmoothFunction& f, std::span<const double> a, int m)
{
  require_order(f, m);
  const int n = f.dimension();
  // diagonal p(v) = f^{(m)}(a)(v,...,v) = sum_{|alpha|=m} m!/alpha! d^alpha f(a) v^alpha
  MultiPoly p(n, m);
  std::vector<Vector> directions;
  for (const MultiIndex& alpha : homogeneous_indices(n, m))
  {
    directions.clear();
    double alpha_factorial = 1.0;
    for (int j = 0; j < n; ++j)
    {
      Vector e(n, 0.0);
      e[j] = 1.0;
      for (int r = 0; r < alpha[j]; ++r)
        directions.push_back(e);
      alpha_factorial *= factorial(alpha[j]);
    }
    p.set_coefficient(alpha, factorial(m) / alpha_factorial * f.derivative(a, directions));
  }
  return SymmetricForm(std::move(p));
}

} // namespace cy
