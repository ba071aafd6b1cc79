#include "cy/poly.hpp"

#include "cy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

namespace cy
{

namespace
{

// Number of alpha in N^n with |alpha| == r.
std::size_t composition_count(int n, int r)
{
  if (n == 0)
    return r == 0 ? 1 : 0;
  return static_cast<std::size_t>(binomial(r + n - 1, n - 1));
}

void append_homogeneous(int dimension, int degree, MultiIndex& prefix,
                        std::vector<MultiIndex>& out)
{
  const int used = static_cast<int>(prefix.size());
  if (used == dimension)
  {
    if (degree == 0)
      out.push_back(prefix);
    return;
  }
  if (used == dimension - 1)
  {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = degree; a >= 0; --a)
  {
    prefix.push_back(a);
    append_homogeneous(dimension, degree - a, prefix, out);
    prefix.pop_back();
  }
}

} // namespace

int total_degree(const MultiIndex& alpha)
{
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

std::vector<MultiIndex> homogeneous_indices(int dimension, int degree)
{
  if (dimension < 0 || degree < 0)
    throw ValidationError("homogeneous_indices: negative dimension or degree");
  std::vector<MultiIndex> out;
  MultiIndex prefix;
  append_homogeneous(dimension, degree, prefix, out);
  return out;
}

std::vector<MultiIndex> multi_indices(int dimension, int degree)
{
  std::vector<MultiIndex> out;
  for (int k = 0; k <= degree; ++k)
  {
    auto block = homogeneous_indices(dimension, k);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

//-----------------------------------------------------------------------------

MonomialBasis::MonomialBasis(int dimension, int degree)
    : dimension_(dimension), degree_(degree)
{
  if (dimension < 0 || degree < 0)
    throw ValidationError("MonomialBasis: negative dimension or degree");
  offsets_.reserve(static_cast<std::size_t>(degree) + 2);
  for (int k = 0; k <= degree; ++k)
  {
    offsets_.push_back(exponents_.size());
    auto block = homogeneous_indices(dimension, k);
    exponents_.insert(exponents_.end(), block.begin(), block.end());
  }
  offsets_.push_back(exponents_.size());
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int dimension, int degree)
{
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, degree}];
  if (!slot)
    slot = std::make_shared<const MonomialBasis>(dimension, degree);
  return slot;
}

std::size_t MonomialBasis::index_of(const MultiIndex& alpha) const
{
  if (static_cast<int>(alpha.size()) != dimension_)
    throw ValidationError("MonomialBasis::index_of: wrong multi-index length");
  const int k = total_degree(alpha);
  if (k > degree_)
    throw ValidationError("MonomialBasis::index_of: |alpha| exceeds degree bound");
  std::size_t rank = 0;
  int remaining = k;
  for (int i = 0; i + 1 < dimension_; ++i)
  {
    for (int b = alpha[i] + 1; b <= remaining; ++b)
      rank += composition_count(dimension_ - i - 1, remaining - b);
    remaining -= alpha[i];
  }
  return offsets_[k] + rank;
}

//-----------------------------------------------------------------------------

MultiPoly::MultiPoly(int dimension, int degree)
    : basis_(MonomialBasis::get(dimension, degree)), coefficients_(basis_->size(), 0.0)
{
}

MultiPoly MultiPoly::constant(int dimension, double value)
{
  MultiPoly p(dimension, 0);
  p.coefficients_[0] = value;
  return p;
}

MultiPoly MultiPoly::monomial(const MultiIndex& alpha, double coefficient)
{
  MultiPoly p(static_cast<int>(alpha.size()), total_degree(alpha));
  p.set_coefficient(alpha, coefficient);
  return p;
}

MultiPoly MultiPoly::affine(std::span<const double> linear, double constant)
{
  const int n = static_cast<int>(linear.size());
  MultiPoly p(n, 1);
  p.coefficients_[0] = constant;
  // degree-1 block is e_1, ..., e_N in that order
  for (int i = 0; i < n; ++i)
    p.coefficients_[1 + i] = linear[i];
  return p;
}

double MultiPoly::coefficient(const MultiIndex& alpha) const
{
  if (total_degree(alpha) > degree())
    return 0.0;
  return coefficients_[basis_->index_of(alpha)];
}

void MultiPoly::set_coefficient(const MultiIndex& alpha, double value)
{
  coefficients_[basis_->index_of(alpha)] = value;
}

void MultiPoly::add_to_coefficient(const MultiIndex& alpha, double value)
{
  coefficients_[basis_->index_of(alpha)] += value;
}

double MultiPoly::operator()(std::span<const double> x) const
{
  const int n = dimension();
  if (static_cast<int>(x.size()) != n)
    throw ValidationError("MultiPoly: evaluation point has wrong dimension");
  const int d = degree();
  // powers[j][e] = x_j^e
  std::vector<std::vector<double>> powers(n, std::vector<double>(d + 1, 1.0));
  for (int j = 0; j < n; ++j)
    for (int e = 1; e <= d; ++e)
      powers[j][e] = powers[j][e - 1] * x[j];
  CompensatedSum sum;
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
  {
    if (coefficients_[i] == 0.0)
      continue;
    const MultiIndex& alpha = (*basis_)[i];
    double term = coefficients_[i];
    for (int j = 0; j < n; ++j)
      term *= powers[j][alpha[j]];
    sum.add(term);
  }
  return sum.value();
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other)
{
  if (other.dimension() != dimension())
    throw ValidationError("MultiPoly: dimension mismatch in addition");
  if (other.degree() > degree())
    *this = with_degree(other.degree());
  for (std::size_t i = 0; i < other.coefficients_.size(); ++i)
    coefficients_[basis_->index_of(other.basis()[i])] += other.coefficients_[i];
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other)
{
  return *this += other * -1.0;
}

MultiPoly& MultiPoly::operator*=(double s)
{
  for (double& c : coefficients_)
    c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b)
{
  if (a.dimension() != b.dimension())
    throw ValidationError("MultiPoly: dimension mismatch in product");
  const int n = a.dimension();
  MultiPoly r(n, a.degree() + b.degree());
  MultiIndex gamma(n);
  for (std::size_t i = 0; i < a.coefficients_.size(); ++i)
  {
    const double ca = a.coefficients_[i];
    if (ca == 0.0)
      continue;
    const MultiIndex& alpha = a.basis()[i];
    for (std::size_t j = 0; j < b.coefficients_.size(); ++j)
    {
      const double cb = b.coefficients_[j];
      if (cb == 0.0)
        continue;
      const MultiIndex& beta = b.basis()[j];
      for (int k = 0; k < n; ++k)
        gamma[k] = alpha[k] + beta[k];
      r.coefficients_[r.basis_->index_of(gamma)] += ca * cb;
    }
  }
  return r;
}

MultiPoly MultiPoly::with_degree(int new_degree) const
{
  MultiPoly r(dimension(), new_degree);
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
  {
    const MultiIndex& alpha = (*basis_)[i];
    if (total_degree(alpha) > new_degree)
    {
      if (coefficients_[i] != 0.0)
        throw ValidationError("MultiPoly::with_degree: would drop a nonzero coefficient");
      continue;
    }
    r.coefficients_[r.basis_->index_of(alpha)] = coefficients_[i];
  }
  return r;
}

MultiPoly MultiPoly::homogeneous_part(int k) const
{
  MultiPoly r(dimension(), k);
  if (k > degree())
    return r;
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
  {
    const MultiIndex& alpha = (*basis_)[i];
    if (total_degree(alpha) == k)
      r.coefficients_[r.basis_->index_of(alpha)] = coefficients_[i];
  }
  return r;
}

bool MultiPoly::is_homogeneous(int k, double tol) const
{
  const double scale = max_abs_coefficient();
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
    if (total_degree((*basis_)[i]) != k && std::abs(coefficients_[i]) > tol * scale)
      return false;
  return true;
}

int MultiPoly::effective_degree(double tol) const
{
  int deg = -1;
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
    if (std::abs(coefficients_[i]) > tol)
      deg = std::max(deg, total_degree((*basis_)[i]));
  return deg;
}

double MultiPoly::max_abs_coefficient() const
{
  double m = 0.0;
  for (double c : coefficients_)
    m = std::max(m, std::abs(c));
  return m;
}

MultiPoly MultiPoly::partial(int variable) const
{
  const int n = dimension();
  if (variable < 0 || variable >= n)
    throw ValidationError("MultiPoly::partial: variable out of range");
  MultiPoly r(n, std::max(degree() - 1, 0));
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
  {
    MultiIndex alpha = (*basis_)[i];
    if (alpha[variable] == 0 || coefficients_[i] == 0.0)
      continue;
    const double c = coefficients_[i] * alpha[variable];
    --alpha[variable];
    r.coefficients_[r.basis_->index_of(alpha)] += c;
  }
  return r;
}

MultiPoly MultiPoly::directional_derivative(std::span<const double> v) const
{
  const int n = dimension();
  if (static_cast<int>(v.size()) != n)
    throw ValidationError("MultiPoly::directional_derivative: wrong direction dimension");
  MultiPoly r(n, std::max(degree() - 1, 0));
  for (int j = 0; j < n; ++j)
    if (v[j] != 0.0)
      r += partial(j) * v[j];
  return r;
}

MultiPoly MultiPoly::compose_affine(std::span<const double> offset, const Matrix& linear) const
{
  const int n = dimension();
  if (static_cast<int>(offset.size()) != n || static_cast<int>(linear.rows()) != n)
    throw ValidationError("MultiPoly::compose_affine: shape mismatch");
  const int s = static_cast<int>(linear.cols());
  const int d = degree();

  std::vector<std::vector<MultiPoly>> powers;
  powers.reserve(n);
  for (int j = 0; j < n; ++j)
  {
    Vector row(s);
    for (int k = 0; k < s; ++k)
      row[k] = linear(j, k);
    const MultiPoly xj = MultiPoly::affine(row, offset[j]);
    std::vector<MultiPoly> pj{MultiPoly::constant(s, 1.0)};
    for (int e = 1; e <= d; ++e)
      pj.push_back(pj.back() * xj);
    powers.push_back(std::move(pj));
  }

  MultiPoly r(s, d);
  for (std::size_t i = 0; i < coefficients_.size(); ++i)
  {
    if (coefficients_[i] == 0.0)
      continue;
    const MultiIndex& alpha = (*basis_)[i];
    MultiPoly term = MultiPoly::constant(s, coefficients_[i]);
    for (int j = 0; j < n; ++j)
      if (alpha[j] > 0)
        term = term * powers[j][alpha[j]];
    r += term;
  }
  return r;
}

double max_coefficient_difference(const MultiPoly& a, const MultiPoly& b)
{
  const int d = std::max(a.degree(), b.degree());
  const MultiPoly diff = a.with_degree(std::max(a.degree(), d)) - b;
  return diff.max_abs_coefficient();
}

double integrate_over_standard_simplex(const MultiPoly& q)
{
  const int s = q.dimension();
  CompensatedSum sum;
  for (std::size_t i = 0; i < q.coefficients().size(); ++i)
  {
    const double c = q.coefficients()[i];
    if (c == 0.0)
      continue;
    const MultiIndex& beta = q.basis()[i];
    double num = 1.0;
    for (int b : beta)
      num *= factorial(b);
    sum.add(c * num / factorial(total_degree(beta) + s));
  }
  return sum.value();
}

double polarize(const MultiPoly& p, std::span<const Vector> vectors)
{
  const int m = static_cast<int>(vectors.size());
  if (!p.is_homogeneous(m, 1e-14))
    throw ValidationError("polarize: polynomial is not homogeneous of degree " +
                          std::to_string(m));
  MultiPoly q = p.homogeneous_part(m);
  for (const Vector& v : vectors)
    q = q.directional_derivative(v);
  return q.coefficients()[0] / factorial(m);
}

SymmetricForm::SymmetricForm(MultiPoly diagonal)
    : diagonal_(std::move(diagonal)), order_(diagonal_.degree())
{
  if (!diagonal_.is_homogeneous(order_, 1e-14))
    throw ValidationError("SymmetricForm: diagonal polynomial must be homogeneous");
}

double SymmetricForm::operator()(std::span<const Vector> arguments) const
{
  if (static_cast<int>(arguments.size()) != order_)
    throw ValidationError("SymmetricForm: expected " + std::to_string(order_) + " arguments");
  return polarize(diagonal_, arguments);
}

double vandermonde(std::span<const Vector> points, std::span<const MultiPoly> basis)
{
  if (points.size() != basis.size())
    throw ValidationError("vandermonde: number of points and basis functions differ");
  const std::size_t m = points.size();
  Matrix v(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      v(i, j) = basis[i](points[j]);
  return determinant(std::move(v));
}

std::vector<MultiPoly> monomial_basis(int dimension, int degree, bool homogeneous)
{
  const auto exps = homogeneous ? homogeneous_indices(dimension, degree)
                                : multi_indices(dimension, degree);
  std::vector<MultiPoly> out;
  out.reserve(exps.size());
  for (const auto& alpha : exps)
    out.push_back(MultiPoly::monomial(alpha));
  return out;
}

} // namespace cy
