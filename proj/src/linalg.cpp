#include "cy/linalg.hpp"

#include "cy/errors.hpp"

#include <cassert>
#include <cmath>
#include <utility>

namespace cy
{

Matrix Matrix::identity(std::size_t n)
{
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows)
{
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    if (rows[i].size() != cols)
      throw ValidationError("Matrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transpose() const
{
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::apply(std::span<const double> x) const
{
  if (x.size() != cols_)
    throw ValidationError("Matrix::apply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
  {
    CompensatedSum s;
    for (std::size_t j = 0; j < cols_; ++j)
      s.add((*this)(i, j) * x[j]);
    y[i] = s.value();
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b)
{
  assert(a.size() == b.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i)
    s.add(a[i] * b[i]);
  return s.value();
}

double norm(std::span<const double> a)
{
  double scale = 0.0;
  for (double v : a)
    scale = std::max(scale, std::abs(v));
  if (scale == 0.0)
    return 0.0;
  double s = 0.0;
  for (double v : a)
    s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b)
{
  assert(a.size() == b.size());
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = a[i] - b[i];
  return norm(d);
}

Vector axpy(double alpha, std::span<const double> x, std::span<const double> y)
{
  assert(x.size() == y.size());
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] += alpha * x[i];
  return r;
}

double determinant(Matrix a)
{
  const std::size_t n = a.rows();
  if (n != a.cols())
    throw ValidationError("determinant: matrix is not square");
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k)
  {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k)))
        p = i;
    if (a(p, k) == 0.0)
      return 0.0;
    if (p != k)
    {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i)
    {
      const double m = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= m * a(k, j);
    }
  }
  return det;
}

Vector solve(Matrix a, Vector b)
{
  const std::size_t n = a.rows();
  if (n != a.cols() || b.size() != n)
    throw ValidationError("solve: dimension mismatch");
  for (std::size_t k = 0; k < n; ++k)
  {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k)))
        p = i;
    if (a(p, k) == 0.0)
      throw DegenerateError("solve: singular system");
    if (p != k)
    {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(p, j), a(k, j));
      std::swap(b[p], b[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i)
    {
      const double m = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= m * a(k, j);
      b[i] -= m * b[k];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t k = n; k-- > 0;)
  {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j)
      s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

Matrix inverse(const Matrix& a)
{
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j)
  {
    Vector e(n, 0.0);
    e[j] = 1.0;
    const Vector col = solve(a, e);
    for (std::size_t i = 0; i < n; ++i)
      inv(i, j) = col[i];
  }
  return inv;
}

void CompensatedSum::add(double x)
{
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    compensation_ += (sum_ - t) + x;
  else
    compensation_ += (x - t) + sum_;
  sum_ = t;
}

double factorial(int n)
{
  double f = 1.0;
  for (int i = 2; i <= n; ++i)
    f *= i;
  return f;
}

double binomial(int n, int k)
{
  if (k < 0 || k > n)
    return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return std::round(r);
}

} // namespace cy
