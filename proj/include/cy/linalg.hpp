#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cy
{

using Vector = std::vector<double>;

/// Row-major dense matrix for the small systems (N <= 8) used throughout.
class Matrix
{
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value)
  {
  }

  static Matrix identity(std::size_t n);
  /// Matrix whose rows are the given vectors.
  static Matrix from_rows(std::span<const Vector> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const;
  Vector apply(std::span<const double> x) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y); // alpha*x + y

/// Determinant by Gaussian elimination with partial pivoting.
double determinant(Matrix a);

/// Solves a x = b with partial pivoting. Throws DegenerateError when a pivot
/// vanishes exactly.
Vector solve(Matrix a, Vector b);

/// Inverse by column-wise solves.
Matrix inverse(const Matrix& a);

/// Neumaier-compensated sum.
class CompensatedSum
{
public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double factorial(int n);
double binomial(int n, int k);

} // namespace cy
