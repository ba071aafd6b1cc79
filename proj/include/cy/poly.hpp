#pragma once

#include "cy/linalg.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace cy
{

using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& alpha);

/// All multi-indices of length `dimension` with |alpha| <= degree, in graded
/// lexicographic order: by total degree, then lexicographically descending
/// (x1 before x2 within a degree).
std::vector<MultiIndex> multi_indices(int dimension, int degree);

/// Multi-indices with |alpha| == degree, same relative order.
std::vector<MultiIndex> homogeneous_indices(int dimension, int degree);

/// Enumeration of the monomials of P^d(R^N). Shared between polynomials of the
/// same shape; instances are cached and immutable.
class MonomialBasis
{
public:
  static std::shared_ptr<const MonomialBasis> get(int dimension, int degree);

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<MultiIndex>& exponents() const { return exponents_; }

  /// Position of alpha. Throws ValidationError when |alpha| > degree.
  std::size_t index_of(const MultiIndex& alpha) const;

  MonomialBasis(int dimension, int degree);

private:
  int dimension_;
  int degree_;
  std::vector<MultiIndex> exponents_;
  // offsets_[k] is the position of the first monomial of total degree k
  std::vector<std::size_t> offsets_;
};

/// Dense polynomial in N variables with coefficients stored over every
/// monomial of total degree <= degree().
class MultiPoly
{
public:
  MultiPoly(int dimension, int degree);

  static MultiPoly constant(int dimension, double value);
  static MultiPoly monomial(const MultiIndex& alpha, double coefficient = 1.0);
  /// <linear, x> + constant
  static MultiPoly affine(std::span<const double> linear, double constant);

  int dimension() const { return basis_->dimension(); }
  int degree() const { return basis_->degree(); }
  const MonomialBasis& basis() const { return *basis_; }

  std::span<const double> coefficients() const { return coefficients_; }
  double coefficient(const MultiIndex& alpha) const;
  void set_coefficient(const MultiIndex& alpha, double value);
  void add_to_coefficient(const MultiIndex& alpha, double value);

  /// Direct sum of c_alpha x^alpha with compensated summation.
  double operator()(std::span<const double> x) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(double s);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
  friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  /// Same polynomial with a different degree bound. Throws when lowering the
  /// bound would drop a nonzero coefficient.
  MultiPoly with_degree(int degree) const;
  MultiPoly homogeneous_part(int k) const;
  /// True when every coefficient outside total degree k is at most
  /// tol * max|coefficient|.
  bool is_homogeneous(int k, double tol = 0.0) const;
  /// Largest total degree carrying a coefficient above tol (-1 for zero).
  int effective_degree(double tol = 0.0) const;
  double max_abs_coefficient() const;

  MultiPoly partial(int variable) const;
  /// D_v p = sum_i v_i d/dx_i p.
  MultiPoly directional_derivative(std::span<const double> v) const;

  /// q(y) = p(offset + linear * y), a polynomial in linear.cols() variables.
  MultiPoly compose_affine(std::span<const double> offset, const Matrix& linear) const;

private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<double> coefficients_;
};

/// max_alpha |a_alpha - b_alpha| over the union of both supports.
double max_coefficient_difference(const MultiPoly& a, const MultiPoly& b);

/// Exact integral of q over the standard simplex {xi >= 0, sum xi <= 1} in
/// q.dimension() variables, using int xi^beta = beta! / (|beta| + s)!.
double integrate_over_standard_simplex(const MultiPoly& q);

/// (1/m!) D_{v_1} ... D_{v_m} p for p homogeneous of degree m = vectors.size().
/// Throws ValidationError if p is not homogeneous of that degree.
double polarize(const MultiPoly& p, std::span<const Vector> vectors);

/// Symmetric m-linear form stored through its restriction to the diagonal,
/// p(v) = phi(v, ..., v). Off-diagonal values are recovered by polarization.
class SymmetricForm
{
public:
  explicit SymmetricForm(MultiPoly diagonal);

  int order() const { return order_; }
  int dimension() const { return diagonal_.dimension(); }
  const MultiPoly& diagonal() const { return diagonal_; }

  double operator()(std::span<const Vector> arguments) const;
  double on_diagonal(std::span<const double> v) const { return diagonal_(v); }

private:
  MultiPoly diagonal_;
  int order_;
};

/// Vandermonde determinant det(basis_i(point_j)).
double vandermonde(std::span<const Vector> points, std::span<const MultiPoly> basis);

/// The monomials x^alpha, |alpha| <= degree (or == degree when homogeneous).
std::vector<MultiPoly> monomial_basis(int dimension, int degree, bool homogeneous = false);

} // namespace cy
