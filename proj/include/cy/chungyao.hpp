#pragma once

#include "cy/divdiff.hpp"
#include "cy/function.hpp"
#include "cy/geometry.hpp"
#include "cy/poly.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cy
{

/// Fundamental polynomial of vertex i: prod_{l not in H_i} l(x) / l(theta_i),
/// expanded in the monomial basis. Throws DegenerateError when theta_i lies on
/// one of the other hyperplanes.
MultiPoly cardinal_polynomial(const ChungYaoLattice& lattice, std::size_t vertex);

/// Same product evaluated in factored form.
double cardinal_value(const ChungYaoLattice& lattice, std::size_t vertex,
                      std::span<const double> x);

struct Interpolant
{
  MultiPoly polynomial;
  /// data at the vertices, in lattice order
  std::vector<double> values;

  double operator()(std::span<const double> x) const { return polynomial(x); }
};

Interpolant interpolate(const ChungYaoLattice& lattice, std::span<const double> values);
Interpolant interpolate(const ChungYaoLattice& lattice, const SmoothFunction& f);

/// sum_H values[H] l_H(x), each l_H in factored form.
double interpolate_factored(const ChungYaoLattice& lattice, std::span<const double> values,
                            std::span<const double> x);

/// Product polynomial over the first `stage` hyperplanes not in K:
///   prod_{l in H_stage \ K} l(x) / l~(n_K)
/// or, with `homogeneous`, the same with l~(x) in the numerator. `sign`
/// replaces n_K by sign * n_K. stage = d gives the remainder polynomial P_K.
MultiPoly pk_polynomial(const ChungYaoLattice& lattice, const IndexSet& K, std::size_t stage,
                        bool homogeneous = false, double sign = 1.0);
double pk_value(const ChungYaoLattice& lattice, const IndexSet& K, std::size_t stage,
                std::span<const double> x, bool homogeneous = false, double sign = 1.0);

struct RemainderTerm
{
  IndexSet K;
  double pk = 0.0;
  double divided_difference = 0.0;
  double quadrature_error = 0.0;
  double product = 0.0;
};

struct RemainderDecomposition
{
  double function_value = 0.0;
  double interpolant_value = 0.0;
  std::vector<RemainderTerm> terms;

  double correction() const;
  /// |f(x) - L(x) - sum of terms|
  double residual() const;
};

struct RemainderOptions
{
  DivDiffOptions divdiff;
  /// evaluate every term with -n_K in place of n_K
  bool flip_direction_sign = false;
};

/// f(x) = L[Theta; f](x) + sum_K P_K(x) [Theta_K, x | n_K, ..., n_K] f.
RemainderDecomposition deboor_remainder(const ChungYaoLattice& lattice, const SmoothFunction& f,
                                        std::span<const double> x,
                                        const RemainderOptions& options = {});

struct HomogeneousRepresentation
{
  double lhs = 0.0;
  std::vector<double> terms;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

/// phi(v^m) against sum_K P~_K(v) phi(n_K^m), m = d - N + 1.
HomogeneousRepresentation homogeneous_representation(const ChungYaoLattice& lattice,
                                                     const SymmetricForm& phi,
                                                     std::span<const double> v);

struct StageTerm
{
  /// 1-based stage index i, N <= i <= d + 1
  std::size_t stage = 0;
  IndexSet K;
  double pk = 0.0;
  double factor = 0.0;
  double product = 0.0;
};

struct StagedDecomposition
{
  double lhs = 0.0;
  std::vector<StageTerm> terms;

  double total() const;
  double residual() const { return std::abs(lhs - total()); }
  /// Sum of the terms of one stage.
  double stage_sum(std::size_t stage) const;
};

/// Arguments (x^{d-i}, theta_{K + l_i}, n_K^{i-N}) of stage i, with the empty
/// conventions of the staged identity: for i = d + 1 only n_K^{d+1-N}.
std::vector<Vector> stage_arguments(const ChungYaoLattice& lattice, std::size_t stage,
                                    const IndexSet& K, std::span<const double> x);

/// phi(x^m) = sum_{i=N}^{d+1} sum_{K in C(H_{i-1}, N-1)} P^{[i-1]}_K(x) phi(stage args).
StagedDecomposition newton_identity(const ChungYaoLattice& lattice, const SymmetricForm& phi,
                                    std::span<const double> x);

/// f(x) - T_0^{d-N} f(x) decomposed with divided differences at (0, ..., 0, x)
/// in place of phi.
StagedDecomposition taylor_error_decomposition(const ChungYaoLattice& lattice,
                                               const SmoothFunction& f,
                                               std::span<const double> x,
                                               const DivDiffOptions& options = {});

struct TechObservation
{
  IndexSet K_prime;
  IndexSet K;
  double value = 0.0;
  bool contained = false;
};

struct TechObservationReport
{
  std::vector<TechObservation> entries;
  /// largest |value| among pairs with K' not contained in K
  double max_abs = 0.0;
  std::size_t checked = 0;

  bool passed(double tol) const { return max_abs <= tol; }
};

/// For a family of d + 1 hyperplanes: P~^{[d]}_K(n_{K' + l_{d+1}}) for every
/// K in C(H_d, N-1). Pairs with K' in K are recorded but not checked.
TechObservationReport techobserv_check(const ChungYaoLattice& lattice, const IndexSet& K_prime);
/// techobserv_check over every K' in C(H_d, N-2).
TechObservationReport techobserv_check_all(const ChungYaoLattice& lattice);

} // namespace cy
