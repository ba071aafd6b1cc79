#pragma once

#include "cy/function.hpp"
#include "cy/linalg.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cy
{

/// Quadrature rule on the standard simplex {xi >= 0, sum xi <= 1} of R^s.
struct SimplexRule
{
  int dimension = 0;
  int exactness = 0;
  std::vector<Vector> nodes;
  std::vector<double> weights;
};

/// Grundmann-Moller rule exact for polynomials of total degree <= exactness
/// (rounded up to the next odd degree). Weights sum to 1/s!. Rules are built
/// once and cached. Throws ConfigurationError for s > 16 or exactness > 41.
const SimplexRule& grundmann_moller(int dimension, int exactness);

inline constexpr int max_simplex_dimension = 16;
inline constexpr int max_rule_exactness = 41;

/// int over [A] of g, i.e. int_{Delta_s} g(a_0 + sum xi_i (a_i - a_0)) d xi,
/// with a rule exact to degree_hint.
double simplex_integral(const std::function<double(std::span<const double>)>& g,
                        std::span<const Vector> points, int degree_hint);

/// Same integral computed exactly for a polynomial integrand.
double simplex_integral(const MultiPoly& g, std::span<const Vector> points);

struct DivDiffOptions
{
  /// rule exactness for non-polynomial integrands; 0 selects 2 s + 5
  int quadrature_degree = 0;
  /// bypass the exact polynomial path
  bool force_quadrature = false;
  /// if > 0, raise the rule order by 2 until successive rules differ by at most this
  double tolerance = 0.0;
};

struct DividedDifferenceValue
{
  double value = 0.0;
  /// |Q_D - Q_{D+2}| for the quadrature path, 0 on the exact path
  double error_estimate = 0.0;
  bool exact = false;
};

/// [a_0, ..., a_s | v_1, ..., v_s] f = int_[A] f^{(s)}(.)(v_1, ..., v_s).
/// Points may repeat. Polynomial f takes the exact path.
double divided_difference(const SmoothFunction& f, std::span<const Vector> points,
                          std::span<const Vector> directions, const DivDiffOptions& options = {});

DividedDifferenceValue divided_difference_estimate(const SmoothFunction& f,
                                                   std::span<const Vector> points,
                                                   std::span<const Vector> directions,
                                                   const DivDiffOptions& options = {});

/// Largest change of the divided difference over `samples` random
/// perturbations with |delta a_i| <= epsilon and |delta v_j| <= epsilon.
double divided_difference_continuity_probe(const SmoothFunction& f,
                                           std::span<const Vector> points,
                                           std::span<const Vector> directions, double epsilon,
                                           int samples = 32, std::uint64_t seed = 1,
                                           const DivDiffOptions& options = {});

} // namespace cy
