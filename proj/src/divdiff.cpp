#include "cy/divdiff.hpp"

#include "cy/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>

namespace cy
{

namespace
{

SimplexRule build_grundmann_moller(int s, int exactness)
{
  const int q = (exactness - 1) / 2;
  const int d = 2 * q + 1;
  SimplexRule rule;
  rule.dimension = s;
  rule.exactness = d;
  for (int i = 0; i <= q; ++i)
  {
    const double denom = d + s - 2 * i;
    double w = std::ldexp(1.0, -2 * q) * std::pow(denom, d) / (factorial(i) * factorial(d + s - i));
    if (i % 2)
      w = -w;
    for (const MultiIndex& beta : homogeneous_indices(s + 1, q - i))
    {
      // barycentric coordinates (2 beta_j + 1) / denom; drop the first
      Vector node(s);
      for (int j = 0; j < s; ++j)
        node[j] = (2.0 * beta[j + 1] + 1.0) / denom;
      rule.nodes.push_back(std::move(node));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

Matrix edge_matrix(std::span<const Vector> points)
{
  const std::size_t n = points.front().size();
  const std::size_t s = points.size() - 1;
  Matrix m(n, s);
  for (std::size_t k = 0; k < s; ++k)
  {
    if (points[k + 1].size() != n)
      throw ValidationError("simplex integral: points of mixed dimension");
    for (std::size_t j = 0; j < n; ++j)
      m(j, k) = points[k + 1][j] - points[0][j];
  }
  return m;
}

int default_degree(int s, const DivDiffOptions& options)
{
  return options.quadrature_degree > 0 ? options.quadrature_degree : 2 * s + 5;
}

} // namespace

const SimplexRule& grundmann_moller(int dimension, int exactness)
{
  if (dimension < 0 || dimension > max_simplex_dimension)
    throw ConfigurationError("grundmann_moller: simplex dimension " + std::to_string(dimension) +
                             " not supported (max " + std::to_string(max_simplex_dimension) + ")");
  exactness = std::max(exactness, 1);
  if (exactness > max_rule_exactness)
    throw ConfigurationError("grundmann_moller: exactness " + std::to_string(exactness) +
                             " not supported (max " + std::to_string(max_rule_exactness) + ")");
  if (exactness % 2 == 0)
    ++exactness;

  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const SimplexRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, exactness}];
  if (!slot)
    slot = std::make_unique<const SimplexRule>(build_grundmann_moller(dimension, exactness));
  return *slot;
}

double simplex_integral(const std::function<double(std::span<const double>)>& g,
                        std::span<const Vector> points, int degree_hint)
{
  if (points.empty())
    throw ValidationError("simplex_integral: no points");
  const int s = static_cast<int>(points.size()) - 1;
  if (s == 0)
    return g(points[0]);
  const SimplexRule& rule = grundmann_moller(s, degree_hint);
  const Matrix m = edge_matrix(points);
  CompensatedSum sum;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
  {
    const Vector offset = m.apply(rule.nodes[q]);
    Vector x = points[0];
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] += offset[j];
    sum.add(rule.weights[q] * g(x));
  }
  return sum.value();
}

double simplex_integral(const MultiPoly& g, std::span<const Vector> points)
{
  if (points.empty())
    throw ValidationError("simplex_integral: no points");
  if (points.size() == 1)
    return g(points[0]);
  const MultiPoly q = g.compose_affine(points[0], edge_matrix(points));
  return integrate_over_standard_simplex(q);
}

DividedDifferenceValue divided_difference_estimate(const SmoothFunction& f,
                                                   std::span<const Vector> points,
                                                   std::span<const Vector> directions,
                                                   const DivDiffOptions& options)
{
  if (points.empty() || points.size() != directions.size() + 1)
    throw ValidationError("divided_difference: need s+1 points and s directions");
  const int s = static_cast<int>(directions.size());
  require_order(f, s);
  for (const Vector& p : points)
    if (static_cast<int>(p.size()) != f.dimension())
      throw ValidationError("divided_difference: point of wrong dimension");

  if (const MultiPoly* p = f.as_polynomial(); p && !options.force_quadrature)
  {
    MultiPoly g = *p;
    for (const Vector& v : directions)
      g = g.directional_derivative(v);
    return {simplex_integral(g, points), 0.0, true};
  }

  const auto integrand = [&](std::span<const double> x) { return f.derivative(x, directions); };
  int degree = default_degree(s, options);
  double value = simplex_integral(integrand, points, degree);
  double estimate = 0.0;
  while (s > 0 && degree + 2 <= max_rule_exactness)
  {
    const double next = simplex_integral(integrand, points, degree + 2);
    estimate = std::abs(next - value);
    if (options.tolerance <= 0.0)
      break;
    value = next;
    degree += 2;
    if (estimate <= options.tolerance)
      break;
  }
  return {value, estimate, false};
}

double divided_difference(const SmoothFunction& f, std::span<const Vector> points,
                          std::span<const Vector> directions, const DivDiffOptions& options)
{
  if (points.empty() || points.size() != directions.size() + 1)
    throw ValidationError("divided_difference: need s+1 points and s directions");
  const int s = static_cast<int>(directions.size());
  require_order(f, s);
  if (const MultiPoly* p = f.as_polynomial(); p && !options.force_quadrature)
  {
    MultiPoly g = *p;
    for (const Vector& v : directions)
      g = g.directional_derivative(v);
    return simplex_integral(g, points);
  }
  if (options.tolerance > 0.0)
    return divided_difference_estimate(f, points, directions, options).value;
  return simplex_integral([&](std::span<const double> x) { return f.derivative(x, directions); },
                          points, default_degree(s, options));
}

double divided_difference_continuity_probe(const SmoothFunction& f,
                                           std::span<const Vector> points,
                                           std::span<const Vector> directions, double epsilon,
                                           int samples, std::uint64_t seed,
                                           const DivDiffOptions& options)
{
  const double base = divided_difference(f, points, directions, options);
  if (epsilon == 0.0)
    return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  const auto perturb = [&](const Vector& v) {
    Vector dir(v.size());
    for (double& c : dir)
      c = gauss(rng);
    const double n = norm(dir);
    const double r = epsilon * std::pow(unit(rng), 1.0 / static_cast<double>(v.size()));
    return n > 0.0 ? axpy(r / n, dir, v) : v;
  };
  double worst = 0.0;
  std::vector<Vector> a(points.begin(), points.end());
  std::vector<Vector> v(directions.begin(), directions.end());
  for (int k = 0; k < samples; ++k)
  {
    for (std::size_t i = 0; i < points.size(); ++i)
      a[i] = perturb(points[i]);
    for (std::size_t j = 0; j < directions.size(); ++j)
      v[j] = perturb(directions[j]);
    worst = std::max(worst, std::abs(divided_difference(f, a, v, options) - base));
  }
  return worst;
}

} // namespace cy
