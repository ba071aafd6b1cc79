#include "cy/chungyao.hpp"

#include "cy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cy
{

namespace
{

bool contains(const IndexSet& H, std::size_t i)
{
  return std::binary_search(H.begin(), H.end(), i);
}

double checked_denominator(double value, const std::string& what)
{
  if (value == 0.0 || !std::isfinite(value))
    throw DegenerateError(what);
  return value;
}

void check_stage(const ChungYaoLattice& lattice, const IndexSet& K, std::size_t stage)
{
  if (stage > lattice.family().size())
    throw ValidationError("stage exceeds family size");
  if (!K.empty() && K.back() >= stage)
    throw ValidationError("K " + to_string(K) + " is not contained in the first " +
                          std::to_string(stage) + " hyperplanes");
}

Vector scaled_direction(const ChungYaoLattice& lattice, const IndexSet& K, double sign)
{
  Vector nk = lattice.direction(K);
  for (double& c : nk)
    c *= sign;
  return nk;
}

} // namespace

MultiPoly cardinal_polynomial(const ChungYaoLattice& lattice, std::size_t vertex)
{
  const IndexSet& H = lattice.subsets().at(vertex);
  const Vector& theta = lattice.vertex(vertex);
  MultiPoly l = MultiPoly::constant(lattice.dimension(), 1.0);
  for (std::size_t j = 0; j < lattice.family().size(); ++j)
  {
    if (contains(H, j))
      continue;
    const Hyperplane& h = lattice.family()[j];
    const double den = h(theta);
    if (std::abs(den) <= 1e-14 * (1.0 + norm(theta)))
      throw DegenerateError("cardinal_polynomial: vertex " + to_string(H) +
                            " lies on hyperplane " + std::to_string(j + 1));
    l = l * (h.as_polynomial() * (1.0 / den));
  }
  return l.with_degree(std::max(lattice.degree(), 0));
}

double cardinal_value(const ChungYaoLattice& lattice, std::size_t vertex,
                      std::span<const double> x)
{
  const IndexSet& H = lattice.subsets().at(vertex);
  const Vector& theta = lattice.vertex(vertex);
  double v = 1.0;
  for (std::size_t j = 0; j < lattice.family().size(); ++j)
  {
    if (contains(H, j))
      continue;
    const Hyperplane& h = lattice.family()[j];
    v *= h(x) / checked_denominator(h(theta), "cardinal_value: vertex on extra hyperplane");
  }
  return v;
}

Interpolant interpolate(const ChungYaoLattice& lattice, std::span<const double> values)
{
  if (values.size() != lattice.size())
    throw ValidationError("interpolate: expected " + std::to_string(lattice.size()) + " values");
  std::vector<MultiPoly> cardinals;
  cardinals.reserve(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i)
    cardinals.push_back(cardinal_polynomial(lattice, i));
  const auto combine = [&](std::span<const double> data) {
    MultiPoly q(lattice.dimension(), std::max(lattice.degree(), 0));
    std::vector<CompensatedSum> sums(q.basis().size());
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i] != 0.0)
        for (std::size_t k = 0; k < sums.size(); ++k)
          sums[k].add(cardinals[i].coefficients()[k] * data[i]);
    for (std::size_t k = 0; k < sums.size(); ++k)
      q.set_coefficient(q.basis()[k], sums[k].value());
    return q;
  };
  MultiPoly p = combine(values);
  // one refinement step on the residual at the vertices
  std::vector<double> residual(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    residual[i] = values[i] - p(lattice.vertex(i));
  p += combine(residual);
  return {std::move(p), std::vector<double>(values.begin(), values.end())};
}

Interpolant interpolate(const ChungYaoLattice& lattice, const SmoothFunction& f)
{
  if (f.dimension() != lattice.dimension())
    throw ValidationError("interpolate: function dimension differs from lattice dimension");
  std::vector<double> values;
  values.reserve(lattice.size());
  for (const Vector& theta : lattice.vertices())
    values.push_back(f.value(theta));
  return interpolate(lattice, values);
}

double interpolate_factored(const ChungYaoLattice& lattice, std::span<const double> values,
                            std::span<const double> x)
{
  if (values.size() != lattice.size())
    throw ValidationError("interpolate_factored: value count mismatch");
  CompensatedSum sum;
  for (std::size_t i = 0; i < lattice.size(); ++i)
    sum.add(values[i] * cardinal_value(lattice, i, x));
  return sum.value();
}

MultiPoly pk_polynomial(const ChungYaoLattice& lattice, const IndexSet& K, std::size_t stage,
                        bool homogeneous, double sign)
{
  check_stage(lattice, K, stage);
  const Vector nk = scaled_direction(lattice, K, sign);
  MultiPoly p = MultiPoly::constant(lattice.dimension(), 1.0);
  for (std::size_t j = 0; j < stage; ++j)
  {
    if (contains(K, j))
      continue;
    const Hyperplane& h = lattice.family()[j];
    const double den = checked_denominator(h.linear(nk), "pk_polynomial: l~(n_K) vanishes");
    p = p * ((homogeneous ? h.linear_polynomial() : h.as_polynomial()) * (1.0 / den));
  }
  return p;
}

double pk_value(const ChungYaoLattice& lattice, const IndexSet& K, std::size_t stage,
                std::span<const double> x, bool homogeneous, double sign)
{
  check_stage(lattice, K, stage);
  const Vector nk = scaled_direction(lattice, K, sign);
  double v = 1.0;
  for (std::size_t j = 0; j < stage; ++j)
  {
    if (contains(K, j))
      continue;
    const Hyperplane& h = lattice.family()[j];
    const double num = homogeneous ? h.linear(x) : h(x);
    v *= num / checked_denominator(h.linear(nk), "pk_value: l~(n_K) vanishes");
  }
  return v;
}

//-----------------------------------------------------------------------------

double RemainderDecomposition::correction() const
{
  CompensatedSum s;
  for (const RemainderTerm& t : terms)
    s.add(t.product);
  return s.value();
}

double RemainderDecomposition::residual() const
{
  CompensatedSum s;
  s.add(function_value);
  s.add(-interpolant_value);
  for (const RemainderTerm& t : terms)
    s.add(-t.product);
  return std::abs(s.value());
}

RemainderDecomposition deboor_remainder(const ChungYaoLattice& lattice, const SmoothFunction& f,
                                        std::span<const double> x,
                                        const RemainderOptions& options)
{
  const int m = lattice.degree() + 1;
  require_order(f, m);
  if (static_cast<int>(x.size()) != lattice.dimension())
    throw ValidationError("deboor_remainder: point of wrong dimension");
  const double sign = options.flip_direction_sign ? -1.0 : 1.0;

  RemainderDecomposition out;
  out.function_value = f.value(x);
  std::vector<double> values;
  for (const Vector& theta : lattice.vertices())
    values.push_back(f.value(theta));
  out.interpolant_value = interpolate_factored(lattice, values, x);

  const std::size_t d = lattice.family().size();
  for (const LineSubset& ls : lattice.line_subsets())
  {
    RemainderTerm term;
    term.K = ls.K;
    term.pk = pk_value(lattice, ls.K, d, x, false, sign);
    std::vector<Vector> points = ls.points;
    points.emplace_back(x.begin(), x.end());
    const std::vector<Vector> directions(m, scaled_direction(lattice, ls.K, sign));
    const auto dd = divided_difference_estimate(f, points, directions, options.divdiff);
    term.divided_difference = dd.value;
    term.quadrature_error = dd.error_estimate;
    term.product = term.pk * term.divided_difference;
    out.terms.push_back(std::move(term));
  }
  return out;
}

HomogeneousRepresentation homogeneous_representation(const ChungYaoLattice& lattice,
                                                     const SymmetricForm& phi,
                                                     std::span<const double> v)
{
  const int m = lattice.degree() + 1;
  if (phi.order() != m)
    throw ValidationError("homogeneous_representation: form of order " +
                          std::to_string(phi.order()) + ", expected " + std::to_string(m));
  HomogeneousRepresentation out;
  out.lhs = phi.on_diagonal(v);
  const std::size_t d = lattice.family().size();
  CompensatedSum sum;
  for (const IndexSet& K : lattice.line_sets())
  {
    const Vector& nk = lattice.direction(K);
    const double term = pk_value(lattice, K, d, v, true) * phi.on_diagonal(nk);
    out.terms.push_back(term);
    sum.add(term);
  }
  out.rhs = sum.value();
  return out;
}

//-----------------------------------------------------------------------------

double StagedDecomposition::total() const
{
  CompensatedSum s;
  for (const StageTerm& t : terms)
    s.add(t.product);
  return s.value();
}

double StagedDecomposition::stage_sum(std::size_t stage) const
{
  CompensatedSum s;
  for (const StageTerm& t : terms)
    if (t.stage == stage)
      s.add(t.product);
  return s.value();
}

std::vector<Vector> stage_arguments(const ChungYaoLattice& lattice, std::size_t stage,
                                    const IndexSet& K, std::span<const double> x)
{
  const std::size_t n = static_cast<std::size_t>(lattice.dimension());
  const std::size_t d = lattice.family().size();
  if (stage < n || stage > d + 1)
    throw ValidationError("stage_arguments: stage out of range");
  std::vector<Vector> args;
  const Vector& nk = lattice.direction(K);
  if (stage == d + 1)
  {
    args.assign(d + 1 - n, nk);
    return args;
  }
  for (std::size_t r = 0; r < d - stage; ++r)
    args.emplace_back(x.begin(), x.end());
  // l_i has 0-based index stage - 1
  args.push_back(lattice.vertex(insert_sorted(K, stage - 1)));
  for (std::size_t r = 0; r < stage - n; ++r)
    args.push_back(nk);
  return args;
}

namespace
{

template <class Factor>
StagedDecomposition staged(const ChungYaoLattice& lattice, std::span<const double> x,
                           double lhs, Factor&& factor)
{
  const std::size_t n = static_cast<std::size_t>(lattice.dimension());
  const std::size_t d = lattice.family().size();
  StagedDecomposition out;
  out.lhs = lhs;
  for (std::size_t i = n; i <= d + 1; ++i)
  {
    for (const IndexSet& K : combinations(i - 1, n - 1))
    {
      StageTerm t;
      t.stage = i;
      t.K = K;
      // an empty product (no hyperplane in H_{i-1} \ K) is 1
      t.pk = pk_value(lattice, K, i - 1, x);
      t.factor = factor(stage_arguments(lattice, i, K, x));
      t.product = t.pk * t.factor;
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

} // namespace

StagedDecomposition newton_identity(const ChungYaoLattice& lattice, const SymmetricForm& phi,
                                    std::span<const double> x)
{
  const int m = lattice.degree() + 1;
  if (phi.order() != m)
    throw ValidationError("newton_identity: form of order " + std::to_string(phi.order()) +
                          ", expected " + std::to_string(m));
  return staged(lattice, x, phi.on_diagonal(x),
                [&](const std::vector<Vector>& args) { return phi(args); });
}

StagedDecomposition taylor_error_decomposition(const ChungYaoLattice& lattice,
                                               const SmoothFunction& f,
                                               std::span<const double> x,
                                               const DivDiffOptions& options)
{
  const int m = lattice.degree() + 1;
  require_order(f, m);
  const std::size_t n = static_cast<std::size_t>(lattice.dimension());
  const MultiPoly t = taylor(f, Vector(n, 0.0), lattice.degree());
  std::vector<Vector> points(static_cast<std::size_t>(m), Vector(n, 0.0));
  points.emplace_back(x.begin(), x.end());
  return staged(lattice, x, f.value(x) - t(x), [&](const std::vector<Vector>& args) {
    return divided_difference(f, points, args, options);
  });
}

//-----------------------------------------------------------------------------

TechObservationReport techobserv_check(const ChungYaoLattice& lattice, const IndexSet& K_prime)
{
  const std::size_t n = static_cast<std::size_t>(lattice.dimension());
  const std::size_t total = lattice.family().size();
  if (n < 2)
    throw ValidationError("techobserv_check: needs N >= 2");
  if (total < n + 1)
    throw ValidationError("techobserv_check: needs a family of at least N + 1 hyperplanes");
  const std::size_t d = total - 1;
  if (K_prime.size() != n - 2 || (!K_prime.empty() && K_prime.back() >= d))
    throw ValidationError("techobserv_check: K' must be an (N-2)-subset of the first d hyperplanes");

  const Vector& target = lattice.direction(insert_sorted(K_prime, d));
  TechObservationReport report;
  for (const IndexSet& K : combinations(d, n - 1))
  {
    TechObservation obs;
    obs.K_prime = K_prime;
    obs.K = K;
    obs.contained = is_subset(K_prime, K);
    obs.value = pk_value(lattice, K, d, target, true);
    if (!obs.contained)
    {
      report.max_abs = std::max(report.max_abs, std::abs(obs.value));
      ++report.checked;
    }
    report.entries.push_back(std::move(obs));
  }
  return report;
}

TechObservationReport techobserv_check_all(const ChungYaoLattice& lattice)
{
  const std::size_t n = static_cast<std::size_t>(lattice.dimension());
  if (n < 2)
    throw ValidationError("techobserv_check: needs N >= 2");
  const std::size_t d = lattice.family().size() - 1;
  TechObservationReport all;
  for (const IndexSet& Kp : combinations(d, n - 2))
  {
    auto r = techobserv_check(lattice, Kp);
    all.max_abs = std::max(all.max_abs, r.max_abs);
    all.checked += r.checked;
    all.entries.insert(all.entries.end(), r.entries.begin(), r.entries.end());
  }
  return all;
}

} // namespace cy
