#include "cy/convergence.hpp"

#include "cy/errors.hpp"
#include "cy/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cy
{

Vector AffineMap::operator()(std::span<const double> x) const
{
  Vector y = linear.apply(x);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += offset[i];
  return y;
}

Hyperplane transform_hyperplane(const Hyperplane& h, const AffineMap& map)
{
  const Matrix inv = inverse(map.linear);
  // L^{-T} n and c + <n, L^{-1} b>; the constructor divides both by |L^{-T} n|
  const Vector w = inv.transpose().apply(h.normal());
  const double c = h.offset() + dot(h.normal(), inv.apply(map.offset));
  return Hyperplane(w, c);
}

std::vector<Hyperplane> transform_family(std::span<const Hyperplane> family, const AffineMap& map)
{
  if (std::abs(determinant(map.linear)) == 0.0)
    throw DegenerateError("transform_family: singular linear part");
  std::vector<Hyperplane> out;
  out.reserve(family.size());
  for (const Hyperplane& h : family)
    out.push_back(transform_hyperplane(h, map));
  return out;
}

std::vector<Hyperplane> family_from_simplex(std::span<const Vector> points)
{
  if (points.empty() || points.size() != points.front().size() + 1)
    throw ValidationError("family_from_simplex: need N+1 points in R^N");
  std::vector<Hyperplane> out;
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    std::vector<Vector> facet;
    for (std::size_t j = 0; j < points.size(); ++j)
      if (j != i)
        facet.push_back(points[j]);
    Hyperplane h = Hyperplane::through_points(facet);
    if (h(points[i]) < 0.0)
      h = h.flipped();
    out.push_back(std::move(h));
  }
  return out;
}

//-----------------------------------------------------------------------------

LatticeSequence::LatticeSequence(std::string name, Generator generator)
    : name_(std::move(name)), generator_(std::move(generator))
{
}

LatticeSequence LatticeSequence::affine(std::string name, std::vector<Hyperplane> base,
                                        AffineGenerator maps)
{
  LatticeSequence seq(std::move(name), [base, maps](int s) { return transform_family(base, maps(s)); });
  seq.base_ = std::move(base);
  seq.maps_ = std::move(maps);
  return seq;
}

LatticeSequence LatticeSequence::listed(std::string name,
                                        std::vector<std::vector<Hyperplane>> families, int first_s)
{
  return LatticeSequence(std::move(name), [families = std::move(families), first_s](int s) {
    const int k = s - first_s;
    if (k < 0 || k >= static_cast<int>(families.size()))
      throw ValidationError("listed sequence: s = " + std::to_string(s) + " out of range");
    return families[static_cast<std::size_t>(k)];
  });
}

ChungYaoLattice LatticeSequence::lattice(int s, const GeneralPositionOptions& options) const
{
  return ChungYaoLattice(HyperplaneFamily(hyperplanes(s), options));
}

AffineMap LatticeSequence::transform(int s) const
{
  if (!maps_)
    throw ValidationError("sequence '" + name_ + "' is not an affine template");
  return maps_(s);
}

std::vector<Hyperplane> unit_triangle_family()
{
  return {Hyperplane({1.0, 0.0}, 0.0), Hyperplane({0.0, 1.0}, 0.0), Hyperplane({1.0, 1.0}, 1.0)};
}

LatticeSequence affine_triangle_sequence(std::function<double(double)> u)
{
  if (!u)
    u = [](double t) { return 1.0 + t; };
  return LatticeSequence::affine("affine_triangle", unit_triangle_family(), [u](int s) {
    const double t = 1.0 / s;
    AffineMap m{Matrix(2, 2), {t, t}};
    m.linear(0, 0) = t * t;
    m.linear(1, 1) = -t * t * u(t);
    return m;
  });
}

LatticeSequence degenerate_triangle_sequence(double epsilon)
{
  return LatticeSequence("degenerate_triangle", [epsilon](int s) {
    const double t = 1.0 / s;
    const std::vector<Vector> pts{{0.0, 0.0}, {t, std::pow(t, 2.0 + epsilon)}, {2.0 * t, 0.0}};
    return family_from_simplex(pts);
  });
}

std::vector<int> geometric_s_values(int s_min, int s_max)
{
  if (s_min < 1 || s_max < s_min)
    throw ValidationError("geometric_s_values: need 1 <= s_min <= s_max");
  std::vector<int> out;
  for (long s = s_min; s <= s_max; s *= 2)
    out.push_back(static_cast<int>(s));
  return out;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
  {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2)
    return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  if (den == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

bool tends_to_zero(std::span<const double> s, std::span<const double> statistic)
{
  if (statistic.size() < 2 || s.size() != statistic.size())
    return false;
  if (statistic.back() == 0.0)
    return true;
  if (!(statistic.front() > 0.0))
    return false;
  const double slope = fit_loglog_slope(s, statistic);
  return statistic.back() < 0.1 * statistic.front() && slope < 0.0;
}

bool grows_unbounded(std::span<const double> s, std::span<const double> statistic)
{
  if (statistic.size() < 2 || s.size() != statistic.size() || !(statistic.front() > 0.0))
    return false;
  const double slope = fit_loglog_slope(s, statistic);
  return statistic.back() > 10.0 * statistic.front() && slope > 0.0;
}

double min_volume(std::span<const Hyperplane> family)
{
  const std::size_t n = family.front().normal().size();
  double m = std::numeric_limits<double>::infinity();
  for (const IndexSet& H : combinations(family.size(), n))
    m = std::min(m, subset_volume(family, H));
  return m;
}

double max_offset(std::span<const Hyperplane> family)
{
  double m = 0.0;
  for (const Hyperplane& h : family)
    m = std::max(m, std::abs(h.offset()));
  return m;
}

double min_direction_pairing(const ChungYaoLattice& lattice)
{
  double m = std::numeric_limits<double>::infinity();
  for (const IndexSet& K : lattice.line_sets())
    for (std::size_t i = 0; i < lattice.family().size(); ++i)
      if (!std::binary_search(K.begin(), K.end(), i))
        m = std::min(m, std::abs(lattice.family()[i].linear(lattice.direction(K))));
  return m;
}

double pairing_determinant_mismatch(const ChungYaoLattice& lattice)
{
  double worst = 0.0;
  for (const IndexSet& K : lattice.line_sets())
    for (std::size_t i = 0; i < lattice.family().size(); ++i)
    {
      if (std::binary_search(K.begin(), K.end(), i))
        continue;
      std::vector<Vector> rows{lattice.family()[i].normal()};
      for (std::size_t j : K)
        rows.push_back(lattice.family()[j].normal());
      const double det = determinant(Matrix::from_rows(rows));
      const double inner = lattice.family()[i].linear(lattice.direction(K));
      worst = std::max(worst, std::abs(std::abs(det) - std::abs(inner)));
    }
  return worst;
}

//-----------------------------------------------------------------------------

ConditionReport check_conditions(const LatticeSequence& sequence, std::span<const int> s_values,
                                 const ConditionOptions& options)
{
  ConditionReport report;
  report.c2_threshold = options.c2_threshold;
  report.rows.resize(s_values.size());
  parallel_for(s_values.size(), options.threads, [&](std::size_t k) {
    ConditionRow& row = report.rows[k];
    row.s = s_values[k];
    row.t = 1.0 / row.s;
    try
    {
      const auto family = sequence.hyperplanes(row.s);
      row.min_volume = min_volume(family);
      row.max_offset = max_offset(family);
      const ChungYaoLattice lattice(HyperplaneFamily(family, options.general_position));
      row.lattice_norm = lattice.norm();
      row.valid = true;
    }
    catch (const Error& e)
    {
      row.error = e.what();
    }
  });

  std::vector<double> s, norms, volumes, offsets;
  report.all_valid = true;
  double min_vol = std::numeric_limits<double>::infinity();
  for (const ConditionRow& row : report.rows)
  {
    report.all_valid = report.all_valid && row.valid;
    min_vol = std::min(min_vol, row.min_volume);
    if (!row.valid)
      continue;
    s.push_back(row.s);
    norms.push_back(row.lattice_norm);
    volumes.push_back(row.min_volume);
    offsets.push_back(row.max_offset);
  }
  report.c1 = report.all_valid && tends_to_zero(s, norms);
  report.c2 = min_vol >= options.c2_threshold && !tends_to_zero(s, volumes);
  report.c3 = tends_to_zero(s, offsets);
  return report;
}

EquivalenceReport c1_c3_equivalence_probe(const LatticeSequence& sequence,
                                          std::span<const int> s_values,
                                          const ConditionOptions& options)
{
  const ConditionReport conditions = check_conditions(sequence, s_values, options);
  EquivalenceReport report;
  report.inequality_everywhere = true;
  report.cramer_everywhere = true;
  std::vector<double> s, norms, offsets;
  for (const ConditionRow& row : conditions.rows)
  {
    if (!row.valid)
      continue;
    const std::size_t n = sequence.hyperplanes(row.s).front().normal().size();
    EquivalenceRow e;
    e.s = row.s;
    e.max_offset = row.max_offset;
    e.lattice_norm = row.lattice_norm;
    e.cramer_bound = std::pow(static_cast<double>(n), 1.5) * row.max_offset / row.min_volume;
    const double slack = 1e-12 * (1.0 + row.lattice_norm);
    e.inequality_holds = row.max_offset <= row.lattice_norm + slack;
    e.cramer_holds = row.lattice_norm <= e.cramer_bound + slack;
    report.inequality_everywhere = report.inequality_everywhere && e.inequality_holds;
    report.cramer_everywhere = report.cramer_everywhere && e.cramer_holds;
    s.push_back(row.s);
    norms.push_back(row.lattice_norm);
    offsets.push_back(row.max_offset);
    report.rows.push_back(e);
  }
  report.c1 = tends_to_zero(s, norms);
  report.c3 = tends_to_zero(s, offsets);
  report.agree = report.c1 == report.c3;
  return report;
}

AffineCriterionReport affine_criterion(const std::vector<Hyperplane>& base,
                                       const LatticeSequence::AffineGenerator& maps,
                                       std::span<const int> s_values,
                                       const ConditionOptions& options)
{
  const HyperplaneFamily base_family(base, options.general_position);
  const ChungYaoLattice base_lattice(base_family);
  const std::size_t n = static_cast<std::size_t>(base_family.dimension());
  const auto subsets = combinations(base.size(), n);

  AffineCriterionReport report;
  const LatticeSequence sequence = LatticeSequence::affine("affine", base, maps);
  report.conditions = check_conditions(sequence, s_values, options);

  double max_base_volume = 0.0;
  for (const IndexSet& H : subsets)
    max_base_volume = std::max(max_base_volume, subset_volume(base, H));
  report.delta_bound = max_base_volume / options.c2_threshold;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  report.rows.resize(s_values.size());
  for (std::size_t k = 0; k < s_values.size(); ++k)
  {
    AffineCriterionRow& row = report.rows[k];
    row.s = s_values[k];
    const AffineMap map = maps(row.s);
    const double det_l = std::abs(determinant(map.linear));
    if (det_l == 0.0)
      throw DegenerateError("affine_criterion: singular L_s at s = " + std::to_string(row.s));
    const Matrix inv = inverse(map.linear);
    const Matrix inv_t = inv.transpose();
    const Vector inv_b = inv.apply(map.offset);
    std::vector<double> scale(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
    {
      scale[i] = norm(inv_t.apply(base[i].normal()));
      row.offset_decay = std::max(
          row.offset_decay, std::abs(base[i].offset() + dot(base[i].normal(), inv_b)) / scale[i]);
    }
    const auto transformed = transform_family(base, map);
    for (const IndexSet& H : subsets)
    {
      double stat = det_l;
      for (std::size_t i : H)
        stat *= scale[i];
      row.delta_statistic = std::max(row.delta_statistic, stat);
      row.volume_mismatch = std::max(
          row.volume_mismatch,
          std::abs(subset_volume(transformed, H) - subset_volume(base, H) / stat));
    }
    // l'_i(L_s y) = l_i(y) / |L_s^{-T} n_i|
    for (int sample = 0; sample < 8; ++sample)
    {
      Vector y(n);
      for (double& c : y)
        c = unit(rng);
      const Vector ly = map(y);
      for (std::size_t i = 0; i < base.size(); ++i)
        row.equation_mismatch = std::max(
            row.equation_mismatch, std::abs(transformed[i](ly) - base[i](y) / scale[i]));
    }
    try
    {
      const ChungYaoLattice lattice(HyperplaneFamily(transformed, options.general_position));
      const double size = std::max(1.0, lattice.norm());
      for (std::size_t h = 0; h < lattice.size(); ++h)
        row.vertex_mismatch = std::max(
            row.vertex_mismatch, distance(lattice.vertex(h), map(base_lattice.vertex(h))) / size);
    }
    catch (const DegenerateError&)
    {
      row.vertex_mismatch = std::numeric_limits<double>::infinity();
    }
  }

  std::vector<double> s, stats, decay;
  double max_stat = 0.0;
  for (const AffineCriterionRow& row : report.rows)
  {
    s.push_back(row.s);
    stats.push_back(row.delta_statistic);
    decay.push_back(row.offset_decay);
    max_stat = std::max(max_stat, row.delta_statistic);
  }
  report.side_a = report.conditions.c1 && report.conditions.c2;
  report.side_b =
      max_stat <= report.delta_bound && !grows_unbounded(s, stats) && tends_to_zero(s, decay);
  report.agree = report.side_a == report.side_b;
  return report;
}

//-----------------------------------------------------------------------------

std::vector<Vector> ball_grid(int dimension, double radius, int points_per_axis)
{
  if (dimension < 1 || points_per_axis < 1 || !(radius > 0.0))
    throw ValidationError("ball_grid: invalid grid specification");
  std::vector<double> axis(points_per_axis);
  for (int i = 0; i < points_per_axis; ++i)
    axis[i] = points_per_axis == 1 ? 0.0 : -radius + 2.0 * radius * i / (points_per_axis - 1);
  std::vector<Vector> out;
  std::vector<int> idx(dimension, 0);
  while (true)
  {
    Vector x(dimension);
    for (int j = 0; j < dimension; ++j)
      x[j] = axis[idx[j]];
    if (norm(x) <= radius * (1.0 + 1e-12))
      out.push_back(std::move(x));
    int j = 0;
    while (j < dimension && ++idx[j] == points_per_axis)
      idx[j++] = 0;
    if (j == dimension)
      break;
  }
  return out;
}

namespace
{

Vector random_in_ball(std::mt19937_64& rng, int n, double radius)
{
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  Vector v(n);
  for (double& c : v)
    c = gauss(rng);
  const double r = radius * std::pow(unit(rng), 1.0 / n) / norm(v);
  for (double& c : v)
    c *= r;
  return v;
}

Vector random_unit(std::mt19937_64& rng, int n)
{
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (double& c : v)
    c = gauss(rng);
  const double r = norm(v);
  for (double& c : v)
    c /= r;
  return v;
}

} // namespace

double derivative_norm(const SmoothFunction& f, int order, double radius, int samples,
                       std::uint64_t seed)
{
  require_order(f, order);
  if (auto closed = f.derivative_norm_bound(order, radius))
    return *closed;
  const int n = f.dimension();
  std::mt19937_64 rng(seed);
  double m = 0.0;
  for (int k = 0; k < samples; ++k)
  {
    Vector a = random_in_ball(rng, n, radius);
    if (k % 2 == 0)
    {
      // push half of the samples to the boundary sphere
      const double r = norm(a);
      if (r > 0.0)
        for (double& c : a)
          c *= radius / r;
    }
    const std::vector<Vector> v(order, random_unit(rng, n));
    m = std::max(m, std::abs(f.derivative(a, v)));
  }
  return m;
}

BoundReport bound_evaluator(const ChungYaoLattice& lattice, const SmoothFunction& f,
                            const BoundOptions& options)
{
  const int n = lattice.dimension();
  const int d = static_cast<int>(lattice.family().size());
  const int m = d - n + 1;
  require_order(f, m + 1);

  BoundReport r;
  r.radius = options.radius;
  r.delta = options.delta ? *options.delta : min_direction_pairing(lattice);
  if (!(r.delta > 0.0))
    throw ValidationError("bound_evaluator: delta must be positive");
  r.lattice_norm = lattice.norm();
  r.hypotheses_hold = r.lattice_norm <= r.radius;
  r.derivative_norm = derivative_norm(f, m, r.radius, options.norm_samples, options.seed);
  r.next_derivative_norm = derivative_norm(f, m + 1, r.radius, options.norm_samples, options.seed);

  const double R = r.radius;
  r.pk_bound = std::pow(2.0 * R / r.delta, m);
  r.s2_bound = r.derivative_norm / factorial(m) * std::pow(R, d - n) *
               std::pow(1.0 + 2.0 / r.delta, d - 1) * r.lattice_norm;
  r.s1_bound = binomial(d, n - 1) * r.pk_bound / factorial(m) * r.next_derivative_norm *
               r.lattice_norm;
  r.total_bound = r.s1_bound + r.s2_bound;

  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.pk_samples; ++k)
  {
    const Vector x = random_in_ball(rng, n, R);
    for (const IndexSet& K : lattice.line_sets())
      r.pk_sampled_max =
          std::max(r.pk_sampled_max, std::abs(pk_value(lattice, K, lattice.family().size(), x)));
  }
  r.pk_ok = r.pk_sampled_max <= r.pk_bound * (1.0 + 1e-12);

  const MultiPoly diff = interpolate(lattice, f).polynomial - taylor(f, Vector(n, 0.0), d - n);
  for (const Vector& x : ball_grid(n, R, options.grid_points_per_axis))
    r.measured_error = std::max(r.measured_error, std::abs(diff(x)));
  r.error_ok = r.measured_error <= r.total_bound + options.roundoff;
  return r;
}

RateReport convergence_experiment(const LatticeSequence& sequence, const SmoothFunction& f,
                                  std::span<const int> s_values, const ExperimentOptions& options)
{
  const int n = f.dimension();
  const std::vector<Vector> grid = ball_grid(n, options.radius, options.grid_points_per_axis);

  RateReport report;
  report.rows.resize(s_values.size());
  std::vector<std::optional<MultiPoly>> taylors(s_values.size());
  parallel_for(s_values.size(), options.threads, [&](std::size_t k) {
    RateRow& row = report.rows[k];
    row.s = s_values[k];
    row.t = 1.0 / row.s;
    try
    {
      const auto family = sequence.hyperplanes(row.s);
      row.min_volume = min_volume(family);
      row.max_offset = max_offset(family);
      const ChungYaoLattice lattice(HyperplaneFamily(family, options.conditions.general_position));
      if (lattice.dimension() != n)
        throw ValidationError("convergence_experiment: function and lattice dimensions differ");
      row.lattice_norm = lattice.norm();
      const MultiPoly taylor_poly = taylor(f, Vector(n, 0.0), lattice.degree());
      const Interpolant li = interpolate(lattice, f);
      row.interpolant_coefficients.assign(li.polynomial.coefficients().begin(),
                                          li.polynomial.coefficients().end());
      row.coeff_error = max_coefficient_difference(li.polynomial, taylor_poly);
      const MultiPoly diff = li.polynomial - taylor_poly;
      for (const Vector& x : grid)
        row.sup_error = std::max(row.sup_error, std::abs(diff(x)));
      if (options.evaluate_bound)
      {
        BoundOptions bo = options.bound;
        bo.radius = options.radius;
        bo.grid_points_per_axis = options.grid_points_per_axis;
        try
        {
          row.bound = bound_evaluator(lattice, f, bo);
        }
        catch (const CapabilityError&)
        {
          row.bound.reset();
        }
      }
      taylors[k] = taylor_poly;
      row.valid = true;
    }
    catch (const CapabilityError&)
    {
      throw;
    }
    catch (const Error& e)
    {
      row.error = e.what();
    }
  });

  std::vector<double> s, norms, coeff, sup, volumes;
  double min_vol = std::numeric_limits<double>::infinity();
  bool all_valid = true;
  report.bound_everywhere = true;
  for (std::size_t k = 0; k < report.rows.size(); ++k)
  {
    const RateRow& row = report.rows[k];
    min_vol = std::min(min_vol, row.min_volume);
    all_valid = all_valid && row.valid;
    if (!row.valid)
      continue;
    if (report.taylor_coefficients.empty())
    {
      report.taylor_coefficients.assign(taylors[k]->coefficients().begin(),
                                        taylors[k]->coefficients().end());
      report.exponents = taylors[k]->basis().exponents();
    }
    s.push_back(row.s);
    norms.push_back(row.lattice_norm);
    coeff.push_back(row.coeff_error);
    sup.push_back(row.sup_error);
    volumes.push_back(row.min_volume);
    if (row.bound && row.bound->hypotheses_hold)
      report.bound_everywhere = report.bound_everywhere && row.bound->error_ok && row.bound->pk_ok;
  }
  report.coeff_slope = fit_loglog_slope(norms, coeff);
  report.sup_slope = fit_loglog_slope(norms, sup);
  report.c1 = all_valid && tends_to_zero(s, norms);
  report.c2 = min_vol >= options.conditions.c2_threshold && !tends_to_zero(s, volumes);
  return report;
}

} // namespace cy
