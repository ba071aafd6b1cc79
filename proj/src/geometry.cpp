#include "cy/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cy
{

std::vector<IndexSet> combinations(std::size_t n, std::size_t k)
{
  std::vector<IndexSet> out;
  if (k > n)
    return out;
  IndexSet c(k);
  for (std::size_t i = 0; i < k; ++i)
    c[i] = i;
  while (true)
  {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + (i - 1))
      --i;
    if (i == 0)
      break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j)
      c[j] = c[j - 1] + 1;
  }
  return out;
}

std::string to_string(const IndexSet& s)
{
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i)
    os << (i ? "," : "") << s[i] + 1;
  os << '}';
  return os.str();
}

HyperplaneFamily random_family(int dimension, int count, std::uint64_t seed,
                               const GeneralPositionOptions& options, int max_attempts)
{
  if (dimension < 1 || count < dimension)
    throw ValidationError("random_family: need 1 <= N <= d");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> offset(0.2, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt)
  {
    std::vector<Hyperplane> family;
    for (int i = 0; i < count; ++i)
    {
      Vector n(dimension);
      for (double& c : n)
        c = gauss(rng);
      const double r = norm(n);
      for (double& c : n)
        c /= r;
      const double c = offset(rng);
      family.emplace_back(std::move(n), c);
    }
    if (check_general_position(family, options).accepted)
      return HyperplaneFamily(std::move(family), options);
  }
  throw DegenerateError("random_family: no family in general position after " +
                        std::to_string(max_attempts) + " attempts");
}

IndexSet remove_at(const IndexSet& H, std::size_t j)
{
  IndexSet r;
  r.reserve(H.size() - 1);
  for (std::size_t i = 0; i < H.size(); ++i)
    if (i != j)
      r.push_back(H[i]);
  return r;
}

IndexSet insert_sorted(const IndexSet& K, std::size_t i)
{
  IndexSet r = K;
  r.insert(std::upper_bound(r.begin(), r.end(), i), i);
  return r;
}

bool is_subset(const IndexSet& small, const IndexSet& big)
{
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

//-----------------------------------------------------------------------------

Hyperplane::Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset)
{
  if (normal_.empty())
    throw ValidationError("Hyperplane: empty normal");
  const double n = norm(normal_);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset))
    throw ValidationError("Hyperplane: normal must be nonzero and finite");
  for (double& c : normal_)
    c /= n;
  offset_ /= n;
}

Hyperplane Hyperplane::through_points(std::span<const Vector> points)
{
  if (points.empty())
    throw ValidationError("Hyperplane::through_points: no points");
  const int n = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) != n)
    throw ValidationError("Hyperplane::through_points: need exactly N points in R^N");
  std::vector<Vector> edges;
  for (int i = 1; i < n; ++i)
    edges.push_back(axpy(-1.0, points[0], points[i]));
  Vector normal;
  try
  {
    normal = direction_vector(edges, n);
  }
  catch (const DegenerateError&)
  {
    throw DegenerateError("Hyperplane::through_points: points are affinely dependent");
  }
  const double c = dot(normal, points[0]);
  return Hyperplane(std::move(normal), c);
}

Hyperplane Hyperplane::flipped() const
{
  Vector n = normal_;
  for (double& c : n)
    c = -c;
  return Hyperplane(std::move(n), -offset_);
}

MultiPoly Hyperplane::as_polynomial() const
{
  return MultiPoly::affine(normal_, -offset_);
}

MultiPoly Hyperplane::linear_polynomial() const
{
  return MultiPoly::affine(normal_, 0.0);
}

//-----------------------------------------------------------------------------

double subset_volume(std::span<const Hyperplane> family, const IndexSet& subset)
{
  std::vector<Vector> rows;
  rows.reserve(subset.size());
  for (std::size_t i : subset)
    rows.push_back(family[i].normal());
  return std::abs(determinant(Matrix::from_rows(rows)));
}

Vector solve_vertex(std::span<const Hyperplane> subset, double det_tolerance)
{
  if (subset.empty())
    throw ValidationError("solve_vertex: empty subset");
  const std::size_t n = subset.size();
  Matrix a(n, n);
  Vector b(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (subset[i].normal().size() != n)
      throw ValidationError("solve_vertex: need exactly N hyperplanes in R^N");
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = subset[i].normal()[j];
    b[i] = subset[i].offset();
  }
  if (std::abs(determinant(a)) <= det_tolerance)
    throw DegenerateError("solve_vertex: hyperplanes are not in general position");
  Vector x = solve(a, b);
  for (int step = 0; step < 2; ++step)
  {
    Vector r(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      long double acc = b[i];
      for (std::size_t j = 0; j < n; ++j)
        acc -= static_cast<long double>(a(i, j)) * x[j];
      r[i] = static_cast<double>(acc);
    }
    const Vector dx = solve(a, r);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += dx[i];
  }
  double residual = 0.0;
  for (const Hyperplane& h : subset)
    residual = std::max(residual, std::abs(h(x)));
  if (residual > 1e-10 * (1.0 + norm(x)))
    throw DegenerateError("solve_vertex: ill-conditioned subset (residual " +
                          std::to_string(residual) + ")");
  return x;
}

Vector direction_vector(std::span<const Vector> normals, int dimension)
{
  const std::size_t n = static_cast<std::size_t>(dimension);
  if (normals.size() + 1 != n)
    throw ValidationError("direction_vector: need N-1 vectors");
  for (const Vector& v : normals)
    if (v.size() != n)
      throw ValidationError("direction_vector: vector of wrong dimension");
  // det(v, a_1, ..., a_{N-1}) expanded along the first column
  Vector nk(n);
  for (std::size_t j = 0; j < n; ++j)
  {
    Matrix minor(n - 1, n - 1);
    for (std::size_t r = 0, rr = 0; r < n; ++r)
    {
      if (r == j)
        continue;
      for (std::size_t c = 0; c + 1 < n; ++c)
        minor(rr, c) = normals[c][r];
      ++rr;
    }
    nk[j] = ((j % 2) ? -1.0 : 1.0) * determinant(std::move(minor));
  }
  if (norm(nk) < 1e-14)
    throw DegenerateError("direction_vector: vectors are linearly dependent");
  return nk;
}

GeneralPositionReport check_general_position(std::span<const Hyperplane> family,
                                             const GeneralPositionOptions& options)
{
  if (family.empty())
    throw ValidationError("check_general_position: empty family");
  const std::size_t n = family.front().normal().size();
  for (const Hyperplane& h : family)
    if (h.normal().size() != n)
      throw ValidationError("check_general_position: mixed dimensions");
  if (family.size() < n)
    throw ValidationError("check_general_position: need at least N hyperplanes");

  GeneralPositionReport report;
  report.min_abs_det = std::numeric_limits<double>::infinity();
  const auto subsets = combinations(family.size(), n);
  std::vector<Vector> vertices;
  vertices.reserve(subsets.size());
  for (const IndexSet& H : subsets)
  {
    const double vol = subset_volume(family, H);
    if (vol < report.min_abs_det)
    {
      report.min_abs_det = vol;
      report.worst_subset = H;
    }
    if (vol <= options.det_tolerance && !report.degenerate_subset)
      report.degenerate_subset = H;
  }
  if (report.degenerate_subset)
  {
    report.message = "subset " + to_string(*report.degenerate_subset) +
                     " is degenerate: |det(normals)| = " + std::to_string(report.min_abs_det);
    return report;
  }

  for (const IndexSet& H : subsets)
  {
    std::vector<Hyperplane> hs;
    for (std::size_t i : H)
      hs.push_back(family[i]);
    try
    {
      vertices.push_back(solve_vertex(hs, options.det_tolerance));
    }
    catch (const DegenerateError& e)
    {
      report.degenerate_subset = H;
      report.message = "subset " + to_string(H) + ": " + e.what();
      return report;
    }
  }

  double diameter = 0.0;
  double min_sep = std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> closest{0, 0};
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
    {
      const double dist = distance(vertices[i], vertices[j]);
      diameter = std::max(diameter, dist);
      if (dist < min_sep)
      {
        min_sep = dist;
        closest = {i, j};
      }
    }
  report.min_vertex_separation = vertices.size() > 1 ? min_sep : 0.0;
  report.injective = vertices.size() == 1 ||
                     (diameter > 0.0 && min_sep > options.dedup_tolerance * diameter);
  if (!report.injective)
  {
    report.collision = std::make_pair(subsets[closest.first], subsets[closest.second]);
    report.message = "vertex map is not injective: subsets " + to_string(subsets[closest.first]) +
                     " and " + to_string(subsets[closest.second]) + " meet at the same point";
    return report;
  }
  report.accepted = true;
  report.message = "general position";
  return report;
}

//-----------------------------------------------------------------------------

HyperplaneFamily::HyperplaneFamily(std::vector<Hyperplane> hyperplanes,
                                   const GeneralPositionOptions& options)
    : hyperplanes_(std::move(hyperplanes)), dimension_(0), options_(options)
{
  certificate_ = check_general_position(hyperplanes_, options_);
  if (!certificate_.accepted)
    throw GeneralPositionError(certificate_);
  dimension_ = hyperplanes_.front().dimension();
}

ChungYaoLattice::ChungYaoLattice(HyperplaneFamily family) : family_(std::move(family))
{
  const std::size_t n = static_cast<std::size_t>(family_.dimension());
  subsets_ = combinations(family_.size(), n);
  vertices_.reserve(subsets_.size());
  for (std::size_t i = 0; i < subsets_.size(); ++i)
  {
    std::vector<Hyperplane> hs;
    for (std::size_t j : subsets_[i])
      hs.push_back(family_[j]);
    vertices_.push_back(solve_vertex(hs, family_.options().det_tolerance));
    index_.emplace(subsets_[i], i);
  }
  line_sets_ = combinations(family_.size(), n - 1);
  for (const IndexSet& K : line_sets_)
  {
    std::vector<Vector> normals;
    for (std::size_t j : K)
      normals.push_back(family_[j].normal());
    directions_.emplace(K, direction_vector(normals, static_cast<int>(n)));
  }
}

std::size_t ChungYaoLattice::index_of(const IndexSet& H) const
{
  auto it = index_.find(H);
  if (it == index_.end())
    throw ValidationError("ChungYaoLattice: " + to_string(H) + " is not an N-subset");
  return it->second;
}

double ChungYaoLattice::norm() const
{
  double m = 0.0;
  for (const Vector& v : vertices_)
    m = std::max(m, cy::norm(v));
  return m;
}

const Vector& ChungYaoLattice::direction(const IndexSet& K) const
{
  auto it = directions_.find(K);
  if (it == directions_.end())
    throw ValidationError("ChungYaoLattice: " + to_string(K) + " is not an (N-1)-subset");
  return it->second;
}

std::vector<LineSubset> ChungYaoLattice::line_subsets() const
{
  const std::size_t expected = family_.size() - static_cast<std::size_t>(dimension()) + 1;
  std::vector<LineSubset> out;
  out.reserve(line_sets_.size());
  for (const IndexSet& K : line_sets_)
  {
    LineSubset ls;
    ls.K = K;
    ls.direction = direction(K);
    for (std::size_t j = 0; j < family_.size(); ++j)
    {
      if (std::binary_search(K.begin(), K.end(), j))
        continue;
      const std::size_t idx = index_of(insert_sorted(K, j));
      ls.vertex_indices.push_back(idx);
      ls.points.push_back(vertices_[idx]);
    }
    if (ls.points.size() != expected)
      throw Error("line_subsets: found " + std::to_string(ls.points.size()) + " points on " +
                  to_string(K) + ", expected " + std::to_string(expected));
    out.push_back(std::move(ls));
  }
  return out;
}

std::vector<double> deboor_coordinates(const ChungYaoLattice& lattice, const IndexSet& H,
                                       std::span<const double> x)
{
  std::vector<double> coords;
  coords.reserve(H.size());
  for (std::size_t j = 0; j < H.size(); ++j)
  {
    const Hyperplane& l = lattice.family()[H[j]];
    const Vector& nk = lattice.direction(remove_at(H, j));
    coords.push_back(l(x) / l.linear(nk));
  }
  return coords;
}

double deboor_identity_residual(const ChungYaoLattice& lattice, const IndexSet& H,
                                std::span<const double> x)
{
  const Vector& theta = lattice.vertex(H);
  const auto coords = deboor_coordinates(lattice, H, x);
  Vector r(x.begin(), x.end());
  for (std::size_t i = 0; i < r.size(); ++i)
  {
    CompensatedSum s;
    s.add(r[i]);
    s.add(-theta[i]);
    for (std::size_t j = 0; j < H.size(); ++j)
      s.add(-coords[j] * lattice.direction(remove_at(H, j))[i]);
    r[i] = s.value();
  }
  return norm(r);
}

} // namespace cy
