#pragma once

#include "cy/errors.hpp"
#include "cy/linalg.hpp"
#include "cy/poly.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cy
{

/// Sorted list of hyperplane positions within a family.
using IndexSet = std::vector<std::size_t>;

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<IndexSet> combinations(std::size_t n, std::size_t k);

std::string to_string(const IndexSet& s);

/// The affine form l(x) = <n, x> - c with |n| = 1.
class Hyperplane
{
public:
  /// Normalizes (normal, offset) by |normal|. Throws ValidationError for a
  /// zero or non-finite normal.
  Hyperplane(Vector normal, double offset);

  /// Hyperplane through N points of R^N.
  static Hyperplane through_points(std::span<const Vector> points);

  int dimension() const { return static_cast<int>(normal_.size()); }
  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }

  double operator()(std::span<const double> x) const { return dot(normal_, x) - offset_; }
  /// Linear part <n, v>.
  double linear(std::span<const double> v) const { return dot(normal_, v); }

  /// The same hyperplane described by (-n, -c).
  Hyperplane flipped() const;

  MultiPoly as_polynomial() const;
  MultiPoly linear_polynomial() const;

private:
  Vector normal_;
  double offset_;
};

struct GeneralPositionOptions
{
  /// minimum accepted |det| of N unit normals
  double det_tolerance = 1e-8;
  /// minimum vertex separation, relative to the lattice diameter
  double dedup_tolerance = 1e-8;
};

struct GeneralPositionReport
{
  bool accepted = false;
  double min_abs_det = 0.0;
  IndexSet worst_subset;
  std::optional<IndexSet> degenerate_subset;
  bool injective = false;
  std::optional<std::pair<IndexSet, IndexSet>> collision;
  double min_vertex_separation = 0.0;
  std::string message;
};

/// Raised when a family fails the general-position test; carries the report.
class GeneralPositionError : public DegenerateError
{
public:
  explicit GeneralPositionError(GeneralPositionReport report)
      : DegenerateError(report.message), report_(std::move(report))
  {
  }
  const GeneralPositionReport& report() const { return report_; }

private:
  GeneralPositionReport report_;
};

/// Checks that every N-subset has |det(normals)| > det_tolerance and that
/// distinct subsets give distinct intersection points.
GeneralPositionReport check_general_position(std::span<const Hyperplane> family,
                                             const GeneralPositionOptions& options = {});

/// |det| of the normals of the given subset.
double subset_volume(std::span<const Hyperplane> family, const IndexSet& subset);

/// Intersection point of exactly N hyperplanes.
Vector solve_vertex(std::span<const Hyperplane> subset, double det_tolerance = 1e-8);

/// The vector n_K with det(v, n_{i_1}, ..., n_{i_{N-1}}) = <v, n_K> for all v,
/// computed by signed cofactor expansion along the first column.
/// Throws DegenerateError if the normals are linearly dependent.
Vector direction_vector(std::span<const Vector> normals, int dimension);

/// An ordered family of d >= N hyperplanes in general position.
class HyperplaneFamily
{
public:
  /// Throws GeneralPositionError when the check fails.
  explicit HyperplaneFamily(std::vector<Hyperplane> hyperplanes,
                            const GeneralPositionOptions& options = {});

  int dimension() const { return dimension_; }
  std::size_t size() const { return hyperplanes_.size(); }
  const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }
  const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  const GeneralPositionReport& certificate() const { return certificate_; }
  const GeneralPositionOptions& options() const { return options_; }

private:
  std::vector<Hyperplane> hyperplanes_;
  int dimension_;
  GeneralPositionOptions options_;
  GeneralPositionReport certificate_;
};

/// Points of the lattice lying on the line cut out by an (N-1)-subset K.
struct LineSubset
{
  IndexSet K;
  /// lattice indices of the vertices theta_H with K in H, ordered by the
  /// extra hyperplane
  std::vector<std::size_t> vertex_indices;
  std::vector<Vector> points;
  Vector direction;
};

/// The Chung-Yao lattice of a family: one vertex per N-subset.
class ChungYaoLattice
{
public:
  explicit ChungYaoLattice(HyperplaneFamily family);

  const HyperplaneFamily& family() const { return family_; }
  int dimension() const { return family_.dimension(); }
  /// Interpolation degree d - N.
  int degree() const { return static_cast<int>(family_.size()) - family_.dimension(); }
  std::size_t size() const { return vertices_.size(); }

  /// N-subsets in lexicographic order; subsets()[i] owns vertex(i).
  const std::vector<IndexSet>& subsets() const { return subsets_; }
  const Vector& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  std::size_t index_of(const IndexSet& H) const;
  const Vector& vertex(const IndexSet& H) const { return vertices_[index_of(H)]; }

  /// max |theta| over the lattice.
  double norm() const;

  /// n_K for an (N-1)-subset of the family, in family order.
  const Vector& direction(const IndexSet& K) const;
  const std::vector<IndexSet>& line_sets() const { return line_sets_; }

  std::vector<LineSubset> line_subsets() const;

private:
  HyperplaneFamily family_;
  std::vector<IndexSet> subsets_;
  std::vector<Vector> vertices_;
  std::map<IndexSet, std::size_t> index_;
  std::vector<IndexSet> line_sets_;
  std::map<IndexSet, Vector> directions_;
};

/// |x - theta_H - sum_{l in H} l(x) / l~(n_{H\l}) n_{H\l}|.
double deboor_identity_residual(const ChungYaoLattice& lattice, const IndexSet& H,
                                std::span<const double> x);

/// The coordinates l(x) / l~(n_{H\l}) of x - theta_H in the basis n_{H\l}.
std::vector<double> deboor_coordinates(const ChungYaoLattice& lattice, const IndexSet& H,
                                       std::span<const double> x);

/// d hyperplanes with unit normals uniform on the sphere and offsets uniform
/// in [0.2, 1], redrawn until the family is in general position. Throws
/// DegenerateError after `max_attempts` failures.
HyperplaneFamily random_family(int dimension, int count, std::uint64_t seed,
                               const GeneralPositionOptions& options = {}, int max_attempts = 100);

/// H minus its j-th element.
IndexSet remove_at(const IndexSet& H, std::size_t j);
/// Sorted union of K and {i}.
IndexSet insert_sorted(const IndexSet& K, std::size_t i);
bool is_subset(const IndexSet& small, const IndexSet& big);

} // namespace cy
