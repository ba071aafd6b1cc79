#pragma once

#include "cy/chungyao.hpp"
#include "cy/function.hpp"
#include "cy/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cy
{

/// x -> linear x + offset.
struct AffineMap
{
  Matrix linear;
  Vector offset;

  Vector operator()(std::span<const double> x) const;
};

/// Image of a hyperplane under an invertible affine map, written with the
/// normalized equation <L^{-T} n, x> / |L^{-T} n| - (c + <n, L^{-1} b>) / |L^{-T} n|.
Hyperplane transform_hyperplane(const Hyperplane& h, const AffineMap& map);
std::vector<Hyperplane> transform_family(std::span<const Hyperplane> family, const AffineMap& map);

/// The N+1 facet hyperplanes of a simplex given by N+1 points of R^N. Facet i
/// is opposite point i and oriented so that it is positive at point i.
std::vector<Hyperplane> family_from_simplex(std::span<const Vector> points);

/// s -> family of hyperplanes, s = 1, 2, ...; t = 1/s.
class LatticeSequence
{
public:
  using Generator = std::function<std::vector<Hyperplane>(int s)>;
  using AffineGenerator = std::function<AffineMap(int s)>;

  LatticeSequence(std::string name, Generator generator);

  /// H^(s) = L_s(base).
  static LatticeSequence affine(std::string name, std::vector<Hyperplane> base,
                                AffineGenerator maps);
  /// Explicit list; families[k] is used for s = first_s + k.
  static LatticeSequence listed(std::string name, std::vector<std::vector<Hyperplane>> families,
                                int first_s = 1);

  const std::string& name() const { return name_; }
  std::vector<Hyperplane> hyperplanes(int s) const { return generator_(s); }
  ChungYaoLattice lattice(int s, const GeneralPositionOptions& options = {}) const;

  bool is_affine() const { return static_cast<bool>(maps_); }
  const std::vector<Hyperplane>& base() const { return base_; }
  AffineMap transform(int s) const;
  const AffineGenerator& transform_generator() const { return maps_; }

private:
  std::string name_;
  Generator generator_;
  std::vector<Hyperplane> base_;
  AffineGenerator maps_;
};

/// Unit triangle family l1 = x1, l2 = x2, l3 = x1 + x2 - 1 mapped by
/// diag(t^2, -t^2 u(t)) x + (t, t). u defaults to 1 + t.
LatticeSequence affine_triangle_sequence(std::function<double(double)> u = {});
std::vector<Hyperplane> unit_triangle_family();

/// Lines through {(0,0), (t, t^{2+eps}), (2t, 0)}.
LatticeSequence degenerate_triangle_sequence(double epsilon);

/// s_min, 2 s_min, 4 s_min, ... up to s_max.
std::vector<int> geometric_s_values(int s_min, int s_max);

/// Least-squares slope of log y against log x over entries with x, y > 0.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Finite-range reading of "tends to 0": last value below 0.1 x the first and
/// a negative log-log slope against s (or the last value exactly 0).
bool tends_to_zero(std::span<const double> s, std::span<const double> statistic);
/// Mirror test for unbounded growth: last > 10 x first and positive slope.
bool grows_unbounded(std::span<const double> s, std::span<const double> statistic);

/// C2 statistic: min over N-subsets of |det(unit normals)|.
double min_volume(std::span<const Hyperplane> family);
/// C3 statistic: max_i |c_i|.
double max_offset(std::span<const Hyperplane> family);

/// delta = min |<n_i, n_K>| over (N-1)-subsets K and l_i not in K.
double min_direction_pairing(const ChungYaoLattice& lattice);
/// Largest gap between |<n_i, n_K>| and |det(n_i, normals of K)|.
double pairing_determinant_mismatch(const ChungYaoLattice& lattice);

struct ConditionOptions
{
  /// lower bound a C2 volume must keep over the tested range
  double c2_threshold = 0.05;
  GeneralPositionOptions general_position;
  unsigned threads = 1;
};

struct ConditionRow
{
  int s = 0;
  double t = 0.0;
  bool valid = false;
  std::string error;
  double lattice_norm = 0.0;
  double min_volume = 0.0;
  double max_offset = 0.0;
};

struct ConditionReport
{
  std::vector<ConditionRow> rows;
  double c2_threshold = 0.0;
  bool all_valid = false;
  bool c1 = false;
  bool c2 = false;
  bool c3 = false;
};

ConditionReport check_conditions(const LatticeSequence& sequence, std::span<const int> s_values,
                                 const ConditionOptions& options = {});

struct EquivalenceRow
{
  int s = 0;
  double max_offset = 0.0;
  double lattice_norm = 0.0;
  /// N^{3/2} max|c| / min volume, the Cramer bound on |Theta|
  double cramer_bound = 0.0;
  bool inequality_holds = false;
  bool cramer_holds = false;
};

struct EquivalenceReport
{
  std::vector<EquivalenceRow> rows;
  bool inequality_everywhere = false;
  bool cramer_everywhere = false;
  bool c1 = false;
  bool c3 = false;
  bool agree = false;
};

/// max|c_i| <= |Theta| <= N^{3/2} max|c_i| / vol_min at every s, and C1, C3
/// verdicts side by side.
EquivalenceReport c1_c3_equivalence_probe(const LatticeSequence& sequence,
                                          std::span<const int> s_values,
                                          const ConditionOptions& options = {});

struct AffineCriterionRow
{
  int s = 0;
  /// max over N-subsets of |det L_s| prod |L_s^{-T} n_{i_j}|
  double delta_statistic = 0.0;
  /// max_i |c_i + <n_i, L_s^{-1} b_s>| / |L_s^{-T} n_i|
  double offset_decay = 0.0;
  /// max |theta^(s)_H - L_s(theta_H)|, relative
  double vertex_mismatch = 0.0;
  /// max |l'_i(L_s y) - l_i(y) / |L_s^{-T} n_i|| over sample points y
  double equation_mismatch = 0.0;
  /// max |vol'(H) - |det(n_H)| / stat_H|
  double volume_mismatch = 0.0;
};

struct AffineCriterionReport
{
  std::vector<AffineCriterionRow> rows;
  ConditionReport conditions;
  double delta_bound = 0.0;
  bool side_a = false;
  bool side_b = false;
  bool agree = false;
};

AffineCriterionReport affine_criterion(const std::vector<Hyperplane>& base,
                                       const LatticeSequence::AffineGenerator& maps,
                                       std::span<const int> s_values,
                                       const ConditionOptions& options = {});

/// Points of the uniform per_axis^N grid on [-R, R]^N lying in the ball B(0, R).
std::vector<Vector> ball_grid(int dimension, double radius, int points_per_axis);

/// sup_{|a| <= radius} ||f^{(order)}(a)||: closed form when the function
/// provides it, otherwise a sampled estimate of max |D_v^order f(a)|.
double derivative_norm(const SmoothFunction& f, int order, double radius, int samples = 2000,
                       std::uint64_t seed = 7);

struct BoundOptions
{
  double radius = 0.5;
  int grid_points_per_axis = 21;
  int pk_samples = 1000;
  int norm_samples = 2000;
  std::uint64_t seed = 7;
  /// overrides the observed delta when set; must be positive
  std::optional<double> delta;
  /// absolute allowance for rounding in "measured <= bound"
  double roundoff = 1e-10;
};

struct BoundReport
{
  double radius = 0.0;
  double delta = 0.0;
  double lattice_norm = 0.0;
  /// sup ||f^{(d-N+1)}|| and sup ||f^{(d-N+2)}|| on the ball
  double derivative_norm = 0.0;
  double next_derivative_norm = 0.0;
  double pk_bound = 0.0;
  double pk_sampled_max = 0.0;
  double s1_bound = 0.0;
  double s2_bound = 0.0;
  double total_bound = 0.0;
  double measured_error = 0.0;
  bool hypotheses_hold = false;
  bool pk_ok = false;
  bool error_ok = false;
};

/// Evaluates the P_K sup bound (2R/delta)^{d-N+1}, the S_2 bound
/// M R^{d-N} (1 + 2/delta)^{d-1} |Theta| / (d-N+1)! and the total
///   C(d, N-1) (2R/delta)^{d-N+1} M' |Theta| / (d-N+1)! + S_2 bound,
/// and compares them with sampled |P_K| and the measured error.
BoundReport bound_evaluator(const ChungYaoLattice& lattice, const SmoothFunction& f,
                            const BoundOptions& options = {});

struct ExperimentOptions
{
  double radius = 0.5;
  int grid_points_per_axis = 21;
  ConditionOptions conditions;
  bool evaluate_bound = true;
  BoundOptions bound;
  unsigned threads = 1;
};

struct RateRow
{
  int s = 0;
  double t = 0.0;
  bool valid = false;
  std::string error;
  double lattice_norm = 0.0;
  double min_volume = 0.0;
  double max_offset = 0.0;
  double sup_error = 0.0;
  double coeff_error = 0.0;
  Vector interpolant_coefficients;
  std::optional<BoundReport> bound;
};

struct RateReport
{
  std::vector<RateRow> rows;
  Vector taylor_coefficients;
  std::vector<MultiIndex> exponents;
  double coeff_slope = 0.0;
  double sup_slope = 0.0;
  bool c1 = false;
  bool c2 = false;
  bool bound_everywhere = false;
};

/// For each s: L[Theta^(s); f] against T_0^{d-N} f, coefficientwise and as a
/// sup over the ball grid, plus log-log slopes against |Theta^(s)|.
RateReport convergence_experiment(const LatticeSequence& sequence, const SmoothFunction& f,
                                  std::span<const int> s_values,
                                  const ExperimentOptions& options = {});

} // namespace cy
