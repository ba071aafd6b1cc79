#pragma once

#include "cy/cli/expression.hpp"
#include "cy/convergence.hpp"
#include "cy/function.hpp"
#include "cy/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cy::cli
{

struct HyperplaneSpec
{
  std::vector<Expression> normal;
  Expression offset;
};

struct RandomFamilySpec
{
  int count = 0;
  std::uint64_t seed = 1;
};

struct AffineSpec
{
  std::vector<std::vector<Expression>> matrix;
  std::vector<Expression> offset;
};

/// Expectations checked by `cy converge`; a miss gives exit code 4.
struct Expectations
{
  std::optional<double> slope_min, slope_max;
  std::optional<bool> c1, c2, c3;
  std::optional<bool> bound;
  /// "decays", "diverges" or "bounded", for the coefficient error
  std::optional<std::string> error;
};

struct ExperimentConfig
{
  std::string name;
  int dimension = 0;

  // exactly one family source
  std::vector<HyperplaneSpec> hyperplanes;
  std::vector<std::vector<Expression>> simplex;
  std::optional<RandomFamilySpec> random;

  std::optional<AffineSpec> transform;

  FunctionPtr function;
  std::string function_text;

  int s_min = 1;
  int s_max = 1;
  /// s used by the single-lattice commands
  std::optional<int> s_lattice;

  double radius = 0.5;
  int grid_points_per_axis = 21;

  double identity_tolerance = 1e-9;
  double quadrature_tolerance = 1e-7;
  int quadrature_degree = 0;
  GeneralPositionOptions general_position;
  double c2_threshold = 0.05;

  std::uint64_t seed = 1;
  std::string output;
  Expectations expect;

  /// True when the family (or the affine map) depends on t = 1/s.
  bool depends_on_s() const;
  /// Hyperplanes at s, before the affine map.
  std::vector<Hyperplane> base_family(int s) const;
  AffineMap transform_at(int s) const;
  LatticeSequence sequence() const;
  std::vector<int> s_values() const;
  int lattice_s() const;
};

/// Parses and validates a JSON config. Syntax errors report line and column,
/// schema errors the JSON path of the offending entry.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

} // namespace cy::cli
