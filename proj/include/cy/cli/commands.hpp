#pragma once

#include "cy/cli/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cy::cli
{

enum ExitCode : int
{
  exit_ok = 0,
  exit_validation = 2,
  exit_degenerate = 3,
  exit_acceptance = 4,
};

/// Command-line overrides applied on top of the config.
struct RunOptions
{
  std::optional<std::uint64_t> seed;
  bool fault_inject = false;
  bool flip_sign = false;
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<int> quad_degree;
  unsigned threads = 1;
  std::optional<int> s_min, s_max;
};

/// Config with the overrides folded in; throws ValidationError on a bad range.
ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions& options);

int cmd_lattice(const ExperimentConfig& config, const RunOptions& options, std::ostream& out);
int cmd_verify(const ExperimentConfig& config, const RunOptions& options, std::ostream& out);
int cmd_converge(const ExperimentConfig& config, const RunOptions& options, std::ostream& out);
int cmd_rate(const ExperimentConfig& config, const RunOptions& options, std::ostream& out);

/// Loads the config, runs the named command and maps library errors to exit
/// codes, printing the diagnostic to err.
int run_command(const std::string& command, const std::string& config_path,
                const RunOptions& options, std::ostream& out, std::ostream& err);

/// %.17g, the CSV number format.
std::string format_double(double v);

} // namespace cy::cli
