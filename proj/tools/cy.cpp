#include "cy/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv)
{
  CLI::App app{"Chung-Yao lattices: interpolation, remainder identities and convergence"};
  app.require_subcommand(1);

  cy::cli::RunOptions opts;
  std::string config;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int quad = 0, s_min = 0, s_max = 0;
  std::string out;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed for sampled points and forms");
    sub->add_option("--out", out, "output file (CSV for converge/rate, JSON for lattice)");
    sub->add_option("--tol", tol, "identity tolerance");
    sub->add_option("--quad-degree", quad, "simplex rule exactness, 0 for 2s+5");
    sub->add_option("--threads", opts.threads, "worker threads (CY_THREADS overrides)")->check(CLI::PositiveNumber);
    sub->add_option("--s-min", s_min, "first s")->check(CLI::PositiveNumber);
    sub->add_option("--s-max", s_max, "last s")->check(CLI::PositiveNumber);
    return sub;
  };
  common(app.add_subcommand("lattice", "print the lattice, line subsets and certificate"));
  auto* verify = common(app.add_subcommand("verify", "run the identity suite on one lattice"));
  verify->add_flag("--fault-inject", opts.fault_inject, "move one data site off its vertex");
  verify->add_flag("--flip-sign", opts.flip_sign, "also evaluate remainder terms with -n_K");
  common(app.add_subcommand("converge", "interpolant vs Taylor polynomial over s, as CSV"));
  common(app.add_subcommand("rate", "explicit error bounds against measured errors"));

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : cy::cli::exit_validation;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed"))
    opts.seed = seed;
  if (sub->count("--out"))
    opts.out = out;
  if (sub->count("--tol"))
    opts.tol = tol;
  if (sub->count("--quad-degree"))
    opts.quad_degree = quad;
  if (sub->count("--s-min"))
    opts.s_min = s_min;
  if (sub->count("--s-max"))
    opts.s_max = s_max;
  if (const char* env = std::getenv("CY_THREADS"))
  {
    try
    {
      const int n = std::stoi(env);
      if (n < 1)
        throw std::invalid_argument(env);
      opts.threads = static_cast<unsigned>(n);
    }
    catch (const std::exception&)
    {
      std::cerr << "error: CY_THREADS must be a positive integer\n";
      return cy::cli::exit_validation;
    }
  }
  return cy::cli::run_command(sub->get_name(), config, opts, std::cout, std::cerr);
}
