#include "cy/cli/commands.hpp"

#include "cy/chungyao.hpp"
#include "cy/errors.hpp"
#include "cy/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace cy::cli
{

namespace
{

std::string vec(std::span<const double> v)
{
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_double(v[i]);
  return s + ")";
}

std::string short_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string exponent_text(const MultiIndex& alpha)
{
  std::string s = "x^(";
  for (std::size_t i = 0; i < alpha.size(); ++i)
    s += (i ? "," : "") + std::to_string(alpha[i]);
  return s + ")";
}

MultiPoly random_polynomial(std::mt19937_64& rng, int n, int degree, bool homogeneous)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly p(n, degree);
  for (const MultiIndex& alpha : homogeneous ? homogeneous_indices(n, degree) : multi_indices(n, degree))
    p.set_coefficient(alpha, u(rng));
  return p;
}

Vector random_point(std::mt19937_64& rng, int n, double radius)
{
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Vector x(n);
  for (double& c : x)
    c = g(rng);
  const double r = radius * std::pow(u(rng), 1.0 / n) / norm(x);
  for (double& c : x)
    c *= r;
  return x;
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ValidationError("cannot write " + path);
  f << text;
}

struct Check
{
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

int report_checks(const std::vector<Check>& checks, std::ostream& out)
{
  int passed = 0;
  for (const Check& c : checks)
  {
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << short_double(c.value)
        << " (tol " << short_double(c.tol) << ")";
    if (!c.note.empty())
      out << "  " << c.note;
    out << "\n";
    passed += c.pass;
  }
  out << passed << " of " << checks.size() << " checks passed\n";
  return passed == static_cast<int>(checks.size()) ? exit_ok : exit_acceptance;
}

ChungYaoLattice build_lattice(const ExperimentConfig& config, int s)
{
  return config.sequence().lattice(s, config.general_position);
}

} // namespace

std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions& options)
{
  if (options.seed)
    config.seed = *options.seed;
  if (options.tol)
  {
    if (!(*options.tol > 0.0))
      throw ValidationError("--tol must be positive");
    config.identity_tolerance = *options.tol;
  }
  if (options.quad_degree)
  {
    if (*options.quad_degree < 0)
      throw ValidationError("--quad-degree must be non-negative");
    config.quadrature_degree = *options.quad_degree;
  }
  if (options.s_min)
    config.s_min = *options.s_min;
  if (options.s_max)
    config.s_max = *options.s_max;
  else if (options.s_min && config.s_max < config.s_min)
    config.s_max = config.s_min;
  if (config.s_min < 1 || config.s_max < config.s_min)
    throw ValidationError("s range needs 1 <= s-min <= s-max");
  if (options.out)
    config.output = *options.out;
  return config;
}

int cmd_lattice(const ExperimentConfig& config, const RunOptions&, std::ostream& out)
{
  const int s = config.lattice_s();
  const ChungYaoLattice lat = build_lattice(config, s);
  const auto& fam = lat.family();
  const GeneralPositionReport& cert = fam.certificate();

  out << "lattice " << config.name << " at s = " << s << ": N = " << lat.dimension()
      << ", d = " << fam.size() << ", degree " << lat.degree() << "\n";
  out << "hyperplanes\n";
  for (std::size_t i = 0; i < fam.size(); ++i)
    out << "  " << i + 1 << ": n = " << vec(fam[i].normal()) << ", c = " << format_double(fam[i].offset())
        << "\n";
  out << "vertices (" << lat.size() << ")\n";
  for (std::size_t h = 0; h < lat.size(); ++h)
    out << "  " << to_string(lat.subsets()[h]) << ": " << vec(lat.vertex(h)) << "\n";
  const auto lines = lat.line_subsets();
  out << "line subsets (" << lines.size() << ")\n";
  for (const LineSubset& ls : lines)
  {
    out << "  K = " << to_string(ls.K) << ": n_K = " << vec(ls.direction) << ", points";
    for (const Vector& p : ls.points)
      out << " " << vec(p);
    out << "\n";
  }
  out << "certificate\n"
      << "  general position: " << (cert.accepted ? "yes" : "no") << "\n"
      << "  min |det| " << format_double(cert.min_abs_det) << " at " << to_string(cert.worst_subset) << "\n"
      << "  min vertex separation " << format_double(cert.min_vertex_separation) << "\n"
      << "  lattice norm " << format_double(lat.norm()) << "\n";

  if (!config.output.empty())
  {
    nlohmann::ordered_json j;
    j["name"] = config.name;
    j["s"] = s;
    j["dimension"] = lat.dimension();
    for (const Hyperplane& h : fam.hyperplanes())
      j["hyperplanes"].push_back({{"normal", h.normal()}, {"offset", h.offset()}});
    for (std::size_t h = 0; h < lat.size(); ++h)
      j["vertices"].push_back({{"H", lat.subsets()[h]}, {"point", lat.vertex(h)}});
    for (const LineSubset& ls : lines)
      j["line_subsets"].push_back({{"K", ls.K}, {"direction", ls.direction}, {"points", ls.points}});
    j["certificate"] = {{"accepted", cert.accepted},
                        {"min_abs_det", cert.min_abs_det},
                        {"worst_subset", cert.worst_subset},
                        {"min_vertex_separation", cert.min_vertex_separation}};
    write_file(config.output, j.dump(2) + "\n");
  }
  return exit_ok;
}

int cmd_verify(const ExperimentConfig& config, const RunOptions& options, std::ostream& out)
{
  const int s = config.lattice_s();
  const ChungYaoLattice lat = build_lattice(config, s);
  const int n = lat.dimension();
  const int d = static_cast<int>(lat.family().size());
  const int m = d - n + 1;
  const double tol = config.identity_tolerance;
  const SmoothFunction& f = *config.function;
  std::mt19937_64 rng(config.seed);
  std::vector<Check> checks;

  out << "verify " << config.name << " at s = " << s << ": N = " << n << ", d = " << d
      << ", seed " << config.seed << (options.fault_inject ? ", fault injected" : "") << "\n";

  // data sites; a fault moves the first one off its vertex
  std::vector<Vector> sites = lat.vertices();
  if (options.fault_inject)
    for (double& c : sites[0])
      c += 1e-2 * (1.0 + lat.norm());

  {
    const MultiPoly p = random_polynomial(rng, n, lat.degree(), false);
    std::vector<double> pv, fv;
    for (const Vector& x : sites)
    {
      pv.push_back(p(x));
      fv.push_back(f(x));
    }
    const double reproduction =
        max_coefficient_difference(interpolate(lat, pv).polynomial, p) / p.max_abs_coefficient();
    const Interpolant li = interpolate(lat, fv);
    double match = 0.0;
    for (std::size_t h = 0; h < lat.size(); ++h)
    {
      const double fx = f(lat.vertex(h));
      match = std::max(match, std::abs(li(lat.vertex(h)) - fx) / (1.0 + std::abs(fx)));
    }
    const double worst = std::max(reproduction, match);
    checks.push_back({"interpolation match", worst, tol, worst <= tol,
                      "reproduction " + short_double(reproduction) + ", values " + short_double(match)});
  }

  const double reach = std::max(config.radius, lat.norm());
  {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k)
    {
      const Vector x = random_point(rng, n, 2.0 * reach);
      for (const IndexSet& H : lat.subsets())
        worst = std::max(worst, deboor_identity_residual(lat, H, x) / (1.0 + norm(x) + lat.norm()));
    }
    checks.push_back({"de Boor identity", worst, tol, worst <= tol, ""});
  }

  {
    RemainderOptions ro;
    ro.divdiff.quadrature_degree = config.quadrature_degree;
    // without a fixed order, refine until successive rules agree
    if (config.quadrature_degree == 0)
      ro.divdiff.tolerance = 1e-3 * config.quadrature_tolerance;
    MultiIndex alpha(n, 0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < m; ++k)
      ++alpha[pick(rng)];
    const auto mono = make_monomial(alpha);
    double exact = 0.0, smooth = 0.0, flip = 0.0;
    for (int k = 0; k < 10; ++k)
    {
      const Vector x = random_point(rng, n, config.radius);
      const RemainderDecomposition a = deboor_remainder(lat, *mono, x, ro);
      exact = std::max(exact, a.residual() / (1.0 + std::abs(a.function_value)));
      const RemainderDecomposition b = deboor_remainder(lat, f, x, ro);
      smooth = std::max(smooth, b.residual() / (1.0 + std::abs(b.function_value)));
      if (options.flip_sign)
      {
        RemainderOptions flipped = ro;
        flipped.flip_direction_sign = true;
        const RemainderDecomposition c = deboor_remainder(lat, f, x, flipped);
        for (std::size_t i = 0; i < b.terms.size(); ++i)
          flip = std::max(flip, std::abs(c.terms[i].product - b.terms[i].product) /
                                    (1.0 + std::abs(b.terms[i].product)));
      }
    }
    checks.push_back({"remainder formula, " + exponent_text(alpha), exact, tol, exact <= tol, ""});
    const double qtol = std::max(tol, config.quadrature_tolerance);
    checks.push_back({"remainder formula, " + f.describe(), smooth, qtol, smooth <= qtol, ""});
    if (options.flip_sign)
      checks.push_back({"remainder terms under n_K -> -n_K", flip, tol, flip <= tol, ""});
  }

  {
    double homo = 0.0, newton = 0.0;
    for (int k = 0; k < 10; ++k)
    {
      const SymmetricForm phi(random_polynomial(rng, n, m, true));
      const Vector v = random_point(rng, n, 1.0);
      const HomogeneousRepresentation hr = homogeneous_representation(lat, phi, v);
      double scale = 1.0 + std::abs(hr.lhs);
      for (double t : hr.terms)
        scale += std::abs(t);
      homo = std::max(homo, hr.residual() / scale);

      const Vector x = random_point(rng, n, reach);
      const StagedDecomposition sd = newton_identity(lat, phi, x);
      double nscale = 1.0 + std::abs(sd.lhs);
      for (const StageTerm& t : sd.terms)
        nscale += std::abs(t.product);
      newton = std::max(newton, sd.residual() / nscale);
    }
    checks.push_back({"homogeneous representation", homo, tol, homo <= tol, ""});
    checks.push_back({"Newton-like identity", newton, tol, newton <= tol, ""});
  }

  if (n >= 2 && d >= n + 1)
  {
    const TechObservationReport tr = techobserv_check_all(lat);
    checks.push_back({"technical lemma", tr.max_abs, tol, tr.passed(tol),
                      std::to_string(tr.checked) + " pairs"});
  }
  else
    out << "technical lemma skipped: needs N >= 2 and d >= N + 1\n";

  return report_checks(checks, out);
}

int cmd_converge(const ExperimentConfig& config, const RunOptions& options, std::ostream& out)
{
  const LatticeSequence seq = config.sequence();
  const std::vector<int> s = config.s_values();
  ExperimentOptions eo;
  eo.radius = config.radius;
  eo.grid_points_per_axis = config.grid_points_per_axis;
  eo.conditions.c2_threshold = config.c2_threshold;
  eo.conditions.general_position = config.general_position;
  eo.conditions.threads = options.threads;
  eo.threads = options.threads;
  eo.bound.radius = config.radius;
  eo.bound.grid_points_per_axis = config.grid_points_per_axis;
  eo.bound.seed = config.seed;
  const RateReport rep = convergence_experiment(seq, *config.function, s, eo);
  const ConditionReport cond = check_conditions(seq, s, eo.conditions);

  std::ostringstream csv;
  csv << "s,t,lattice_norm,min_volume,max_offset,sup_error,coeff_error,bound,hypotheses_hold,bound_ok,valid\n";
  for (const RateRow& r : rep.rows)
  {
    const bool has = r.bound.has_value();
    csv << r.s << ',' << format_double(r.t) << ',' << format_double(r.lattice_norm) << ','
        << format_double(r.min_volume) << ',' << format_double(r.max_offset) << ','
        << format_double(r.sup_error) << ',' << format_double(r.coeff_error) << ','
        << (has ? format_double(r.bound->total_bound) : "nan") << ','
        << (has && r.bound->hypotheses_hold) << ',' << (has && r.bound->error_ok && r.bound->pk_ok) << ','
        << r.valid << '\n';
  }
  const bool to_file = !config.output.empty();
  if (to_file)
    write_file(config.output, csv.str());
  else
    out << csv.str();

  const std::string lead = to_file ? "" : "# ";
  const auto yes = [](bool b) { return b ? "PASS" : "FAIL"; };
  out << lead << "converge " << config.name << ", f = " << config.function->describe() << ", s = "
      << s.front() << ".." << s.back() << "\n";
  for (const RateRow& r : rep.rows)
    if (!r.valid)
      out << lead << "s = " << r.s << " skipped: " << r.error << "\n";
  out << lead << "coefficient slope " << short_double(rep.coeff_slope) << ", sup slope "
      << short_double(rep.sup_slope) << "\n";
  out << lead << "C1 (|Theta| -> 0) " << yes(cond.c1) << ", C2 (volume >= " << short_double(cond.c2_threshold)
      << ") " << yes(cond.c2) << ", C3 (offsets -> 0) " << yes(cond.c3) << "\n";
  out << lead << "bound at every s with hypotheses: " << yes(rep.bound_everywhere) << "\n";
  std::vector<double> sv, errs;
  for (const RateRow& r : rep.rows)
    if (r.valid)
    {
      sv.push_back(r.s);
      errs.push_back(r.coeff_error);
    }
  const std::string trend = tends_to_zero(sv, errs)    ? "decays"
                            : grows_unbounded(sv, errs) ? "diverges"
                                                        : "bounded";
  out << lead << "coefficient error " << trend << "\n";
  for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it)
    if (it->valid)
    {
      out << lead << "interpolant at s = " << it->s << " vs Taylor:";
      for (std::size_t k = 0; k < rep.exponents.size(); ++k)
        out << " " << exponent_text(rep.exponents[k]) << " " << short_double(it->interpolant_coefficients[k])
            << "/" << short_double(rep.taylor_coefficients[k]);
      out << "\n";
      break;
    }
  if (to_file)
    out << "wrote " << config.output << "\n";

  std::vector<std::string> missed;
  const Expectations& e = config.expect;
  if (e.slope_min && !(rep.coeff_slope >= *e.slope_min))
    missed.push_back("slope below " + short_double(*e.slope_min));
  if (e.slope_max && !(rep.coeff_slope <= *e.slope_max))
    missed.push_back("slope above " + short_double(*e.slope_max));
  if (e.c1 && *e.c1 != cond.c1)
    missed.push_back("C1 verdict");
  if (e.c2 && *e.c2 != cond.c2)
    missed.push_back("C2 verdict");
  if (e.c3 && *e.c3 != cond.c3)
    missed.push_back("C3 verdict");
  if (e.bound && *e.bound != rep.bound_everywhere)
    missed.push_back("bound verdict");
  if (e.error && *e.error != trend)
    missed.push_back("coefficient error " + trend + ", expected " + *e.error);
  for (const std::string& m : missed)
    out << lead << "expectation missed: " << m << "\n";
  return missed.empty() ? exit_ok : exit_acceptance;
}

int cmd_rate(const ExperimentConfig& config, const RunOptions& options, std::ostream& out)
{
  const LatticeSequence seq = config.sequence();
  const std::vector<int> s = config.s_values();
  BoundOptions bo;
  bo.radius = config.radius;
  bo.grid_points_per_axis = config.grid_points_per_axis;
  bo.seed = config.seed;

  std::vector<std::optional<BoundReport>> rows(s.size());
  std::vector<std::string> errors(s.size());
  parallel_for(s.size(), options.threads, [&](std::size_t i) {
    try
    {
      rows[i] = bound_evaluator(seq.lattice(s[i], config.general_position), *config.function, bo);
    }
    catch (const DegenerateError& e)
    {
      errors[i] = e.what();
    }
  });

  std::ostringstream csv;
  csv << "s,lattice_norm,delta,pk_sampled_max,pk_bound,measured_error,s1_bound,s2_bound,total_bound,"
         "hypotheses_hold,pk_ok,error_ok\n";
  bool ok = true;
  out << "rate " << config.name << ", f = " << config.function->describe() << ", R = "
      << short_double(config.radius) << "\n";
  out << "       s       |Theta|         delta        sup|P_K|     (2R/delta)^m      error        bound   hyp\n";
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    if (!rows[i])
    {
      out << "  s = " << s[i] << " skipped: " << errors[i] << "\n";
      continue;
    }
    const BoundReport& b = *rows[i];
    char line[256];
    std::snprintf(line, sizeof line, "%8d %13.6g %13.6g %13.6g %13.6g %13.6g %13.6g   %s%s\n", s[i],
                  b.lattice_norm, b.delta, b.pk_sampled_max, b.pk_bound, b.measured_error, b.total_bound,
                  b.hypotheses_hold ? "yes" : "no",
                  b.hypotheses_hold && !(b.pk_ok && b.error_ok) ? "  BOUND VIOLATED" : "");
    out << line;
    if (b.hypotheses_hold)
      ok = ok && b.pk_ok && b.error_ok;
    csv << s[i] << ',' << format_double(b.lattice_norm) << ',' << format_double(b.delta) << ','
        << format_double(b.pk_sampled_max) << ',' << format_double(b.pk_bound) << ','
        << format_double(b.measured_error) << ',' << format_double(b.s1_bound) << ','
        << format_double(b.s2_bound) << ',' << format_double(b.total_bound) << ',' << b.hypotheses_hold
        << ',' << b.pk_ok << ',' << b.error_ok << '\n';
  }
  if (!config.output.empty())
  {
    write_file(config.output, csv.str());
    out << "wrote " << config.output << "\n";
  }
  out << (ok ? "bounds hold wherever the hypotheses hold\n" : "bound violated\n");
  return ok ? exit_ok : exit_acceptance;
}

int run_command(const std::string& command, const std::string& config_path, const RunOptions& options,
                std::ostream& out, std::ostream& err)
{
  try
  {
    const ExperimentConfig config = apply_overrides(load_config(config_path), options);
    if (command == "lattice")
      return cmd_lattice(config, options, out);
    if (command == "verify")
      return cmd_verify(config, options, out);
    if (command == "converge")
      return cmd_converge(config, options, out);
    if (command == "rate")
      return cmd_rate(config, options, out);
    err << "error: unknown command " << command << "\n";
    return exit_validation;
  }
  catch (const DegenerateError& e)
  {
    err << "degenerate: " << e.what() << "\n";
    return exit_degenerate;
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  }
}

} // namespace cy::cli
