#include "cy/cli/config.hpp"

#include "cy/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cy::cli
{

using nlohmann::json;

namespace
{

[[noreturn]] void bad(const std::string& path, const std::string& what)
{
  throw ValidationError("config " + (path.empty() ? std::string("/") : path) + ": " + what);
}

void only_keys(const json& j, const std::string& path, std::set<std::string> allowed)
{
  if (!j.is_object())
    bad(path, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      bad(path + "/" + key, "unknown key");
}

const json& need(const json& j, const std::string& path, const std::string& key)
{
  if (!j.contains(key))
    bad(path + "/" + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path)
{
  if (!j.is_number())
    bad(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path)
{
  if (!j.is_number_integer())
    bad(path, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path)
{
  if (!j.is_boolean())
    bad(path, "expected true or false");
  return j.get<bool>();
}

Expression expression(const json& j, const std::string& path)
{
  if (j.is_number())
    return Expression(j.get<double>());
  if (!j.is_string())
    bad(path, "expected a number or an expression string");
  try
  {
    return Expression::parse(j.get<std::string>());
  }
  catch (const ValidationError& e)
  {
    bad(path, e.what());
  }
}

std::vector<Expression> expression_vector(const json& j, const std::string& path, int size)
{
  if (!j.is_array())
    bad(path, "expected an array");
  if (static_cast<int>(j.size()) != size)
    bad(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  std::vector<Expression> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(expression(j[i], path + "/" + std::to_string(i)));
  return out;
}

Vector number_vector(const json& j, const std::string& path, int size)
{
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    bad(path, "expected an array of " + std::to_string(size) + " numbers");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(number(j[i], path + "/" + std::to_string(i)));
  return v;
}

MultiIndex exponent(const json& j, const std::string& path, int n)
{
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    bad(path, "expected " + std::to_string(n) + " exponents");
  MultiIndex alpha;
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    const int a = integer(j[i], path + "/" + std::to_string(i));
    if (a < 0)
      bad(path + "/" + std::to_string(i), "negative exponent");
    alpha.push_back(a);
  }
  return alpha;
}

FunctionPtr parse_function(const json& j, const std::string& path, int n)
{
  if (!j.is_object())
    bad(path, "expected an object");
  const std::string name = need(j, path, "name").is_string() ? j.at("name").get<std::string>() : "";
  if (name == "exp" || name == "sin" || name == "cos")
  {
    only_keys(j, path, {"name", "coefficients", "shift", "amplitude"});
    const RidgeKind kind = name == "exp" ? RidgeKind::exp : name == "sin" ? RidgeKind::sin : RidgeKind::cos;
    const Vector a = j.contains("coefficients") ? number_vector(j["coefficients"], path + "/coefficients", n)
                                                : Vector(n, 1.0);
    const double shift = j.contains("shift") ? number(j["shift"], path + "/shift") : 0.0;
    const double amp = j.contains("amplitude") ? number(j["amplitude"], path + "/amplitude") : 1.0;
    return make_ridge(kind, a, shift, amp);
  }
  if (name == "monomial")
  {
    only_keys(j, path, {"name", "exponent"});
    return make_monomial(exponent(need(j, path, "exponent"), path + "/exponent", n));
  }
  if (name == "polynomial")
  {
    only_keys(j, path, {"name", "terms"});
    const json& terms = need(j, path, "terms");
    if (!terms.is_array() || terms.empty())
      bad(path + "/terms", "expected a non-empty array");
    std::vector<std::pair<MultiIndex, double>> parsed;
    int degree = 0;
    for (std::size_t i = 0; i < terms.size(); ++i)
    {
      const std::string p = path + "/terms/" + std::to_string(i);
      only_keys(terms[i], p, {"exponent", "coefficient"});
      MultiIndex alpha = exponent(need(terms[i], p, "exponent"), p + "/exponent", n);
      const double c = number(need(terms[i], p, "coefficient"), p + "/coefficient");
      int total = 0;
      for (int a : alpha)
        total += a;
      degree = std::max(degree, total);
      parsed.emplace_back(std::move(alpha), c);
    }
    MultiPoly poly(n, degree);
    for (const auto& [alpha, c] : parsed)
      poly.add_to_coefficient(alpha, c);
    return make_polynomial(std::move(poly));
  }
  if (name == "sum" || name == "product")
  {
    only_keys(j, path, {"name", "terms"});
    const json& terms = need(j, path, "terms");
    if (!terms.is_array() || terms.size() < 2)
      bad(path + "/terms", "expected at least two functions");
    FunctionPtr acc = parse_function(terms[0], path + "/terms/0", n);
    for (std::size_t i = 1; i < terms.size(); ++i)
    {
      FunctionPtr next = parse_function(terms[i], path + "/terms/" + std::to_string(i), n);
      acc = name == "sum" ? make_sum(acc, next) : make_product(acc, next);
    }
    return acc;
  }
  bad(path + "/name", "unknown function '" + name +
                          "' (expected exp, sin, cos, monomial, polynomial, sum or product)");
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte)
{
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
  {
    if (text[i] == '\n')
    {
      ++line;
      column = 1;
    }
    else
      ++column;
  }
  return {line, column};
}

bool any_depends(const std::vector<Expression>& v)
{
  for (const Expression& e : v)
    if (e.depends_on_t())
      return true;
  return false;
}

Vector evaluate(const std::vector<Expression>& v, double t)
{
  Vector out;
  for (const Expression& e : v)
    out.push_back(e(t));
  return out;
}

} // namespace

bool ExperimentConfig::depends_on_s() const
{
  for (const HyperplaneSpec& h : hyperplanes)
    if (any_depends(h.normal) || h.offset.depends_on_t())
      return true;
  for (const auto& p : simplex)
    if (any_depends(p))
      return true;
  if (transform)
  {
    for (const auto& row : transform->matrix)
      if (any_depends(row))
        return true;
    if (any_depends(transform->offset))
      return true;
  }
  return false;
}

std::vector<Hyperplane> ExperimentConfig::base_family(int s) const
{
  const double t = 1.0 / s;
  if (random)
    return random_family(dimension, random->count, random->seed, general_position).hyperplanes();
  if (!simplex.empty())
  {
    std::vector<Vector> points;
    for (const auto& p : simplex)
      points.push_back(evaluate(p, t));
    return family_from_simplex(points);
  }
  std::vector<Hyperplane> out;
  for (const HyperplaneSpec& h : hyperplanes)
    out.emplace_back(evaluate(h.normal, t), h.offset(t));
  return out;
}

AffineMap ExperimentConfig::transform_at(int s) const
{
  if (!transform)
    throw ValidationError("config has no transform");
  const double t = 1.0 / s;
  Matrix m(dimension, dimension);
  for (int i = 0; i < dimension; ++i)
    for (int j = 0; j < dimension; ++j)
      m(i, j) = transform->matrix[i][j](t);
  return {m, evaluate(transform->offset, t)};
}

LatticeSequence ExperimentConfig::sequence() const
{
  bool base_moves = false;
  for (const HyperplaneSpec& h : hyperplanes)
    base_moves = base_moves || any_depends(h.normal) || h.offset.depends_on_t();
  for (const auto& p : simplex)
    base_moves = base_moves || any_depends(p);
  if (transform && !base_moves)
    return LatticeSequence::affine(name, base_family(1), [c = *this](int s) { return c.transform_at(s); });
  return LatticeSequence(name, [c = *this](int s) {
    std::vector<Hyperplane> base = c.base_family(s);
    return c.transform ? transform_family(base, c.transform_at(s)) : base;
  });
}

std::vector<int> ExperimentConfig::s_values() const
{
  return geometric_s_values(s_min, s_max);
}

int ExperimentConfig::lattice_s() const
{
  return s_lattice ? *s_lattice : s_min;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
  json root;
  try
  {
    root = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": JSON syntax error: " + e.what());
  }

  only_keys(root, "", {"name", "dimension", "family", "transform", "function", "s", "grid",
                       "tolerances", "thresholds", "seed", "output", "expect"});
  ExperimentConfig c;
  c.name = root.value("name", std::string("experiment"));
  c.dimension = integer(need(root, "", "dimension"), "/dimension");
  if (c.dimension < 1)
    bad("/dimension", "must be at least 1");
  const int n = c.dimension;

  if (root.contains("tolerances"))
  {
    const json& t = root["tolerances"];
    only_keys(t, "/tolerances", {"identity", "quadrature", "quadrature_degree", "det", "dedup"});
    if (t.contains("identity"))
      c.identity_tolerance = number(t["identity"], "/tolerances/identity");
    if (t.contains("quadrature"))
      c.quadrature_tolerance = number(t["quadrature"], "/tolerances/quadrature");
    if (t.contains("quadrature_degree"))
      c.quadrature_degree = integer(t["quadrature_degree"], "/tolerances/quadrature_degree");
    if (t.contains("det"))
      c.general_position.det_tolerance = number(t["det"], "/tolerances/det");
    if (t.contains("dedup"))
      c.general_position.dedup_tolerance = number(t["dedup"], "/tolerances/dedup");
  }

  const json& fam = need(root, "", "family");
  only_keys(fam, "/family", {"hyperplanes", "simplex", "random"});
  if (fam.size() != 1)
    bad("/family", "give exactly one of hyperplanes, simplex, random");
  if (fam.contains("hyperplanes"))
  {
    const json& hs = fam["hyperplanes"];
    if (!hs.is_array() || static_cast<int>(hs.size()) < n)
      bad("/family/hyperplanes", "expected an array of at least " + std::to_string(n) + " hyperplanes");
    for (std::size_t i = 0; i < hs.size(); ++i)
    {
      const std::string p = "/family/hyperplanes/" + std::to_string(i);
      only_keys(hs[i], p, {"normal", "offset"});
      c.hyperplanes.push_back({expression_vector(need(hs[i], p, "normal"), p + "/normal", n),
                               expression(need(hs[i], p, "offset"), p + "/offset")});
    }
  }
  else if (fam.contains("simplex"))
  {
    const json& ps = fam["simplex"];
    if (!ps.is_array() || static_cast<int>(ps.size()) != n + 1)
      bad("/family/simplex", "expected " + std::to_string(n + 1) + " points");
    for (std::size_t i = 0; i < ps.size(); ++i)
      c.simplex.push_back(expression_vector(ps[i], "/family/simplex/" + std::to_string(i), n));
  }
  else
  {
    const json& r = fam["random"];
    only_keys(r, "/family/random", {"count", "seed"});
    RandomFamilySpec spec;
    spec.count = integer(need(r, "/family/random", "count"), "/family/random/count");
    if (spec.count < n)
      bad("/family/random/count", "need at least " + std::to_string(n) + " hyperplanes");
    if (r.contains("seed"))
      spec.seed = static_cast<std::uint64_t>(integer(r["seed"], "/family/random/seed"));
    c.random = spec;
  }

  if (root.contains("transform"))
  {
    const json& t = root["transform"];
    only_keys(t, "/transform", {"matrix", "offset"});
    AffineSpec spec;
    const json& m = need(t, "/transform", "matrix");
    if (!m.is_array() || static_cast<int>(m.size()) != n)
      bad("/transform/matrix", "expected " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < m.size(); ++i)
      spec.matrix.push_back(expression_vector(m[i], "/transform/matrix/" + std::to_string(i), n));
    spec.offset = t.contains("offset") ? expression_vector(t["offset"], "/transform/offset", n)
                                       : std::vector<Expression>(n, Expression(0.0));
    c.transform = std::move(spec);
  }

  const json& f = need(root, "", "function");
  c.function = parse_function(f, "/function", n);
  c.function_text = c.function->describe();

  if (root.contains("s"))
  {
    const json& s = root["s"];
    only_keys(s, "/s", {"min", "max", "lattice"});
    if (s.contains("min"))
      c.s_min = integer(s["min"], "/s/min");
    c.s_max = s.contains("max") ? integer(s["max"], "/s/max") : c.s_min;
    if (s.contains("lattice"))
      c.s_lattice = integer(s["lattice"], "/s/lattice");
  }
  if (c.s_min < 1 || c.s_max < c.s_min)
    bad("/s", "need 1 <= min <= max");
  if (c.s_lattice && *c.s_lattice < 1)
    bad("/s/lattice", "must be at least 1");

  if (root.contains("grid"))
  {
    const json& g = root["grid"];
    only_keys(g, "/grid", {"radius", "points_per_axis"});
    if (g.contains("radius"))
      c.radius = number(g["radius"], "/grid/radius");
    if (g.contains("points_per_axis"))
      c.grid_points_per_axis = integer(g["points_per_axis"], "/grid/points_per_axis");
    if (!(c.radius > 0.0))
      bad("/grid/radius", "must be positive");
    if (c.grid_points_per_axis < 2)
      bad("/grid/points_per_axis", "must be at least 2");
  }

  if (root.contains("thresholds"))
  {
    only_keys(root["thresholds"], "/thresholds", {"c2"});
    if (root["thresholds"].contains("c2"))
      c.c2_threshold = number(root["thresholds"]["c2"], "/thresholds/c2");
  }
  if (root.contains("seed"))
    c.seed = static_cast<std::uint64_t>(integer(root["seed"], "/seed"));
  if (root.contains("output"))
  {
    if (!root["output"].is_string())
      bad("/output", "expected a path string");
    c.output = root["output"].get<std::string>();
  }

  if (root.contains("expect"))
  {
    const json& e = root["expect"];
    only_keys(e, "/expect", {"slope_min", "slope_max", "c1", "c2", "c3", "bound", "error"});
    if (e.contains("error"))
    {
      const json& v = e["error"];
      if (!v.is_string() || (v != "decays" && v != "diverges" && v != "bounded"))
        bad("/expect/error", "expected \"decays\", \"diverges\" or \"bounded\"");
      c.expect.error = v.get<std::string>();
    }
    if (e.contains("slope_min"))
      c.expect.slope_min = number(e["slope_min"], "/expect/slope_min");
    if (e.contains("slope_max"))
      c.expect.slope_max = number(e["slope_max"], "/expect/slope_max");
    for (const char* key : {"c1", "c2", "c3", "bound"})
      if (e.contains(key))
      {
        const bool v = boolean(e[key], std::string("/expect/") + key);
        std::string k = key;
        (k == "c1" ? c.expect.c1 : k == "c2" ? c.expect.c2 : k == "c3" ? c.expect.c3 : c.expect.bound) = v;
      }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

} // namespace cy::cli
