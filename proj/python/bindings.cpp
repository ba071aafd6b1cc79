#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cy/chungyao.hpp"
#include "cy/cli/commands.hpp"
#include "cy/convergence.hpp"
#include "cy/divdiff.hpp"
#include "cy/errors.hpp"

#include <sstream>

namespace py = pybind11;
using namespace cy;

namespace
{

py::dict coefficient_dict(const MultiPoly& p)
{
  py::dict out;
  for (std::size_t k = 0; k < p.basis().size(); ++k)
    out[py::tuple(py::cast(p.basis()[k]))] = p.coefficients()[k];
  return out;
}

ChungYaoLattice make_lattice(const std::vector<Hyperplane>& planes, double det_tol, double dedup_tol)
{
  GeneralPositionOptions o;
  o.det_tolerance = det_tol;
  o.dedup_tolerance = dedup_tol;
  return ChungYaoLattice(HyperplaneFamily(planes, o));
}

RidgeKind ridge_kind(const std::string& name)
{
  if (name == "exp")
    return RidgeKind::exp;
  if (name == "sin")
    return RidgeKind::sin;
  if (name == "cos")
    return RidgeKind::cos;
  throw ValidationError("unknown ridge kind '" + name + "'");
}

// pybind11 holders cannot point to const
using Fn = std::shared_ptr<SmoothFunction>;

Fn wrap(FunctionPtr f)
{
  return std::const_pointer_cast<SmoothFunction>(std::move(f));
}

} // namespace

PYBIND11_MODULE(_cylattice, m)
{
  m.doc() = "Chung-Yao lattices, interpolation and divided differences";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  auto degenerate = py::register_exception<DegenerateError>(m, "DegenerateError", error.ptr());
  py::register_exception<GeneralPositionError>(m, "GeneralPositionError", degenerate.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", error.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", error.ptr());

  py::class_<Hyperplane>(m, "Hyperplane")
      .def(py::init<Vector, double>(), py::arg("normal"), py::arg("offset"))
      .def_property_readonly("normal", &Hyperplane::normal)
      .def_property_readonly("offset", &Hyperplane::offset)
      .def("__call__", [](const Hyperplane& h, const Vector& x) { return h(x); })
      .def("__repr__", [](const Hyperplane& h) {
        std::ostringstream s;
        s << "Hyperplane(normal=[";
        for (std::size_t i = 0; i < h.normal().size(); ++i)
          s << (i ? ", " : "") << h.normal()[i];
        s << "], offset=" << h.offset() << ")";
        return s.str();
      });

  m.def("random_family", [](int n, int count, std::uint64_t seed, double det_tol, double dedup_tol) {
        GeneralPositionOptions o;
        o.det_tolerance = det_tol;
        o.dedup_tolerance = dedup_tol;
        return random_family(n, count, seed, o).hyperplanes();
      },
      py::arg("dimension"), py::arg("count"), py::arg("seed"), py::arg("det_tolerance") = 1e-8,
      py::arg("dedup_tolerance") = 1e-8);
  m.def("family_from_simplex", [](const std::vector<Vector>& pts) { return family_from_simplex(pts); });

  py::class_<ChungYaoLattice>(m, "Lattice")
      .def(py::init(&make_lattice), py::arg("hyperplanes"), py::arg("det_tolerance") = 1e-8,
           py::arg("dedup_tolerance") = 1e-8)
      .def_property_readonly("dimension", &ChungYaoLattice::dimension)
      .def_property_readonly("degree", &ChungYaoLattice::degree)
      .def_property_readonly("norm", &ChungYaoLattice::norm)
      .def_property_readonly("vertices", &ChungYaoLattice::vertices)
      .def_property_readonly("subsets", &ChungYaoLattice::subsets)
      .def_property_readonly("line_sets", &ChungYaoLattice::line_sets)
      .def_property_readonly("hyperplanes", [](const ChungYaoLattice& l) { return l.family().hyperplanes(); })
      .def("direction", &ChungYaoLattice::direction, py::arg("K"))
      .def("certificate", [](const ChungYaoLattice& l) {
        const GeneralPositionReport& r = l.family().certificate();
        py::dict d;
        d["accepted"] = r.accepted;
        d["min_abs_det"] = r.min_abs_det;
        d["worst_subset"] = r.worst_subset;
        d["min_vertex_separation"] = r.min_vertex_separation;
        return d;
      })
      .def("__len__", &ChungYaoLattice::size);

  m.def("deboor_identity_residual", [](const ChungYaoLattice& l, const IndexSet& H, const Vector& x) {
    return deboor_identity_residual(l, H, x);
  });

  py::class_<SmoothFunction, Fn>(m, "Function")
      .def_property_readonly("dimension", &SmoothFunction::dimension)
      .def("__call__", [](const SmoothFunction& f, const Vector& x) { return f(x); })
      .def("derivative", [](const SmoothFunction& f, const Vector& x, const std::vector<Vector>& v) {
        return f.derivative(x, v);
      })
      .def("__repr__", &SmoothFunction::describe);

  m.def("ridge", [](const std::string& kind, Vector c, double shift, double amp) {
        return wrap(make_ridge(ridge_kind(kind), std::move(c), shift, amp));
      },
      py::arg("kind"), py::arg("coefficients"), py::arg("shift") = 0.0, py::arg("amplitude") = 1.0);
  m.def("monomial", [](const MultiIndex& a) { return wrap(make_monomial(a)); }, py::arg("alpha"));
  m.def("polynomial", [](int n, const std::map<MultiIndex, double>& terms) {
        int degree = 0;
        for (const auto& [alpha, c] : terms)
        {
          int total = 0;
          for (int a : alpha)
            total += a;
          degree = std::max(degree, total);
        }
        MultiPoly p(n, degree);
        for (const auto& [alpha, c] : terms)
          p.add_to_coefficient(alpha, c);
        return wrap(make_polynomial(std::move(p)));
      },
      py::arg("dimension"), py::arg("terms"));
  m.def("product", [](Fn a, Fn b) { return wrap(make_product(a, b)); });
  m.def("sum", [](Fn a, Fn b) { return wrap(make_sum(a, b)); });

  m.def("interpolate", [](const ChungYaoLattice& l, Fn f) {
    return coefficient_dict(interpolate(l, *f).polynomial);
  });
  m.def("interpolate_values", [](const ChungYaoLattice& l, const std::vector<double>& v) {
    return coefficient_dict(interpolate(l, v).polynomial);
  });
  m.def("taylor", [](Fn f, const Vector& center, int order) {
    return coefficient_dict(taylor(*f, center, order));
  });
  m.def("cardinal", [](const ChungYaoLattice& l, std::size_t i, const Vector& x) {
    return cardinal_value(l, i, x);
  });

  m.def("deboor_remainder",
        [](const ChungYaoLattice& l, Fn f, const Vector& x, bool flip, double tolerance) {
          RemainderOptions o;
          o.flip_direction_sign = flip;
          o.divdiff.tolerance = tolerance;
          const RemainderDecomposition r = deboor_remainder(l, *f, x, o);
          py::dict d;
          d["function_value"] = r.function_value;
          d["interpolant_value"] = r.interpolant_value;
          d["residual"] = r.residual();
          py::list terms;
          for (const RemainderTerm& t : r.terms)
            terms.append(py::dict(py::arg("K") = t.K, py::arg("pk") = t.pk,
                                  py::arg("divided_difference") = t.divided_difference,
                                  py::arg("product") = t.product));
          d["terms"] = terms;
          return d;
        },
        py::arg("lattice"), py::arg("f"), py::arg("x"), py::arg("flip_sign") = false,
        py::arg("quadrature_tolerance") = 0.0);

  m.def("divided_difference",
        [](Fn f, const std::vector<Vector>& points, const std::vector<Vector>& dirs,
           int degree, double tolerance) {
          DivDiffOptions o;
          o.quadrature_degree = degree;
          o.tolerance = tolerance;
          return divided_difference(*f, points, dirs, o);
        },
        py::arg("f"), py::arg("points"), py::arg("directions"), py::arg("quadrature_degree") = 0,
        py::arg("tolerance") = 0.0);

  py::class_<LatticeSequence>(m, "LatticeSequence")
      .def_property_readonly("name", &LatticeSequence::name)
      .def("hyperplanes", &LatticeSequence::hyperplanes)
      .def("lattice", [](const LatticeSequence& s, int k) { return s.lattice(k); });
  m.def("affine_triangle_sequence", [] { return affine_triangle_sequence(); });
  m.def("degenerate_triangle_sequence", &degenerate_triangle_sequence, py::arg("epsilon"));
  m.def("geometric_s_values", &geometric_s_values);
  m.def("fit_loglog_slope", [](const std::vector<double>& x, const std::vector<double>& y) {
    return fit_loglog_slope(x, y);
  });

  m.def("convergence_experiment",
        [](const LatticeSequence& seq, Fn f, const std::vector<int>& s, unsigned threads) {
          ExperimentOptions o;
          o.threads = threads;
          o.conditions.threads = threads;
          const RateReport r = convergence_experiment(seq, *f, s, o);
          py::list rows;
          for (const RateRow& row : r.rows)
          {
            py::dict d;
            d["s"] = row.s;
            d["valid"] = row.valid;
            d["lattice_norm"] = row.lattice_norm;
            d["min_volume"] = row.min_volume;
            d["max_offset"] = row.max_offset;
            d["sup_error"] = row.sup_error;
            d["coeff_error"] = row.coeff_error;
            d["bound"] = row.bound ? py::cast(row.bound->total_bound) : py::none();
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["coeff_slope"] = r.coeff_slope;
          out["sup_slope"] = r.sup_slope;
          out["c1"] = r.c1;
          out["c2"] = r.c2;
          out["bound_everywhere"] = r.bound_everywhere;
          return out;
        },
        py::arg("sequence"), py::arg("f"), py::arg("s_values"), py::arg("threads") = 1);

  m.def("run_command",
        [](const std::string& command, const std::string& config, std::optional<std::string> out) {
          cli::RunOptions o;
          o.out = std::move(out);
          std::ostringstream text, err;
          const int code = cli::run_command(command, config, o, text, err);
          return py::make_tuple(code, text.str() + err.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out") = py::none());
}
