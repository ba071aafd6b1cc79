#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cy/chungyao.hpp"
#include "cy/convergence.hpp"
#include "support.hpp"

#include <cmath>

using namespace cy;
using cy::testing::gaussian_vector;
using cy::testing::point_in_ball;
using cy::testing::random_poly;
using cy::testing::sweep_family;

namespace
{

ChungYaoLattice triangle()
{
  return ChungYaoLattice{HyperplaneFamily(unit_triangle_family())};
}

double staged_scale(const StagedDecomposition& s)
{
  double m = std::abs(s.lhs);
  for (const StageTerm& t : s.terms)
    m += std::abs(t.product);
  return std::max(1.0, m);
}

} // namespace

TEST_CASE("cardinal polynomials on the unit triangle")
{
  const ChungYaoLattice lat = triangle();
  // vertex (0,0): the single factor l3(x)/l3(0) = 1 - x1 - x2
  const MultiPoly l0 = cardinal_polynomial(lat, lat.index_of({0, 1}));
  CHECK(l0.coefficient({0, 0}) == doctest::Approx(1.0));
  CHECK(l0.coefficient({1, 0}) == doctest::Approx(-1.0));
  CHECK(l0.coefficient({0, 1}) == doctest::Approx(-1.0));
  for (std::size_t h = 0; h < lat.size(); ++h)
    for (std::size_t g = 0; g < lat.size(); ++g)
      CHECK(std::abs(cardinal_value(lat, h, lat.vertex(g)) - (h == g ? 1.0 : 0.0)) <= 1e-15);
}

TEST_CASE("interpolation reproduces polynomials")
{
  const ChungYaoLattice lat = triangle();
  MultiPoly p = MultiPoly::affine(Vector{2.0, -1.0}, 1.0);
  const Interpolant li = interpolate(lat, *make_polynomial(p));
  CHECK(max_coefficient_difference(li.polynomial, p) <= 1e-12);

  std::mt19937_64 rng(3);
  for (int n : {2, 3})
    for (int d = n; d <= n + 3; ++d)
      for (int k = 0; k < 3; ++k)
      {
        const ChungYaoLattice lat2(sweep_family(n, d, k));
        const MultiPoly q = random_poly(rng, n, d - n);
        const Interpolant lq = interpolate(lat2, *make_polynomial(q));
        CHECK(max_coefficient_difference(lq.polynomial, q) <= 1e-9 * q.max_abs_coefficient());

        // cardinality, partition of unity, projector on arbitrary data
        MultiPoly sum(n, d - n);
        for (std::size_t h = 0; h < lat2.size(); ++h)
          sum += cardinal_polynomial(lat2, h);
        CHECK(max_coefficient_difference(sum, MultiPoly::constant(n, 1.0).with_degree(d - n)) <= 1e-10);
        std::vector<double> data;
        for (std::size_t h = 0; h < lat2.size(); ++h)
          data.push_back(gaussian_vector(rng, 1)[0]);
        const Interpolant ld = interpolate(lat2, data);
        for (std::size_t h = 0; h < lat2.size(); ++h)
          CHECK(ld(lat2.vertex(h)) == doctest::Approx(data[h]).epsilon(1e-9));
        const Interpolant again = interpolate(lat2, *make_polynomial(ld.polynomial));
        CHECK(max_coefficient_difference(again.polynomial, ld.polynomial) <=
              1e-9 * (1 + ld.polynomial.max_abs_coefficient()));
        const Vector x = point_in_ball(rng, n, 1.0);
        CHECK(interpolate_factored(lat2, data, x) == doctest::Approx(ld(x)).epsilon(1e-9));
      }
}

TEST_CASE("interpolant of x1^2 on the degenerate triangle")
{
  // vertices (0,0), (t, t^3), (2t, 0) for t = 0.1, eps = 1
  const auto fam = degenerate_triangle_sequence(1.0).hyperplanes(10);
  const ChungYaoLattice lat{HyperplaneFamily(fam)};
  const Interpolant li = interpolate(lat, *make_monomial({2, 0}));
  CHECK(li.polynomial.coefficient({0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(li.polynomial.coefficient({1, 0}) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(li.polynomial.coefficient({0, 1}) == doctest::Approx(-10.0).epsilon(1e-12));
}

TEST_CASE("remainder formula")
{
  const ChungYaoLattice lat = triangle();
  const Vector x{0.3, 0.2};

  const auto lin = make_polynomial(MultiPoly::affine(Vector{1.5, -0.5}, 2.0));
  for (const RemainderTerm& t : deboor_remainder(lat, *lin, x).terms)
    CHECK(t.divided_difference == 0.0);

  // f = X^alpha with |alpha| = 2: f(x) - L(x) = sum_K P_K(x) n_K^alpha
  for (const MultiIndex& alpha : homogeneous_indices(2, 2))
  {
    const auto f = make_monomial(alpha);
    const RemainderDecomposition r = deboor_remainder(lat, *f, x);
    double rhs = r.interpolant_value;
    for (const RemainderTerm& t : r.terms)
    {
      const Vector& nk = lat.direction(t.K);
      rhs += pk_value(lat, t.K, 3, x) * std::pow(nk[0], alpha[0]) * std::pow(nk[1], alpha[1]);
    }
    CHECK(rhs == doctest::Approx(r.function_value).epsilon(1e-13));
    CHECK(r.residual() <= 1e-13);
  }

  const auto e = make_ridge(RidgeKind::exp, {1.0, 1.0});
  CHECK(deboor_remainder(lat, *e, x).residual() <= 1e-8);
}

TEST_CASE("remainder products are invariant under n_K -> -n_K")
{
  std::mt19937_64 rng(5);
  for (int n : {2, 3})
    for (int d = n; d <= n + 2; ++d)
    {
      const ChungYaoLattice lat(sweep_family(n, d, 1));
      MultiIndex alpha(n, 0);
      alpha[n - 1] = d - n + 1;
      const auto f = make_product(make_monomial(alpha), make_ridge(RidgeKind::cos, Vector(n, 0.3)));
      const Vector x = point_in_ball(rng, n, 0.5);
      RemainderOptions flip;
      flip.flip_direction_sign = true;
      const auto a = deboor_remainder(lat, *f, x);
      const auto b = deboor_remainder(lat, *f, x, flip);
      for (std::size_t i = 0; i < a.terms.size(); ++i)
      {
        const double sign = (d - n + 1) % 2 == 0 ? 1.0 : -1.0;
        CHECK(b.terms[i].pk == doctest::Approx(sign * a.terms[i].pk).epsilon(1e-12));
        CHECK(std::abs(a.terms[i].product - b.terms[i].product) <=
              1e-12 * std::max(1.0, std::abs(a.terms[i].product)));
      }
    }
}

TEST_CASE("homogeneous cardinal property and representation")
{
  std::mt19937_64 rng(7);
  for (int n : {2, 3})
    for (int d = n; d <= n + 3; ++d)
    {
      const ChungYaoLattice lat(sweep_family(n, d, 2));
      const auto& sets = lat.line_sets();
      for (const IndexSet& K : sets)
        for (const IndexSet& L : sets)
          CHECK(std::abs(pk_value(lat, K, d, lat.direction(L), true) - (K == L ? 1.0 : 0.0)) <= 1e-10);

      const int m = d - n + 1;
      MultiIndex first(n, 0);
      first[0] = m;
      const SymmetricForm mono{MultiPoly::monomial(first)};
      Vector e1(n, 0.0);
      e1[0] = 1.0;
      CHECK(homogeneous_representation(lat, mono, e1).rhs == doctest::Approx(1.0).epsilon(1e-10));

      const SymmetricForm phi(random_poly(rng, n, m, true));
      const auto at_nk = homogeneous_representation(lat, phi, lat.direction(sets[0]));
      CHECK(at_nk.rhs == doctest::Approx(phi.on_diagonal(lat.direction(sets[0]))).epsilon(1e-10));
      for (int j = 0; j < 50; ++j)
      {
        const auto r = homogeneous_representation(lat, phi, gaussian_vector(rng, n));
        CHECK(r.residual() <= 1e-9 * std::max(1.0, std::abs(r.lhs)));
      }
      CHECK_THROWS_AS(homogeneous_representation(lat, SymmetricForm(random_poly(rng, n, m + 1, true)), e1),
                      ValidationError);
    }
}

TEST_CASE("staged identity")
{
  std::mt19937_64 rng(11);
  for (int n : {2, 3})
    for (int d = n; d <= n + 3; ++d)
    {
      const ChungYaoLattice lat(sweep_family(n, d, 3));
      const int m = d - n + 1;
      for (int j = 0; j < 10; ++j)
      {
        const SymmetricForm phi(random_poly(rng, n, m, true));
        const Vector x = point_in_ball(rng, n, 2.0);
        const StagedDecomposition s = newton_identity(lat, phi, x);
        CHECK(s.residual() <= 1e-9 * staged_scale(s));
        CHECK(s.lhs == doctest::Approx(phi.on_diagonal(x)).epsilon(1e-14));
        for (const StageTerm& t : s.terms)
        {
          CHECK(t.stage >= static_cast<std::size_t>(n));
          CHECK(t.stage <= static_cast<std::size_t>(d + 1));
          CHECK(t.K.size() == static_cast<std::size_t>(n - 1));
          CHECK(t.K.back() < t.stage - 1 + (t.stage == static_cast<std::size_t>(d + 1) ? 1 : 0));
        }
      }
      // x = 0 with phi = x1^m: left side 0
      MultiIndex first(n, 0);
      first[0] = m;
      const auto z = newton_identity(lat, SymmetricForm{MultiPoly::monomial(first)}, Vector(n, 0.0));
      CHECK(z.lhs == 0.0);
      CHECK(std::abs(z.total()) <= 1e-10 * staged_scale(z));
    }
}

TEST_CASE("with d = N the staged identity is de Boor's identity for a linear form")
{
  std::mt19937_64 rng(13);
  for (int n : {2, 3, 4})
  {
    const ChungYaoLattice lat(sweep_family(n, n, 0));
    const Vector c = gaussian_vector(rng, n);
    const SymmetricForm phi(MultiPoly::affine(c, 0.0));
    const Vector x = point_in_ball(rng, n, 1.0);
    const StagedDecomposition s = newton_identity(lat, phi, x);
    // <c, x> = <c, theta> + sum_l l(x)/l~(n_{H\l}) <c, n_{H\l}>
    const IndexSet H = lat.subsets()[0];
    const auto coords = deboor_coordinates(lat, H, x);
    double expect = dot(c, lat.vertex(0));
    for (std::size_t j = 0; j < H.size(); ++j)
      expect += coords[j] * dot(c, lat.direction(remove_at(H, j)));
    CHECK(std::abs(s.total() - expect) <= 1e-12 * (1 + std::abs(expect)));
    CHECK(std::abs(s.lhs - expect) <= 1e-12 * (1 + std::abs(expect)));
  }
}

TEST_CASE("technical lemma")
{
  const ChungYaoLattice two(sweep_family(2, 4, 0));
  const auto vacuous = techobserv_check_all(two);
  CHECK(vacuous.checked == 0);
  CHECK(vacuous.passed(0.0));

  for (int k = 0; k < 5; ++k)
  {
    const ChungYaoLattice lat(sweep_family(3, 4, k));
    const auto r = techobserv_check_all(lat);
    CHECK(r.checked > 0);
    CHECK(r.max_abs <= 1e-10);
    bool some_contained_nonzero = false;
    for (const TechObservation& o : r.entries)
    {
      CHECK(o.contained == is_subset(o.K_prime, o.K));
      if (o.contained && std::abs(o.value) > 1e-6)
        some_contained_nonzero = true;
    }
    CHECK(some_contained_nonzero);
  }
  CHECK_THROWS_AS(techobserv_check_all(ChungYaoLattice{HyperplaneFamily(random_family(1, 3, 1))}),
                  ValidationError);
}

TEST_CASE("Taylor error decomposition")
{
  const ChungYaoLattice lat = triangle();
  const auto e = make_ridge(RidgeKind::exp, {1.0, 0.0});
  const Vector x{0.2, 0.1};
  const auto s = taylor_error_decomposition(lat, *e, x);
  CHECK(s.lhs == doctest::Approx(std::exp(0.2) - 1.2).epsilon(1e-14));
  CHECK(s.residual() <= 1e-8);

  const auto lin = make_polynomial(MultiPoly::affine(Vector{1.0, 2.0}, 3.0));
  const auto z = taylor_error_decomposition(lat, *lin, x);
  CHECK(std::abs(z.lhs) <= 1e-15);
  CHECK(std::abs(z.total()) <= 1e-15);

  std::mt19937_64 rng(17);
  for (int n : {2, 3})
    for (int d = n; d <= n + 2; ++d)
    {
      const ChungYaoLattice l2(sweep_family(n, d, 4));
      for (const MultiIndex& alpha : homogeneous_indices(n, d - n + 1))
      {
        const Vector y = point_in_ball(rng, n, 0.5);
        const auto t = taylor_error_decomposition(l2, *make_monomial(alpha), y);
        double ya = 1.0;
        for (int j = 0; j < n; ++j)
          ya *= std::pow(y[j], alpha[j]);
        CHECK(t.lhs == doctest::Approx(ya).epsilon(1e-13).scale(1.0));
        CHECK(t.residual() <= 1e-10 * staged_scale(t));
      }
    }
}

TEST_CASE("stage bookkeeping")
{
  const ChungYaoLattice lat(sweep_family(2, 4, 5));
  const Vector x{0.1, -0.2};
  CHECK(stage_arguments(lat, 5, {0}, x).size() == 3);
  const auto args = stage_arguments(lat, 3, {1}, x);
  CHECK(args.size() == 3);
  CHECK(distance(args[0], x) == 0.0);
  CHECK(distance(args[1], lat.vertex(IndexSet{1, 2})) == 0.0);
  CHECK(distance(args[2], lat.direction({1})) == 0.0);
  CHECK_THROWS_AS(pk_polynomial(lat, {3}, 3), ValidationError);
  const MultiPoly p = pk_polynomial(lat, {0}, 4);
  CHECK(p.effective_degree(1e-14) == 3);
}
