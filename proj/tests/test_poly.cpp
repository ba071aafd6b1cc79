#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cy/errors.hpp"
#include "cy/function.hpp"
#include "cy/linalg.hpp"
#include "cy/poly.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace cy;
using cy::testing::gaussian_vector;
using cy::testing::random_poly;

namespace
{

// Pascal's triangle, independent of cy::binomial
long pascal(int n, int k)
{
  std::vector<long> row{1};
  for (int i = 0; i < n; ++i)
  {
    std::vector<long> next(row.size() + 1, 1);
    for (std::size_t j = 1; j < row.size(); ++j)
      next[j] = row[j - 1] + row[j];
    row = next;
  }
  return row[k];
}

// central differences in direction v, used only as a cross-check
double fd_directional(const SmoothFunction& f, const Vector& x, const Vector& v, double h = 1e-5)
{
  Vector xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    xp[i] += h * v[i];
    xm[i] -= h * v[i];
  }
  return (f(xp) - f(xm)) / (2 * h);
}

} // namespace

TEST_CASE("determinant, solve and inverse")
{
  // 2x2 and 3x3 by cofactor expansion by hand
  Matrix a = Matrix::from_rows(std::vector<Vector>{{3, 1}, {4, 2}});
  CHECK(determinant(a) == doctest::Approx(2.0));
  Matrix b = Matrix::from_rows(std::vector<Vector>{{2, 0, 1}, {1, 3, 2}, {1, 1, 1}});
  CHECK(determinant(b) == doctest::Approx(2 * (3 - 2) - 0 + 1 * (1 - 3)));
  CHECK(determinant(Matrix::from_rows(std::vector<Vector>{{1, 2}, {2, 4}})) == 0.0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial)
  {
    const int n = 1 + trial % 5;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = gaussian_vector(rng, 1)[0];
    const Vector x = gaussian_vector(rng, n);
    const Vector y = solve(m, m.apply(x));
    for (int i = 0; i < n; ++i)
      CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-9));
    const Matrix inv = inverse(m);
    const Vector back = m.apply(inv.apply(x));
    for (int i = 0; i < n; ++i)
      CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(solve(Matrix(2, 2), Vector{1, 1}), DegenerateError);
}

TEST_CASE("compensated sum keeps small terms")
{
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i)
    s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

TEST_CASE("multi-index enumeration sizes and order")
{
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d)
    {
      CHECK(static_cast<long>(multi_indices(n, d).size()) == pascal(n + d, d));
      CHECK(static_cast<long>(homogeneous_indices(n, d).size()) == pascal(n + d - 1, d));
    }
  const std::vector<MultiIndex> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(multi_indices(2, 2) == expect);

  const auto basis = MonomialBasis::get(3, 5);
  for (std::size_t i = 0; i < basis->size(); ++i)
    CHECK(basis->index_of((*basis)[i]) == i);
  for (std::size_t i = 1; i < basis->size(); ++i)
    CHECK(total_degree((*basis)[i - 1]) <= total_degree((*basis)[i]));
}

TEST_CASE("polynomial arithmetic agrees with pointwise arithmetic")
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial)
  {
    const int n = 1 + trial % 3;
    const MultiPoly p = random_poly(rng, n, 3);
    const MultiPoly q = random_poly(rng, n, 2);
    const MultiPoly prod = p * q;
    CHECK(prod.degree() == 5);
    for (int k = 0; k < 5; ++k)
    {
      const Vector x = gaussian_vector(rng, n);
      CHECK(prod(x) == doctest::Approx(p(x) * q(x)).epsilon(1e-11));
      CHECK((p + q)(x) == doctest::Approx(p(x) + q(x)).epsilon(1e-11));
      CHECK((p - 2.5 * q)(x) == doctest::Approx(p(x) - 2.5 * q(x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("partial, directional derivative and affine composition")
{
  // d/dx1 (x1^2 x2 + 3 x2^3) = 2 x1 x2
  MultiPoly p = MultiPoly::monomial({2, 1}) + 3.0 * MultiPoly::monomial({0, 3});
  const MultiPoly dp = p.partial(0);
  CHECK(dp.coefficient({1, 1}) == 2.0);
  CHECK(dp.max_abs_coefficient() == 2.0);
  // D_v p = v1 * 2 x1 x2 + v2 * (x1^2 + 9 x2^2)
  const MultiPoly dv = p.directional_derivative(Vector{0.5, -1.0});
  CHECK(dv.coefficient({1, 1}) == doctest::Approx(1.0));
  CHECK(dv.coefficient({2, 0}) == doctest::Approx(-1.0));
  CHECK(dv.coefficient({0, 2}) == doctest::Approx(-9.0));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial)
  {
    const MultiPoly q = random_poly(rng, 2, 4);
    const Vector a = gaussian_vector(rng, 2);
    Matrix m(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = gaussian_vector(rng, 1)[0];
    const MultiPoly c = q.compose_affine(a, m);
    CHECK(c.dimension() == 3);
    const Vector y = gaussian_vector(rng, 3);
    CHECK(c(y) == doctest::Approx(q(axpy(1.0, m.apply(y), a))).epsilon(1e-10));
  }
}

TEST_CASE("degree handling")
{
  MultiPoly p = MultiPoly::monomial({1, 1}) + MultiPoly::constant(2, 1.0);
  CHECK(p.with_degree(5).degree() == 5);
  CHECK_THROWS_AS(p.with_degree(1), ValidationError);
  CHECK(p.homogeneous_part(2).is_homogeneous(2));
  CHECK_FALSE(p.is_homogeneous(2));
  CHECK(p.with_degree(6).effective_degree() == 2);
}

TEST_CASE("monomial integrals over the standard simplex")
{
  // hand values on the triangle
  CHECK(integrate_over_standard_simplex(MultiPoly::constant(2, 1.0)) == doctest::Approx(0.5));
  CHECK(integrate_over_standard_simplex(MultiPoly::monomial({1, 0})) == doctest::Approx(1.0 / 6));
  CHECK(integrate_over_standard_simplex(MultiPoly::monomial({2, 0})) == doctest::Approx(1.0 / 12));
  CHECK(integrate_over_standard_simplex(MultiPoly::monomial({1, 1})) == doctest::Approx(1.0 / 24));
  CHECK(integrate_over_standard_simplex(MultiPoly::constant(3, 1.0)) == doctest::Approx(1.0 / 6));
}

TEST_CASE("polarization")
{
  const Vector e1{1, 0}, e2{0, 1};
  CHECK(polarize(MultiPoly::monomial({2, 0}), std::vector<Vector>{e1, e1}) == doctest::Approx(1.0));
  CHECK(polarize(MultiPoly::monomial({1, 1}), std::vector<Vector>{e1, e2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(polarize(MultiPoly::monomial({1, 1}) + MultiPoly::constant(2, 1.0),
                           std::vector<Vector>{e1, e2}),
                  ValidationError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial)
  {
    const int n = 2 + trial % 2;
    const int m = 1 + trial % 4;
    const MultiPoly p = random_poly(rng, n, m, true);
    std::vector<Vector> vs;
    for (int i = 0; i < m; ++i)
      vs.push_back(gaussian_vector(rng, n));
    const double base = polarize(p, vs);
    std::vector<Vector> perm = vs;
    std::reverse(perm.begin(), perm.end());
    CHECK(polarize(p, perm) == doctest::Approx(base).epsilon(1e-12));

    const Vector v = gaussian_vector(rng, n);
    const std::vector<Vector> diag(m, v);
    CHECK(polarize(p, diag) == doctest::Approx(p(v)).epsilon(1e-12));

    // multilinearity in the first slot
    const Vector u = gaussian_vector(rng, n);
    std::vector<Vector> mix = vs, only_u = vs;
    only_u[0] = u;
    mix[0] = axpy(2.0, u, vs[0]);
    CHECK(polarize(p, mix) == doctest::Approx(base + 2.0 * polarize(p, only_u)).epsilon(1e-10));

    const SymmetricForm phi(p);
    CHECK(phi.order() == m);
    CHECK(phi(vs) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("vandermonde")
{
  const std::vector<Vector> pts{{0, 0}, {1, 0}, {0, 1}};
  const auto basis = monomial_basis(2, 1);
  CHECK(vandermonde(pts, basis) == doctest::Approx(1.0));
  const std::vector<Vector> repeated{{0, 0}, {1, 0}, {1, 0}};
  CHECK(vandermonde(repeated, basis) == 0.0);

  std::mt19937_64 rng(23);
  const auto quad = monomial_basis(2, 2);
  std::vector<Vector> six;
  for (int i = 0; i < 6; ++i)
    six.push_back(gaussian_vector(rng, 2));
  const double v = vandermonde(six, quad);
  std::swap(six[1], six[4]);
  CHECK(vandermonde(six, quad) == doctest::Approx(-v).epsilon(1e-12));
  CHECK_THROWS_AS(vandermonde(six, basis), ValidationError);
  CHECK(monomial_basis(2, 3, true).size() == 4);
}

TEST_CASE("taylor polynomials")
{
  const auto e = make_ridge(RidgeKind::exp, {1.0, 1.0});
  const MultiPoly t1 = taylor(*e, Vector{0, 0}, 1);
  CHECK(t1.coefficient({0, 0}) == doctest::Approx(1.0));
  CHECK(t1.coefficient({1, 0}) == doctest::Approx(1.0));
  CHECK(t1.coefficient({0, 1}) == doctest::Approx(1.0));

  CHECK(taylor(*make_monomial({2, 0}), Vector{0, 0}, 1).max_abs_coefficient() == 0.0);

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial)
  {
    const MultiPoly p = random_poly(rng, 2, 3);
    const auto f = make_polynomial(p);
    const Vector a = gaussian_vector(rng, 2);
    CHECK(max_coefficient_difference(taylor(*f, a, 3), p) <= 1e-12 * (1 + p.max_abs_coefficient()));
    const MultiPoly t = taylor(*f, a, 2);
    CHECK(max_coefficient_difference(taylor(*make_polynomial(t), a, 2), t) <= 1e-12);
  }

  // local accuracy of T_a^3 of a sine ridge: error is O(h^4)
  const auto s = make_ridge(RidgeKind::sin, {0.7, -0.3}, 0.2);
  const Vector a{0.1, 0.4};
  const MultiPoly t3 = taylor(*s, a, 3);
  double prev = 0.0;
  for (double h : {1e-1, 5e-2})
  {
    const Vector x{a[0] + h, a[1] - h};
    const double err = std::abs(t3(x) - (*s)(x));
    if (prev > 0.0)
      CHECK(prev / err > 10.0);
    prev = err;
  }
}

TEST_CASE("derivative forms")
{
  const SymmetricForm q = derivative_form(*make_monomial({2, 0}), Vector{0.3, -0.2}, 2);
  CHECK(q(std::vector<Vector>{{1, 0}, {1, 0}}) == doctest::Approx(2.0));

  const Vector c{0.5, -1.5};
  const auto lin = make_polynomial(MultiPoly::affine(c, 0.0));
  const Vector v{2.0, 1.0};
  CHECK(derivative_form(*lin, Vector{7, 7}, 1)(std::vector<Vector>{v}) == doctest::Approx(dot(c, v)));

  const auto e = make_ridge(RidgeKind::exp, c);
  const SymmetricForm cubic = derivative_form(*e, Vector{0, 0}, 3);
  CHECK(cubic.on_diagonal(v) == doctest::Approx(std::pow(dot(c, v), 3)));
}

TEST_CASE("catalog derivatives match central differences")
{
  std::mt19937_64 rng(31);
  const auto a = make_ridge(RidgeKind::cos, {0.4, 0.9}, 0.1, 2.0);
  const auto b = make_polynomial(random_poly(rng, 2, 2));
  const auto e = make_ridge(RidgeKind::exp, {-0.3, 0.6});
  const std::vector<FunctionPtr> fs{a, make_sum(a, e), make_product(a, e), make_product(b, e)};
  for (const auto& f : fs)
    for (int k = 0; k < 5; ++k)
    {
      const Vector x = gaussian_vector(rng, 2);
      const Vector v = gaussian_vector(rng, 2);
      const Vector w = gaussian_vector(rng, 2);
      CHECK(f->derivative(x, std::vector<Vector>{v}) ==
            doctest::Approx(fd_directional(*f, x, v)).epsilon(1e-7));
      // second order against differences of the exact first derivative
      Vector xp = x, xm = x;
      for (int i = 0; i < 2; ++i)
      {
        xp[i] += 1e-5 * w[i];
        xm[i] -= 1e-5 * w[i];
      }
      const double fd2 = (f->derivative(xp, std::vector<Vector>{v}) -
                          f->derivative(xm, std::vector<Vector>{v})) /
                         2e-5;
      CHECK(f->derivative(x, std::vector<Vector>{v, w}) == doctest::Approx(fd2).epsilon(1e-6));
    }
}

TEST_CASE("capabilities")
{
  const auto g = make_value_only(2, [](std::span<const double> x) { return x[0] * x[1]; });
  CHECK((*g)(Vector{2, 3}) == 6.0);
  CHECK_THROWS_AS(g->derivative(Vector{0, 0}, std::vector<Vector>{{1, 0}}), CapabilityError);
  CHECK_THROWS_AS(taylor(*g, Vector{0, 0}, 1), CapabilityError);
  CHECK_NOTHROW(taylor(*g, Vector{0, 0}, 0));

  // product of polynomials collapses to a polynomial
  const auto p = make_product(make_monomial({1, 0}), make_monomial({0, 1}));
  REQUIRE(p->as_polynomial() != nullptr);
  CHECK(p->as_polynomial()->coefficient({1, 1}) == 1.0);
}
