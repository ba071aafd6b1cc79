#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cy/convergence.hpp"
#include "cy/geometry.hpp"
#include "support.hpp"

#include <cmath>

using namespace cy;
using cy::testing::gaussian_vector;
using cy::testing::point_in_ball;
using cy::testing::sweep_family;

namespace
{

Vector cross(const Vector& a, const Vector& b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ChungYaoLattice triangle()
{
  return ChungYaoLattice{HyperplaneFamily(unit_triangle_family())};
}

} // namespace

TEST_CASE("hyperplane normalization")
{
  const Hyperplane h({3.0, 4.0}, 10.0);
  CHECK(norm(h.normal()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.offset() == doctest::Approx(2.0));
  CHECK(h(Vector{0.6, 0.8}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(Hyperplane({0.0, 0.0}, 1.0), ValidationError);

  const Hyperplane t = Hyperplane::through_points(std::vector<Vector>{{1, 0}, {0, 1}});
  CHECK(std::abs(t(Vector{1, 0})) < 1e-15);
  CHECK(std::abs(t(Vector{0, 1})) < 1e-15);
  CHECK(std::abs(t(Vector{0, 0})) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("general position on the unit triangle")
{
  const auto fam = unit_triangle_family();
  const GeneralPositionReport r = check_general_position(fam);
  CHECK(r.accepted);
  CHECK(r.injective);
  // pair determinants: {x1, x2} -> 1, pairs with (1,1)/sqrt2 -> 1/sqrt2
  CHECK(subset_volume(fam, {0, 1}) == doctest::Approx(1.0));
  CHECK(subset_volume(fam, {0, 2}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(subset_volume(fam, {1, 2}) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(r.min_abs_det == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("general position rejections")
{
  const std::vector<Hyperplane> concurrent{Hyperplane({1, 0}, 0), Hyperplane({0, 1}, 0),
                                           Hyperplane({1, 1}, 0)};
  const auto a = check_general_position(concurrent);
  CHECK_FALSE(a.accepted);
  CHECK_FALSE(a.injective);
  CHECK(a.collision.has_value());

  const std::vector<Hyperplane> parallel{Hyperplane({1, 0}, 0), Hyperplane({1, 0}, 1),
                                         Hyperplane({0, 1}, 0)};
  const auto b = check_general_position(parallel);
  CHECK_FALSE(b.accepted);
  REQUIRE(b.degenerate_subset.has_value());
  CHECK(*b.degenerate_subset == IndexSet{0, 1});
  CHECK_THROWS_AS(HyperplaneFamily{parallel}, GeneralPositionError);
  try
  {
    HyperplaneFamily f{parallel};
  }
  catch (const GeneralPositionError& e)
  {
    CHECK(e.report().degenerate_subset == IndexSet{0, 1});
    CHECK(std::string(e.what()).find("{1,2}") != std::string::npos);
  }

  CHECK_THROWS_AS(check_general_position(std::vector<Hyperplane>{Hyperplane({1, 0}, 0)}),
                  ValidationError);
}

TEST_CASE("vertices of the unit triangle")
{
  const auto fam = unit_triangle_family();
  const auto v01 = solve_vertex(std::vector<Hyperplane>{fam[0], fam[1]});
  const auto v02 = solve_vertex(std::vector<Hyperplane>{fam[0], fam[2]});
  const auto v12 = solve_vertex(std::vector<Hyperplane>{fam[1], fam[2]});
  CHECK(distance(v01, Vector{0, 0}) < 1e-15);
  CHECK(distance(v02, Vector{0, 1}) < 1e-15);
  CHECK(distance(v12, Vector{1, 0}) < 1e-15);

  const ChungYaoLattice lat = triangle();
  CHECK(lat.size() == 3);
  CHECK(lat.degree() == 1);
  CHECK(lat.norm() == doctest::Approx(1.0));
  CHECK(distance(lat.vertex(IndexSet{1, 2}), Vector{1, 0}) < 1e-15);
}

TEST_CASE("direction vectors")
{
  const Vector a = direction_vector(std::vector<Vector>{{1, 0}}, 2);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == -1.0);
  const Vector b = direction_vector(std::vector<Vector>{{0, 1}}, 2);
  CHECK(b[0] == 1.0);
  CHECK(b[1] == 0.0);
  const Vector c = direction_vector(std::vector<Vector>{{1, 0, 0}, {0, 1, 0}}, 3);
  CHECK(distance(c, Vector{0, 0, 1}) < 1e-15);
  CHECK_THROWS_AS(direction_vector(std::vector<Vector>{{1, 0, 0}, {2, 0, 0}}, 3), DegenerateError);

  // det(v, a, b) = <v, a x b>
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k)
  {
    const Vector p = gaussian_vector(rng, 3), q = gaussian_vector(rng, 3);
    const Vector n = direction_vector(std::vector<Vector>{p, q}, 3);
    CHECK(distance(n, cross(p, q)) < 1e-13 * (1 + norm(n)));
  }
}

TEST_CASE("lattice invariants on random families")
{
  std::mt19937_64 rng(43);
  for (int n : {2, 3, 4})
    for (int d = n; d <= n + 3; ++d)
      for (int k = 0; k < 3; ++k)
      {
        const ChungYaoLattice lat(random_family(n, d, 77u * d + k + 100u * n));
        CHECK(static_cast<double>(lat.size()) == binomial(d, n));
        CHECK(static_cast<double>(lat.size()) == binomial(n + lat.degree(), n));
        for (std::size_t h = 0; h < lat.size(); ++h)
          for (std::size_t i : lat.subsets()[h])
            CHECK(std::abs(lat.family()[i](lat.vertex(h))) <= 1e-10 * (1 + norm(lat.vertex(h))));

        const auto& sets = lat.line_sets();
        CHECK(static_cast<double>(sets.size()) == binomial(d, n - 1));
        for (std::size_t a = 0; a < sets.size(); ++a)
        {
          const Vector& nk = lat.direction(sets[a]);
          CHECK(norm(nk) > 0.0);
          CHECK(norm(nk) <= 1.0 + 1e-12);
          for (std::size_t i : sets[a])
            CHECK(std::abs(lat.family()[i].linear(nk)) <= 1e-12);
          for (std::size_t b = a + 1; b < sets.size(); ++b)
            CHECK(distance(nk, lat.direction(sets[b])) > 0.0);
        }

        for (const LineSubset& ls : lat.line_subsets())
        {
          CHECK(static_cast<int>(ls.points.size()) == d - n + 1);
          for (const Vector& p : ls.points)
          {
            for (std::size_t i : ls.K)
              CHECK(std::abs(lat.family()[i](p)) <= 1e-10 * (1 + norm(p)));
            // collinear along n_K
            const Vector diff = axpy(-1.0, ls.points.front(), p);
            const double along = dot(diff, ls.direction) / dot(ls.direction, ls.direction);
            CHECK(distance(diff, axpy(along, ls.direction, Vector(n, 0.0))) <=
                  1e-10 * (1 + norm(diff)));
          }
        }

        for (int j = 0; j < 10; ++j)
        {
          const Vector x = point_in_ball(rng, n, 10.0);
          for (const IndexSet& H : lat.subsets())
            CHECK(deboor_identity_residual(lat, H, x) <= 1e-10 * (1 + norm(x)) * (1 + lat.norm()));
        }
      }
}

TEST_CASE("de Boor identity examples")
{
  const ChungYaoLattice lat = triangle();
  CHECK(deboor_identity_residual(lat, {0, 1}, Vector{1, 1}) <= 1e-12);
  for (std::size_t h = 0; h < lat.size(); ++h)
    CHECK(deboor_identity_residual(lat, lat.subsets()[h], lat.vertex(h)) == 0.0);
  const auto c = deboor_coordinates(lat, {0, 1}, Vector{0.25, 0.5});
  CHECK(c.size() == 2);
}

TEST_CASE("d = N gives one point per line set")
{
  const ChungYaoLattice lat(sweep_family(3, 3, 0));
  CHECK(lat.size() == 1);
  for (const LineSubset& ls : lat.line_subsets())
    CHECK(ls.points.size() == 1);
  const ChungYaoLattice tri = triangle();
  for (const LineSubset& ls : tri.line_subsets())
    CHECK(ls.points.size() == 2);
}

TEST_CASE("flipping a hyperplane equation leaves the vertices unchanged")
{
  const HyperplaneFamily fam = random_family(3, 5, 9);
  std::vector<Hyperplane> flipped = fam.hyperplanes();
  flipped[1] = flipped[1].flipped();
  flipped[3] = flipped[3].flipped();
  const ChungYaoLattice a(fam), b{HyperplaneFamily(flipped)};
  for (std::size_t h = 0; h < a.size(); ++h)
    CHECK(distance(a.vertex(h), b.vertex(h)) <= 1e-12 * (1 + norm(a.vertex(h))));
}

TEST_CASE("random family generator")
{
  const HyperplaneFamily a = random_family(2, 4, 5), b = random_family(2, 4, 5);
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    CHECK(a[i].normal() == b[i].normal());
    CHECK(a[i].offset() >= 0.2);
    CHECK(a[i].offset() <= 1.0);
  }
  CHECK_THROWS_AS(random_family(3, 2, 1), ValidationError);
}

TEST_CASE("index helpers")
{
  CHECK(combinations(4, 2).size() == 6);
  CHECK(combinations(3, 0).size() == 1);
  CHECK(combinations(4, 2)[1] == IndexSet{0, 2});
  CHECK(remove_at({1, 4, 6}, 1) == IndexSet{1, 6});
  CHECK(insert_sorted({1, 6}, 4) == IndexSet{1, 4, 6});
  CHECK(is_subset({1, 6}, {1, 4, 6}));
  CHECK_FALSE(is_subset({2}, {1, 4, 6}));
  CHECK(to_string(IndexSet{0, 2}) == "{1,3}");
}
