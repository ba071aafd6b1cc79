#pragma once

#include "cy/geometry.hpp"
#include "cy/poly.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cy::testing
{

// stricter general-position floors for the randomized sweeps
inline GeneralPositionOptions sweep_tolerances()
{
  GeneralPositionOptions gp;
  gp.det_tolerance = 0.05;
  gp.dedup_tolerance = 1e-3;
  return gp;
}

inline HyperplaneFamily sweep_family(int n, int d, int k)
{
  return random_family(n, d, 1000u * n + 10u * d + k, sweep_tolerances(), 1000);
}

/// Same normals, offsets scaled so that the lattice norm becomes `radius`.
inline HyperplaneFamily rescaled(const ChungYaoLattice& lattice, double radius)
{
  std::vector<Hyperplane> out;
  const double f = radius / lattice.norm();
  for (const Hyperplane& h : lattice.family().hyperplanes())
    out.emplace_back(h.normal(), f * h.offset());
  return HyperplaneFamily(std::move(out), lattice.family().options());
}

inline Vector gaussian_vector(std::mt19937_64& rng, int n)
{
  std::normal_distribution<double> g;
  Vector v(n);
  for (double& c : v)
    c = g(rng);
  return v;
}

inline Vector point_in_ball(std::mt19937_64& rng, int n, double radius)
{
  Vector v = gaussian_vector(rng, n);
  const double r = radius * std::pow(std::uniform_real_distribution<double>()(rng), 1.0 / n) / norm(v);
  for (double& c : v)
    c *= r;
  return v;
}

inline MultiPoly random_poly(std::mt19937_64& rng, int n, int degree, bool homogeneous = false)
{
  std::normal_distribution<double> g;
  MultiPoly p(n, degree);
  for (const MultiIndex& a : p.basis().exponents())
    if (!homogeneous || total_degree(a) == degree)
      p.set_coefficient(a, g(rng));
  return p;
}

inline double rel(double a, double b)
{
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace cy::testing
