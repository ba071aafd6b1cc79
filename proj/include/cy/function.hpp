#pragma once

#include "cy/linalg.hpp"
#include "cy/poly.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace cy
{

/// A function on R^N that can report directional derivatives in closed form.
///
/// derivative(x, {v_1, ..., v_k}) returns D_{v_1} ... D_{v_k} f(x), which is
/// f^{(k)}(x)(v_1, ..., v_k). An empty direction list gives f(x).
class SmoothFunction
{
public:
  virtual ~SmoothFunction() = default;

  virtual int dimension() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual double derivative(std::span<const double> x, std::span<const Vector> directions) const = 0;

  /// Highest derivative order available; nullopt means unlimited.
  virtual std::optional<int> max_order() const { return std::nullopt; }

  /// Non-null when the function is a polynomial, enabling exact paths.
  virtual const MultiPoly* as_polynomial() const { return nullptr; }

  /// An upper bound of sup_{|a| <= radius} ||f^{(order)}(a)|| when one is
  /// known in closed form.
  virtual std::optional<double> derivative_norm_bound(int order, double radius) const
  {
    (void)order;
    (void)radius;
    return std::nullopt;
  }

  virtual std::string describe() const = 0;

  double operator()(std::span<const double> x) const { return value(x); }
};

using FunctionPtr = std::shared_ptr<const SmoothFunction>;

/// Throws CapabilityError when f cannot differentiate `order` times.
void require_order(const SmoothFunction& f, int order);

FunctionPtr make_polynomial(MultiPoly p);
FunctionPtr make_monomial(const MultiIndex& alpha);

enum class RidgeKind
{
  exp,
  sin,
  cos
};

/// amplitude * g(<coefficients, x> + shift) for g in {exp, sin, cos}.
FunctionPtr make_ridge(RidgeKind kind, Vector coefficients, double shift = 0.0,
                       double amplitude = 1.0);
FunctionPtr make_sum(FunctionPtr a, FunctionPtr b);
FunctionPtr make_product(FunctionPtr a, FunctionPtr b);
/// A function known only through its values; derivatives are unavailable.
FunctionPtr make_value_only(int dimension, std::function<double(std::span<const double>)> g,
                            std::string name = "samples");

/// Taylor polynomial of the given order at center, expanded in the monomial
/// basis about the origin.
MultiPoly taylor(const SmoothFunction& f, std::span<const double> center, int order);

/// The form (v_1, ..., v_m) -> f^{(m)}(a)(v_1, ..., v_m).
SymmetricForm derivative_form(const SmoothFunction& f, std::span<const double> a, int m);

} // namespace cy
