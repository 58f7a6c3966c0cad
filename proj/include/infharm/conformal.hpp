#pragma once

// Infinity Laplacian under a conformal change of metric, the model-space
// equations on the sphere and hyperbolic ball, and restriction to the unit
// sphere.

#include <span>

#include "infharm/geometry.hpp"

namespace infharm {

/// Positive scalar F defining the conformal metric F^{-2} g.
class ConformalFactor {
 public:
  explicit ConformalFactor(SmoothMap f);

  const SmoothMap& map() const { return f_; }
  const Chart& chart() const { return f_.source(); }
  /// F at x with its derivatives; throws InvalidFactorError unless F(x) > 0.
  Jet2 evaluate(std::span<const double> x) const;
  /// F applied to jets (for building the scaled metric).
  Jet2 apply(std::span<const Jet2> coords) const;

  static ConformalFactor constant(const Chart& chart, double c);
  /// 1/2 (1 + |x|^2).
  static ConformalFactor sphere(int m);
  /// 1/2 (1 - |x|^2) on the unit ball.
  static ConformalFactor hyperbolic(int m);

 private:
  SmoothMap f_;
};

/// F^4 Delta_inf u + F^3 |grad u|^2 g(grad u, grad F), all with respect to g.
double conformal_inf_laplacian(const SmoothMap& u, const Metric& g, const ConformalFactor& f,
                               std::span<const double> x);

/// The metric F^{-2} g.
Metric conformally_scaled_metric(const Metric& g, const ConformalFactor& f);

/// Delta_inf u + 2 |grad u|^2 <x, grad u> / (1 + |x|^2), Euclidean quantities.
double sphere_equation_residual(const SmoothMap& u, std::span<const double> x);

/// Delta_inf u - 2 |grad u|^2 <x, grad u> / (1 - |x|^2). Throws OutOfBallError
/// unless |x| < 1.
double hyperbolic_equation_residual(const SmoothMap& u, std::span<const double> x);

/// The two terms of a model-space equation, whose sum is the residual.
struct EquationTerms {
  double inf_laplacian = 0.0;
  double drift = 0.0;

  double residual() const { return inf_laplacian + drift; }
  /// |residual| / max(1, |inf_laplacian| + |drift|): the residual measured
  /// against the size of the cancelling terms.
  double relative() const;
};

EquationTerms sphere_equation_terms(const SmoothMap& u, std::span<const double> x);
EquationTerms hyperbolic_equation_terms(const SmoothMap& u, std::span<const double> x);

inline constexpr double kSphereTolerance = 1e-12;

/// Infinity Laplacian on the unit sphere S^m of the restriction of u, from
/// the ambient derivatives of u on R^{m+1} at x. Throws ArgumentError unless
/// ||x| - 1| <= 1e-12; x is then normalized.
double sphere_restriction_residual(const SmoothMap& u, std::span<const double> x);

/// The same quantity for m = 2 computed intrinsically: u composed with the
/// polar parametrization (t, p) -> (sin t cos p, sin t sin p, cos t) under
/// dt^2 + sin^2 t dp^2. Throws SingularPointError at the poles.
double sphere_restriction_polar(const SmoothMap& u, std::span<const double> x);

}  // namespace infharm
