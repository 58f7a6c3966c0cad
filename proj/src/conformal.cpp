#include "infharm/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "infharm/error.hpp"
#include "infharm/inflap.hpp"

namespace infharm {

namespace {

Jet2 norm_sq(std::span<const Jet2> c) {
  Jet2 s(0.0, c.empty() ? 0 : c[0].dim());
  for (const Jet2& v : c) s += v * v;
  return s;
}

struct EuclideanData {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

EuclideanData euclidean_data(const SmoothMap& u, std::span<const double> x) {
  if (u.target().dim != 1) throw ArgumentError("expected a scalar function");
  const Jet2 f = u.evaluate(x)[0];
  const int m = static_cast<int>(x.size());
  EuclideanData d{Eigen::VectorXd(m), Eigen::MatrixXd(m, m)};
  for (int i = 0; i < m; ++i) {
    d.grad(i) = f.grad(i);
    for (int j = 0; j < m; ++j) d.hess(i, j) = f.hess(i, j);
  }
  return d;
}

double euclidean_inf_laplacian(const EuclideanData& d) { return d.grad.dot(d.hess * d.grad); }

}  // namespace

ConformalFactor::ConformalFactor(SmoothMap f) : f_(std::move(f)) {
  if (f_.target().dim != 1) throw ArgumentError("conformal factor must be scalar");
}

Jet2 ConformalFactor::evaluate(std::span<const double> x) const {
  const Jet2 v = f_.evaluate(x)[0];
  if (!(v.value() > 0.0)) throw InvalidFactorError("conformal factor F = " + std::to_string(v.value()) + " is not positive");
  return v;
}

Jet2 ConformalFactor::apply(std::span<const Jet2> coords) const {
  const Jet2 v = f_.apply(coords)[0];
  if (!(v.value() > 0.0)) throw InvalidFactorError("conformal factor F = " + std::to_string(v.value()) + " is not positive");
  return v;
}

ConformalFactor ConformalFactor::constant(const Chart& chart, double c) {
  return ConformalFactor(SmoothMap(chart, Chart::euclidean(1), [c](std::span<const Jet2> x) {
    return JetVector{Jet2(c, x.empty() ? 0 : x[0].dim())};
  }));
}

ConformalFactor ConformalFactor::sphere(int m) {
  return ConformalFactor(SmoothMap(Chart::euclidean(m, "R^" + std::to_string(m)), Chart::euclidean(1),
                                   [](std::span<const Jet2> x) { return JetVector{0.5 * (1.0 + norm_sq(x))}; }));
}

ConformalFactor ConformalFactor::hyperbolic(int m) {
  Chart ball{m,
             [](std::span<const double> x) {
               double s = 0.0;
               for (double v : x) s += v * v;
               return s < 1.0;
             },
             "B^" + std::to_string(m), Embedding::none};
  return ConformalFactor(SmoothMap(ball, Chart::euclidean(1),
                                   [](std::span<const Jet2> x) { return JetVector{0.5 * (1.0 - norm_sq(x))}; }));
}

double conformal_inf_laplacian(const SmoothMap& u, const Metric& g, const ConformalFactor& f,
                               std::span<const double> x) {
  const Jet2 fv = f.evaluate(x);
  const MetricGradient mg = metric_gradient(u, g, x);
  const double lap = inf_laplacian_function(u, g, x);
  double cross = 0.0;  // g(grad u, grad F) = dF(grad u)
  for (int i = 0; i < static_cast<int>(x.size()); ++i) cross += mg.grad(i) * fv.grad(i);
  const double F = fv.value();
  return F * F * F * F * lap + F * F * F * mg.norm_sq.value() * cross;
}

Metric conformally_scaled_metric(const Metric& g, const ConformalFactor& f) {
  return Metric(g.chart(), [g, f](std::span<const Jet2> c) {
    const JetMatrix e = g.entries(c);
    const Jet2 inv_sq = reciprocal(f.apply(c) * f.apply(c));
    JetMatrix out(e.size());
    for (int i = 0; i < e.size(); ++i) {
      for (int j = 0; j < e.size(); ++j) out(i, j) = inv_sq * e(i, j);
    }
    return out;
  });
}

double EquationTerms::relative() const {
  return std::abs(residual()) / std::max(1.0, std::abs(inf_laplacian) + std::abs(drift));
}

EquationTerms sphere_equation_terms(const SmoothMap& u, std::span<const double> x) {
  const EuclideanData d = euclidean_data(u, x);
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return {euclidean_inf_laplacian(d), 2.0 * d.grad.squaredNorm() * xv.dot(d.grad) / (1.0 + xv.squaredNorm())};
}

EquationTerms hyperbolic_equation_terms(const SmoothMap& u, std::span<const double> x) {
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const double r2 = xv.squaredNorm();
  if (!(r2 < 1.0)) throw OutOfBallError("|x| = " + std::to_string(std::sqrt(r2)) + " is not inside the unit ball");
  const EuclideanData d = euclidean_data(u, x);
  return {euclidean_inf_laplacian(d), -2.0 * d.grad.squaredNorm() * xv.dot(d.grad) / (1.0 - r2)};
}

double sphere_equation_residual(const SmoothMap& u, std::span<const double> x) {
  return sphere_equation_terms(u, x).residual();
}

double hyperbolic_equation_residual(const SmoothMap& u, std::span<const double> x) {
  return hyperbolic_equation_terms(u, x).residual();
}

double sphere_restriction_residual(const SmoothMap& u, std::span<const double> x) {
  Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  const double r = xv.norm();
  if (!(std::abs(r - 1.0) <= kSphereTolerance)) {
    throw ArgumentError("point is off the unit sphere: |x| = " + std::to_string(r));
  }
  xv /= r;
  const std::vector<double> p(xv.data(), xv.data() + xv.size());
  const EuclideanData d = euclidean_data(u, p);
  const Eigen::VectorXd& gu = d.grad;
  const Eigen::MatrixXd& H = d.hess;
  const double q = xv.dot(gu);                        // du/dr
  const Eigen::VectorXd gq = gu + H * xv;             // grad (du/dr)
  // Delta_inf u - 1/2 <grad u, grad q^2> - 1/2 q d/dr(|du|^2 - q^2)
  const double t1 = gu.dot(H * gu);
  const double t2 = q * gu.dot(gq);
  const double t3 = q * (xv.dot(H * gu) - q * xv.dot(gq));
  return t1 - t2 - t3;
}

double sphere_restriction_polar(const SmoothMap& u, std::span<const double> x) {
  if (x.size() != 3) throw ArgumentError("polar cross-check is for S^2 in R^3");
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  if (!(std::abs(r - 1.0) <= kSphereTolerance)) {
    throw ArgumentError("point is off the unit sphere: |x| = " + std::to_string(r));
  }
  const double t = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
  if (std::sin(t) < 1e-8) throw SingularPointError("polar chart is singular at the poles", {x.begin(), x.end()});
  const double p = std::atan2(x[1], x[0]);
  Chart polar{2, [](std::span<const double> c) { return c[0] > 0.0 && c[0] < std::numbers::pi; },
              "S^2 minus poles (t, p)", Embedding::none};
  const Metric g = Metric::diagonal(polar, [](std::span<const Jet2> c) {
    const Jet2 s = sin(c[0]);
    return JetVector{Jet2(1.0, c[0].dim()), s * s};
  });
  const SmoothMap restricted(polar, Chart::euclidean(1), [u](std::span<const Jet2> c) {
    const Jet2 s = sin(c[0]);
    const JetVector y{s * cos(c[1]), s * sin(c[1]), cos(c[0])};
    return u.apply(y);
  });
  const std::vector<double> tp{t, p};
  return inf_laplacian_function(restricted, g, tp);
}

}  // namespace infharm
