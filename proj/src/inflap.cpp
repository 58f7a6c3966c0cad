#include "infharm/inflap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "infharm/error.hpp"
#include "infharm/parallel.hpp"

namespace infharm {

namespace {

// Everything the per-point operators need, evaluated once.
struct Local {
  JetVector comps;
  Point y;
  Eigen::MatrixXd jac;  // n x m
  MetricAt g;
  JetMatrix h_pulled;   // h(phi(x)) differentiated in source coordinates
  Eigen::MatrixXd h;
  Jet1 energy;
};

void check_dims(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x) {
  if (g.dim() != phi.source().dim) throw ArgumentError("source metric dimension does not match the map");
  if (h.dim() != phi.target().dim) throw ArgumentError("target metric dimension does not match the map");
  if (static_cast<int>(x.size()) != phi.source().dim) throw ArgumentError("point has wrong dimension");
}

Jet1 energy_from(const Local& l, int m) {
  const Eigen::MatrixXd pull = l.jac.transpose() * l.h * l.jac;  // m x m
  Jet1 e((l.g.inverse.cwiseProduct(pull)).sum(), m);
  const int n = static_cast<int>(l.jac.rows());
  for (int k = 0; k < m; ++k) {
    Eigen::MatrixXd dj(n, m);
    Eigen::MatrixXd dh(n, n);
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < m; ++i) dj(a, i) = l.comps[static_cast<size_t>(a)].hess(i, k);
      for (int b = 0; b < n; ++b) dh(a, b) = l.h_pulled(a, b).grad(k);
    }
    const Eigen::MatrixXd dpull =
        dj.transpose() * l.h * l.jac + l.jac.transpose() * l.h * dj + l.jac.transpose() * dh * l.jac;
    const double d = l.g.inverse_derivative(k).cwiseProduct(pull).sum() + l.g.inverse.cwiseProduct(dpull).sum();
    e.set_grad(k, d);
  }
  return e;
}

Local local(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x) {
  check_dims(phi, g, h, x);
  Local l;
  l.comps = phi.evaluate(x);
  l.y = values(l.comps);
  l.jac = jacobian(l.comps);
  l.g = evaluate_metric(g, x);
  try {
    l.h_pulled = h.entries(l.comps);
  } catch (const SingularPointError& e) {
    throw e.at(Point(x.begin(), x.end()));
  }
  l.h = evaluate_metric(l.h_pulled).g;
  l.energy = energy_from(l, static_cast<int>(x.size()));
  return l;
}

Eigen::VectorXd gradient_of(const Jet1& f) {
  Eigen::VectorXd v(f.dim());
  for (int i = 0; i < f.dim(); ++i) v(i) = f.grad(i);
  return v;
}

Eigen::VectorXd inf_laplacian_from(const Local& l) {
  return 0.5 * l.jac * (l.g.inverse * gradient_of(l.energy));
}

Eigen::VectorXd tension_from(const Local& l, const Metric& h) {
  const int m = static_cast<int>(l.jac.cols());
  const int n = static_cast<int>(l.jac.rows());
  const Christoffel gam = christoffel(l.g);
  const Christoffel hgam = christoffel(evaluate_metric(h, l.y));
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    const Jet2& f = l.comps[static_cast<size_t>(c)];
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double hess = f.hess(i, j);
        for (int k = 0; k < m; ++k) hess -= gam(k, i, j) * l.jac(c, k);
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) hess += hgam(c, a, b) * l.jac(a, i) * l.jac(b, j);
        }
        s += l.g.inverse(i, j) * hess;
      }
    }
    tau(c) = s;
  }
  return tau;
}

double h_norm(const Eigen::VectorXd& v, const Eigen::MatrixXd& h) { return std::sqrt(std::max(0.0, v.dot(h * v))); }

}  // namespace

Jet1 energy_density(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x) {
  return local(phi, g, h, x).energy;
}

double inf_laplacian_function(const SmoothMap& u, const Metric& g, std::span<const double> x) {
  const MetricGradient mg = metric_gradient(u, g, x);
  return 0.5 * mg.grad.dot(gradient_of(mg.norm_sq));
}

Eigen::VectorXd inf_laplacian_map(const SmoothMap& phi, const Metric& g, const Metric& h,
                                  std::span<const double> x) {
  return inf_laplacian_from(local(phi, g, h, x));
}

Eigen::VectorXd euclidean_system_lhs(const SmoothMap& phi, std::span<const double> x) {
  if (phi.source().embedding != Embedding::none) throw ArgumentError("component system needs a Euclidean domain");
  const JetVector comps = phi.evaluate(x);
  const int m = static_cast<int>(x.size());
  const int n = static_cast<int>(comps.size());
  // grad |grad phi^b|^2 = 2 Hess(phi^b) grad phi^b
  std::vector<Eigen::VectorXd> grads(static_cast<size_t>(n), Eigen::VectorXd(m));
  std::vector<Eigen::VectorXd> energy_grads(static_cast<size_t>(n), Eigen::VectorXd(m));
  for (int b = 0; b < n; ++b) {
    const Jet2& f = comps[static_cast<size_t>(b)];
    for (int i = 0; i < m; ++i) grads[static_cast<size_t>(b)](i) = f.grad(i);
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += 2.0 * f.hess(k, i) * f.grad(i);
      energy_grads[static_cast<size_t>(b)](k) = s;
    }
  }
  Eigen::VectorXd lhs(n);
  for (int a = 0; a < n; ++a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += grads[static_cast<size_t>(a)].dot(energy_grads[static_cast<size_t>(b)]);
    lhs(a) = s;
  }
  return lhs;
}

Eigen::VectorXd tension_field(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x) {
  return tension_from(local(phi, g, h, x), h);
}

Eigen::VectorXd p_laplacian(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x,
                            double p) {
  if (!(p > 1.0)) throw ArgumentError("p-Laplacian needs p > 1");
  const Local l = local(phi, g, h, x);
  const double e = l.energy.value();
  if (e <= 0.0 && p < 4.0) {
    throw VanishingEnergyError("|d phi| vanishes at the point and p < 4");
  }
  const Eigen::VectorXd tau = tension_from(l, h);
  const Eigen::VectorXd lap = inf_laplacian_from(l);
  return std::pow(e, 0.5 * (p - 2.0)) * tau + (p - 2.0) * std::pow(e, 0.5 * (p - 4.0)) * lap;
}

MapReport map_report(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x,
                     double rank_tol) {
  const Local l = local(phi, g, h, x);
  const PointFrame frame = differential_frame(phi, g, h, x, rank_tol);
  MapReport r;
  r.point.assign(x.begin(), x.end());
  r.energy_density = std::max(0.0, l.energy.value());
  r.inf_laplacian = inf_laplacian_from(l);
  r.tension = tension_from(l, h);
  r.inf_laplacian_norm = h_norm(r.inf_laplacian, l.h);
  r.rank = frame.rank;
  r.near_degenerate = frame.near_degenerate;
  r.critical = frame.rank == 0;

  const double scale = std::pow(std::max(1.0, r.energy_density), 1.5);
  r.inf_harmonic_residual = r.inf_laplacian_norm / scale;
  if (r.critical) return r;

  const Eigen::VectorXd de = gradient_of(l.energy);
  r.dilation_sq = r.energy_density / r.rank;
  const Eigen::MatrixXd& xh = frame.horizontal;
  const Eigen::MatrixXd pulled = xh.transpose() * l.jac.transpose() * l.h * l.jac * xh;
  const Eigen::MatrixXd spread = pulled - r.dilation_sq * Eigen::MatrixXd::Identity(r.rank, r.rank);
  r.conformality_residual = spread.norm() / r.dilation_sq;
  // Horizontal component of grad e in the g-orthonormal frame: X^T g (g^-1 de).
  r.energy_gradient_vertical_residual = (xh.transpose() * de).norm() / r.energy_density;
  const Eigen::VectorXd push = l.jac * (l.g.inverse * de) / r.rank;
  r.homothety_residual = 0.5 * r.rank * h_norm(push, l.h) / scale;
  const int target_dim = phi.target().intrinsic_dim();
  r.onto_deficit = std::max(0.0, static_cast<double>(target_dim - r.rank) / target_dim);
  return r;
}

// ---------------------------------------------------------------------------

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::infinity_harmonic: return "infinity_harmonic";
    case Verdict::hwc: return "hwc";
    case Verdict::horizontally_homothetic: return "horizontally_homothetic";
    case Verdict::infinity_harmonic_morphism: return "infinity_harmonic_morphism";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (Verdict v : kAllVerdicts) {
    if (verdict_name(v) == name) return v;
  }
  return std::nullopt;
}

std::vector<std::string> VerdictSet::names() const {
  std::vector<std::string> out;
  for (Verdict v : kAllVerdicts) {
    if (contains(v)) out.push_back(verdict_name(v));
  }
  if (out.empty()) out.push_back("none");
  return out;
}

Classification classify_reports(std::span<const MapReport> reports, double tol) {
  if (reports.empty()) throw ArgumentError("classification needs at least one sample point");
  if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
  Classification c;
  c.tolerance = tol;
  c.sample_count = static_cast<int>(reports.size());
  const std::pair<const char*, double MapReport::*> fields[] = {
      {"inf_harmonic", &MapReport::inf_harmonic_residual},
      {"energy_gradient_vertical", &MapReport::energy_gradient_vertical_residual},
      {"conformality", &MapReport::conformality_residual},
      {"onto_deficit", &MapReport::onto_deficit},
      {"homothety", &MapReport::homothety_residual},
      {"inf_laplacian_raw", &MapReport::inf_laplacian_norm},
  };
  for (const auto& [name, field] : fields) {
    double worst = 0.0;
    const MapReport* at = &reports[0];
    // Sequential scan in sample order: ties keep the earliest point.
    for (const MapReport& r : reports) {
      const double v = r.*field;
      if (std::isnan(v)) throw SingularPointError("non-finite residual", r.point);
      if (v > worst) {
        worst = v;
        at = &r;
      }
    }
    c.worst_residuals[name] = worst;
    c.worst_points[name] = at->point;
  }
  for (const MapReport& r : reports) {
    c.critical_points += r.critical ? 1 : 0;
    c.near_degenerate_points += r.near_degenerate ? 1 : 0;
  }

  const bool ih = c.worst_residuals["inf_harmonic"] < tol;
  const bool hwc = c.worst_residuals["conformality"] < tol && c.worst_residuals["onto_deficit"] == 0.0;
  const bool hh = hwc && c.worst_residuals["homothety"] < tol;
  // On an hwc map the homothety and infinity-harmonic residuals coincide up
  // to rounding; requiring both keeps the implication exact.
  const bool morphism = hwc && ih && hh;
  if (ih) c.verdict.insert(Verdict::infinity_harmonic);
  if (hwc) c.verdict.insert(Verdict::hwc);
  if (hh) c.verdict.insert(Verdict::horizontally_homothetic);
  if (morphism) c.verdict.insert(Verdict::infinity_harmonic_morphism);

  const VerdictSet implied{Verdict::hwc, Verdict::infinity_harmonic, Verdict::horizontally_homothetic};
  if (c.verdict.contains(Verdict::infinity_harmonic_morphism) && !c.verdict.contains_all(implied)) {
    throw std::logic_error("verdict set violates morphism => hwc, infinity harmonic, homothetic");
  }
  return c;
}

Classification classify(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const Point> samples,
                        double tol, double rank_tol) {
  if (samples.empty()) throw ArgumentError("classification needs at least one sample point");
  std::vector<MapReport> reports(samples.size());
  detail::parallel_for(samples.size(), [&](size_t i) { reports[i] = map_report(phi, g, h, samples[i], rank_tol); });
  return classify_reports(reports, tol);
}

// ---------------------------------------------------------------------------

namespace {

bool is_onto(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.rows() > a.cols()) return false;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > 1e-10 * s(0);
}

SmoothMap distance_after(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  return SmoothMap(Chart::euclidean(m), Chart::euclidean(1), [a, n, m](std::span<const Jet2> c) {
    Jet2 s(0.0, c[0].dim());
    for (int r = 0; r < n; ++r) {
      Jet2 row(0.0, c[0].dim());
      for (int i = 0; i < m; ++i) row += a(r, i) * c[static_cast<size_t>(i)];
      s += row * row;
    }
    return JetVector{sqrt(s)};
  });
}

}  // namespace

LinearMorphism linear_morphism_check(const Eigen::MatrixXd& a) {
  LinearMorphism out;
  if (!is_onto(a)) return out;
  const Eigen::MatrixXd aat = a * a.transpose();
  const double lam_sq = aat.trace() / static_cast<double>(a.rows());
  const Eigen::MatrixXd spread = aat - lam_sq * Eigen::MatrixXd::Identity(a.rows(), a.rows());
  if (spread.cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, lam_sq)) {
    out.is_morphism = true;
    out.lambda = std::sqrt(lam_sq);
  }
  return out;
}

Eigen::VectorXd blowup_witness_direction(const Eigen::MatrixXd& a) {
  if (!is_onto(a)) throw ArgumentError("blow-up probe needs an onto matrix");
  if (linear_morphism_check(a).is_morphism) {
    throw DegenerateProbeError("matrix is horizontally conformal; the infinity Laplacian vanishes identically");
  }
  const int m = static_cast<int>(a.cols());
  std::vector<Eigen::VectorXd> candidates;
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
      v(i) += 1.0;
      if (j != i) {
        candidates.push_back((v + Eigen::VectorXd::Unit(m, j)).normalized());
        candidates.push_back((v - Eigen::VectorXd::Unit(m, j)).normalized());
      } else {
        candidates.push_back(v);
      }
    }
  }
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 64; ++k) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = normal(rng);
    candidates.push_back(v.normalized());
  }

  const SmoothMap u = distance_after(a);
  const Metric g = Metric::euclidean(Chart::euclidean(m));
  Eigen::VectorXd best;
  double best_value = 0.0;
  for (const Eigen::VectorXd& w : candidates) {
    if ((a * w).norm() < 1e-6) continue;
    const Point x(w.data(), w.data() + m);
    const double v = std::abs(inf_laplacian_function(u, g, x));
    if (v > best_value * (1.0 + 1e-12)) {
      best_value = v;
      best = w;
    }
  }
  if (best.size() == 0) throw DegenerateProbeError("no direction with nonzero infinity Laplacian found");
  return best;
}

std::vector<double> morphism_blowup_probe(const Eigen::MatrixXd& a, std::span<const double> radii) {
  if (radii.empty()) throw ArgumentError("blow-up probe needs radii");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ArgumentError("radii must be positive");
    if (i && !(radii[i] < radii[i - 1])) throw ArgumentError("radii must decrease");
  }
  const Eigen::VectorXd w = blowup_witness_direction(a);
  const int m = static_cast<int>(a.cols());
  const SmoothMap u = distance_after(a);
  const Metric g = Metric::euclidean(Chart::euclidean(m));
  std::vector<double> out;
  for (double r : radii) {
    const Eigen::VectorXd p = r * w;
    out.push_back(std::abs(inf_laplacian_function(u, g, Point(p.data(), p.data() + m))));
  }
  return out;
}

double pullback_energy_check(const SmoothMap& pi, const Metric& g, const Metric& h, const SmoothMap& f,
                             std::span<const Point> samples) {
  if (f.target().dim != 1) throw ArgumentError("pullback check needs a scalar function on the target");
  if (f.source().dim != pi.target().dim) throw ArgumentError("function is not defined on the map's target");
  const SmoothMap fpi = compose(f, pi);
  std::vector<double> residuals(samples.size(), 0.0);
  detail::parallel_for(samples.size(), [&](size_t s) {
    const Point& x = samples[s];
    const double lhs = metric_gradient(fpi, g, x).norm_sq.value();
    const MapReport rep = map_report(pi, g, h, x);
    const Point y = values(pi.evaluate(x));
    const MetricAt ha = evaluate_metric(h, y);
    const JetVector fy = f.evaluate(y);
    Eigen::VectorXd df(static_cast<Eigen::Index>(y.size()));
    for (size_t i = 0; i < y.size(); ++i) df(static_cast<Eigen::Index>(i)) = fy[0].grad(static_cast<int>(i));
    Eigen::VectorXd grad = ha.inverse * df;
    if (pi.target().embedding == Embedding::unit_sphere) grad = pi.target().tangent_projector(y) * grad;
    const double rhs = grad.dot(ha.g * grad);
    residuals[s] = std::abs(lhs - rep.dilation_sq * rhs);
  });
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

}  // namespace infharm
