#include "infharm/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "infharm/error.hpp"

namespace infharm {

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) return false;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return !domain || domain(x);
}

Eigen::MatrixXd Chart::tangent_projector(std::span<const double> y) const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim, dim);
  if (embedding == Embedding::unit_sphere) {
    Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(y.data(), dim);
    const double norm = n.norm();
    if (norm == 0.0) throw SingularPointError("tangent projector of the sphere at the origin");
    n /= norm;
    p -= n * n.transpose();
  }
  return p;
}

Chart Chart::euclidean(int dim, std::string label) {
  if (dim < 1) throw ArgumentError("chart dimension must be >= 1");
  if (label.empty()) label = "R^" + std::to_string(dim);
  return Chart{dim, {}, std::move(label), Embedding::none};
}

Chart Chart::ambient_sphere(int ambient_dim, std::string label) {
  if (ambient_dim < 2) throw ArgumentError("ambient dimension of a sphere must be >= 2");
  if (label.empty()) label = "S^" + std::to_string(ambient_dim - 1) + " in R^" + std::to_string(ambient_dim);
  return Chart{ambient_dim, {}, std::move(label), Embedding::unit_sphere};
}

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
  }
  return m;
}

JetMatrix JetMatrix::identity(int n, int dim) {
  JetMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Jet2(i == j ? 1.0 : 0.0, dim);
  }
  return m;
}

// ---------------------------------------------------------------------------

Metric::Metric(Chart chart, MetricField entries, bool euclidean)
    : chart_(std::move(chart)), entries_(std::move(entries)), euclidean_(euclidean) {
  if (!entries_) throw ArgumentError("metric without entries");
}

Metric Metric::euclidean(Chart chart) {
  const int n = chart.dim;
  return Metric(
      std::move(chart),
      [n](std::span<const Jet2> c) { return JetMatrix::identity(n, c.empty() ? 0 : c[0].dim()); },
      true);
}

Metric Metric::diagonal(Chart chart, JetField diagonal) {
  const int n = chart.dim;
  return Metric(std::move(chart), [n, diagonal = std::move(diagonal)](std::span<const Jet2> c) {
    const JetVector d = diagonal(c);
    if (static_cast<int>(d.size()) != n) throw ArgumentError("diagonal metric returned wrong entry count");
    const int dim = c.empty() ? 0 : c[0].dim();
    JetMatrix m(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = i == j ? d[static_cast<size_t>(i)] : Jet2(0.0, dim);
    }
    return m;
  });
}

JetMatrix Metric::entries(std::span<const Jet2> coords) const {
  if (static_cast<int>(coords.size()) != chart_.dim) {
    throw ArgumentError("metric on " + chart_.label + " evaluated with " + std::to_string(coords.size()) +
                        " coordinates");
  }
  JetMatrix m = entries_(coords);
  if (m.size() != chart_.dim) throw ArgumentError("metric entries have wrong size on " + chart_.label);
  return m;
}

JetMatrix Metric::at(std::span<const double> x) const {
  const JetVector c = lift_point(x);
  try {
    return entries(c);
  } catch (const SingularPointError& e) {
    throw e.at(Point(x.begin(), x.end()));
  }
}

Eigen::MatrixXd MetricAt::inverse_derivative(int k) const {
  return -inverse * derivative[static_cast<size_t>(k)] * inverse;
}

MetricAt evaluate_metric(const JetMatrix& entries) {
  MetricAt out;
  out.g = entries.values();
  const int n = entries.size();
  const double scale = out.g.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) throw DegenerateMetricError("metric has non-finite entries");
  if ((out.g - out.g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw DegenerateMetricError("metric is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi)) {
    throw DegenerateMetricError("metric is not positive definite (eigenvalues " + std::to_string(lo) + ", " +
                                std::to_string(hi) + ")");
  }
  out.inverse = out.g.llt().solve(Eigen::MatrixXd::Identity(n, n));
  int dim = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dim = std::max(dim, entries(i, j).dim());
  }
  out.derivative.assign(static_cast<size_t>(dim), Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.derivative[static_cast<size_t>(k)](i, j) = entries(i, j).grad(k);
    }
  }
  return out;
}

MetricAt evaluate_metric(const Metric& metric, std::span<const double> x) {
  try {
    return evaluate_metric(metric.at(x));
  } catch (const DegenerateMetricError& e) {
    std::string where = " at (";
    for (size_t i = 0; i < x.size(); ++i) where += (i ? ", " : "") + std::to_string(x[i]);
    throw DegenerateMetricError(std::string(e.what()) + where + ")");
  }
}

// ---------------------------------------------------------------------------

SmoothMap::SmoothMap(Chart source, Chart target, JetField components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (!components_) throw ArgumentError("smooth map without components");
}

JetVector SmoothMap::apply(std::span<const Jet2> coords) const {
  if (static_cast<int>(coords.size()) != source_.dim) {
    throw ArgumentError("map from " + source_.label + " applied to " + std::to_string(coords.size()) +
                        " coordinates");
  }
  JetVector out = components_(coords);
  if (static_cast<int>(out.size()) != target_.dim) {
    throw ArgumentError("map into " + target_.label + " returned " + std::to_string(out.size()) + " components");
  }
  return out;
}

JetVector SmoothMap::evaluate(std::span<const double> x) const {
  const JetVector c = lift_point(x);
  JetVector out;
  try {
    out = apply(c);
  } catch (const SingularPointError& e) {
    throw e.at(Point(x.begin(), x.end()));
  }
  for (const Jet2& j : out) {
    bool finite = std::isfinite(j.value());
    for (int i = 0; i < j.dim() && finite; ++i) {
      finite = std::isfinite(j.grad(i));
      for (int k = 0; k < j.dim() && finite; ++k) finite = std::isfinite(j.hess(i, k));
    }
    if (!finite) throw SingularPointError("non-finite map jet", Point(x.begin(), x.end()));
  }
  return out;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (inner.target().dim != outer.source().dim) {
    throw ArgumentError("cannot compose: " + inner.target().label + " vs " + outer.source().label);
  }
  return SmoothMap(inner.source(), outer.target(), [outer, inner](std::span<const Jet2> c) {
    const JetVector mid = inner.apply(c);
    return outer.apply(mid);
  });
}

Eigen::MatrixXd jacobian(std::span<const Jet2> components) {
  const int n = static_cast<int>(components.size());
  const int m = n ? components[0].dim() : 0;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, m);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < m; ++i) j(a, i) = components[static_cast<size_t>(a)].grad(i);
  }
  return j;
}

Point values(std::span<const Jet2> components) {
  Point y;
  y.reserve(components.size());
  for (const Jet2& c : components) y.push_back(c.value());
  return y;
}

// ---------------------------------------------------------------------------

Christoffel christoffel(const MetricAt& g) {
  const int n = static_cast<int>(g.g.rows());
  Christoffel gamma(n);
  auto dg = [&](int k, int i, int j) {
    return k < static_cast<int>(g.derivative.size()) ? g.derivative[static_cast<size_t>(k)](i, j) : 0.0;
  };
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += g.inverse(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Christoffel christoffel(const Metric& g, std::span<const double> x) { return christoffel(evaluate_metric(g, x)); }

MetricGradient metric_gradient(const SmoothMap& u, const Metric& g, std::span<const double> x) {
  if (u.target().dim != 1) throw ArgumentError("metric_gradient needs a scalar function");
  const JetVector comps = u.evaluate(x);
  const Jet2& f = comps[0];
  const MetricAt ga = evaluate_metric(g, x);
  const int m = static_cast<int>(x.size());
  Eigen::VectorXd du(m);
  for (int i = 0; i < m; ++i) du(i) = f.grad(i);

  MetricGradient out;
  out.grad = ga.inverse * du;
  out.norm_sq = Jet1(du.dot(out.grad), m);
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd hk(m);
    for (int i = 0; i < m; ++i) hk(i) = f.hess(i, k);
    const double d = 2.0 * out.grad.dot(hk) + du.dot(ga.inverse_derivative(k) * du);
    out.norm_sq.set_grad(k, d);
  }
  return out;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& candidates, const Eigen::MatrixXd& gram, int max_vectors,
                             double cutoff, const Eigen::MatrixXd& against) {
  Eigen::MatrixXd work = candidates;
  const int rows = static_cast<int>(candidates.rows());
  auto remove = [&](const Eigen::VectorXd& q) {
    const Eigen::RowVectorXd qg = q.transpose() * gram;
    for (int c = 0; c < work.cols(); ++c) work.col(c) -= q * qg.dot(work.col(c));
  };
  for (int pass = 0; pass < 2; ++pass) {
    for (int a = 0; a < against.cols(); ++a) remove(against.col(a));
  }

  std::vector<Eigen::VectorXd> basis;
  std::vector<bool> used(static_cast<size_t>(work.cols()), false);
  while (static_cast<int>(basis.size()) < max_vectors) {
    int best = -1;
    double best_norm = -1.0;
    for (int c = 0; c < work.cols(); ++c) {
      if (used[static_cast<size_t>(c)]) continue;
      const double nrm = std::sqrt(std::max(0.0, work.col(c).dot(gram * work.col(c))));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = c;
      }
    }
    if (best < 0 || !(best_norm > cutoff) || best_norm == 0.0) break;
    used[static_cast<size_t>(best)] = true;
    Eigen::VectorXd q = work.col(best) / best_norm;
    // Second projection pass keeps the basis orthonormal to roundoff.
    for (const auto& b : basis) q -= b * b.dot(gram * q);
    for (int a = 0; a < against.cols(); ++a) q -= against.col(a) * against.col(a).dot(gram * q);
    q /= std::sqrt(q.dot(gram * q));
    remove(q);
    basis.push_back(q);
  }
  Eigen::MatrixXd out(rows, static_cast<int>(basis.size()));
  for (size_t c = 0; c < basis.size(); ++c) out.col(static_cast<int>(c)) = basis[c];
  return out;
}

PointFrame differential_frame(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x,
                              double rank_tol) {
  PointFrame frame;
  frame.point.assign(x.begin(), x.end());
  const JetVector comps = phi.evaluate(x);
  frame.differential = jacobian(comps);
  const int m = phi.source().dim;

  const MetricAt ga = evaluate_metric(g, x);
  const Point y = values(comps);
  const MetricAt ha = evaluate_metric(h, y);

  const Eigen::MatrixXd lg = ga.g.llt().matrixL();
  const Eigen::MatrixXd lh = ha.g.llt().matrixL();
  // d(phi) between a g-orthonormal and an h-orthonormal frame.
  const Eigen::MatrixXd b =
      lh.transpose() * frame.differential * lg.transpose().triangularView<Eigen::Upper>().solve(
                                                Eigen::MatrixXd::Identity(m, m));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const Eigen::VectorXd sv = svd.singularValues();
  frame.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double top = sv.size() ? sv(0) : 0.0;
  if (top > 0.0) {
    for (int i = 0; i < sv.size(); ++i) {
      const double rel = sv(i) / top;
      if (rel > rank_tol) {
        ++frame.rank;
        if (rel < kNearDegenerateBand * rank_tol) frame.near_degenerate = true;
      } else if (rel > rank_tol / kNearDegenerateBand && rel > 0.0) {
        frame.near_degenerate = true;
      }
    }
  }

  const Eigen::MatrixXd candidates = ga.inverse * frame.differential.transpose() * lh;
  frame.horizontal = gram_schmidt(candidates, ga.g, frame.rank, 0.0);
  frame.rank = static_cast<int>(frame.horizontal.cols());
  frame.vertical = gram_schmidt(Eigen::MatrixXd::Identity(m, m), ga.g, m - frame.rank, 0.0, frame.horizontal);
  return frame;
}

}  // namespace infharm
