#pragma once

// Charts, Riemannian metrics and smooth maps evaluable to second order.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "infharm/jet.hpp"

namespace infharm {

using Point = std::vector<double>;
using JetVector = std::vector<Jet2>;

/// How chart coordinates relate to the manifold they describe.
enum class Embedding {
  none,         ///< coordinates are intrinsic
  unit_sphere,  ///< ambient coordinates of the unit sphere S^{dim-1} in R^dim
};

struct Chart {
  int dim = 1;
  /// Membership test for the open set; empty means the whole of R^dim.
  std::function<bool(std::span<const double>)> domain;
  std::string label;
  Embedding embedding = Embedding::none;

  bool contains(std::span<const double> x) const;
  /// Dimension of the manifold itself (dim - 1 for an embedded sphere).
  int intrinsic_dim() const { return embedding == Embedding::unit_sphere ? dim - 1 : dim; }
  /// Orthogonal projector onto the manifold's tangent space at y, in chart
  /// coordinates. Identity unless the chart is an ambient embedding.
  Eigen::MatrixXd tangent_projector(std::span<const double> y) const;

  static Chart euclidean(int dim, std::string label = {});
  static Chart ambient_sphere(int ambient_dim, std::string label = {});
};

/// Dense square matrix of jets, row-major.
class JetMatrix {
 public:
  JetMatrix() = default;
  explicit JetMatrix(int n) : n_(n), data_(static_cast<size_t>(n * n)) {}

  int size() const { return n_; }
  Jet2& operator()(int i, int j) { return data_[static_cast<size_t>(i * n_ + j)]; }
  const Jet2& operator()(int i, int j) const { return data_[static_cast<size_t>(i * n_ + j)]; }
  Eigen::MatrixXd values() const;

  static JetMatrix identity(int n, int dim);

 private:
  int n_ = 0;
  std::vector<Jet2> data_;
};

/// Metric entries as a function of (jet-valued) chart coordinates. Passing
/// lifted coordinates yields the entries with derivatives in those
/// coordinates; passing the jets of a map yields the pulled-back entries
/// h_ab(phi(x)) differentiated in the source coordinates.
using MetricField = std::function<JetMatrix(std::span<const Jet2>)>;
using JetField = std::function<JetVector(std::span<const Jet2>)>;

class Metric {
 public:
  Metric(Chart chart, MetricField entries, bool euclidean = false);

  static Metric euclidean(Chart chart);
  /// Diagonal metric; `diagonal` returns the dim diagonal entries.
  static Metric diagonal(Chart chart, JetField diagonal);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  bool is_euclidean() const { return euclidean_; }

  JetMatrix entries(std::span<const Jet2> coords) const;
  JetMatrix at(std::span<const double> x) const;

 private:
  Chart chart_;
  MetricField entries_;
  bool euclidean_ = false;
};

/// A metric evaluated at a point together with its first derivatives.
struct MetricAt {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  std::vector<Eigen::MatrixXd> derivative;  ///< derivative[k] = d_k g

  /// d_k g^{-1} = -g^{-1} (d_k g) g^{-1}
  Eigen::MatrixXd inverse_derivative(int k) const;
};

/// Throws DegenerateMetricError unless g(x) is symmetric positive definite
/// with smallest eigenvalue > 1e-12 * largest.
MetricAt evaluate_metric(const Metric& metric, std::span<const double> x);
/// Same for already-evaluated jet entries.
MetricAt evaluate_metric(const JetMatrix& entries);

class SmoothMap {
 public:
  SmoothMap(Chart source, Chart target, JetField components);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }

  /// Components with derivatives in source coordinates. Singular-point errors
  /// are re-raised with x attached; non-finite output is reported the same way.
  JetVector evaluate(std::span<const double> x) const;
  /// Components applied to arbitrary jets (composition).
  JetVector apply(std::span<const Jet2> coords) const;

 private:
  Chart source_;
  Chart target_;
  JetField components_;
};

/// outer o inner.
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

/// Christoffel symbols of the second kind, Gamma^k_{ij}.
class Christoffel {
 public:
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }

 private:
  size_t index(int k, int i, int j) const { return static_cast<size_t>((k * dim_ + i) * dim_ + j); }
  int dim_;
  std::vector<double> data_;
};

Christoffel christoffel(const Metric& g, std::span<const double> x);
Christoffel christoffel(const MetricAt& g);

struct MetricGradient {
  Eigen::VectorXd grad;  ///< contravariant g^{-1} du
  Jet1 norm_sq;          ///< |grad u|_g^2 with its coordinate gradient
};

MetricGradient metric_gradient(const SmoothMap& u, const Metric& g, std::span<const double> x);

/// Orthonormal split of the source tangent space into ker d(phi) and its
/// g-orthogonal complement. Basis vectors are columns in source coordinates.
struct PointFrame {
  Point point;
  Eigen::MatrixXd differential;  ///< d(phi) = (d_i phi^a), target x source
  Eigen::MatrixXd horizontal;
  Eigen::MatrixXd vertical;
  std::vector<double> singular_values;  ///< of d(phi) between orthonormal frames, descending
  int rank = 0;
  bool near_degenerate = false;
};

inline constexpr double kDefaultRankTol = 1e-9;
/// A singular value within this factor above the rank cutoff flags the point
/// as near a rank change.
inline constexpr double kNearDegenerateBand = 1e3;

PointFrame differential_frame(const SmoothMap& phi, const Metric& g, const Metric& h,
                              std::span<const double> x, double rank_tol = kDefaultRankTol);

/// Modified Gram-Schmidt in the inner product <u, v> = u^T G v, pivoting on
/// the largest remaining norm. Stops after `max_vectors` or when the largest
/// remaining norm falls below `cutoff`. Returned vectors are columns.
Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& candidates, const Eigen::MatrixXd& gram,
                             int max_vectors, double cutoff, const Eigen::MatrixXd& against = {});

/// d(phi) as a plain matrix.
Eigen::MatrixXd jacobian(std::span<const Jet2> components);
Point values(std::span<const Jet2> components);

}  // namespace infharm
