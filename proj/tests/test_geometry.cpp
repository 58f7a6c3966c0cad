#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infharm/catalog.hpp"
#include "infharm/error.hpp"
#include "infharm/geometry.hpp"
#include "oracles.hpp"

using namespace infharm;

namespace {

constexpr double kPi = std::numbers::pi;

SmoothMap scalar(int dim, std::function<Jet2(std::span<const Jet2>)> f) {
  return SmoothMap(Chart::euclidean(dim), Chart::euclidean(1),
                   [f](std::span<const Jet2> c) { return JetVector{f(c)}; });
}

Metric polar_plane() {
  Chart c{2, [](std::span<const double> x) { return x[0] > 0.0; }, "polar (r, theta)", Embedding::none};
  return Metric::diagonal(c, [](std::span<const Jet2> x) { return JetVector{Jet2(1.0, x[0].dim()), x[0] * x[0]}; });
}

Metric sphere_polar() {
  Chart c{2, [](std::span<const double> x) { return x[0] > 0.0 && x[0] < kPi; }, "S^2 (rho, phi)", Embedding::none};
  return Metric::diagonal(c, [](std::span<const Jet2> x) {
    const Jet2 s = sin(x[0]);
    return JetVector{Jet2(1.0, x[0].dim()), s * s};
  });
}

}  // namespace

TEST(MetricGradient, CoordinateFunctionEuclidean) {
  const SmoothMap u = scalar(2, [](auto c) { return c[0]; });
  const Metric g = Metric::euclidean(Chart::euclidean(2));
  const std::vector<double> x{0.3, -2.0};
  const MetricGradient mg = metric_gradient(u, g, x);
  EXPECT_DOUBLE_EQ(mg.grad(0), 1.0);
  EXPECT_DOUBLE_EQ(mg.grad(1), 0.0);
  EXPECT_DOUBLE_EQ(mg.norm_sq.value(), 1.0);
}

TEST(MetricGradient, ArctanRatio) {
  const SmoothMap u = scalar(2, [](auto c) { return atan(c[0] / c[1]); });
  const Metric g = Metric::euclidean(Chart::euclidean(2));
  const std::vector<double> x{1.0, 1.0};
  const MetricGradient mg = metric_gradient(u, g, x);
  EXPECT_NEAR(mg.norm_sq.value(), 0.5, 1e-15);
  // Gradient of |grad u|^2 = 1/|x|^2 against finite differences.
  const oracle::Scalar n2 = [&](const std::vector<double>& y) { return metric_gradient(u, g, y).norm_sq.value(); };
  const Eigen::VectorXd fd = oracle::gradient(n2, x);
  EXPECT_NEAR(mg.norm_sq.grad(0), fd(0), 1e-8);
  EXPECT_NEAR(mg.norm_sq.grad(1), fd(1), 1e-8);
  EXPECT_NEAR(mg.norm_sq.grad(0), -0.5, 1e-12);
}

TEST(MetricGradient, InverseMetricScaling) {
  const SmoothMap u = scalar(2, [](auto c) { return c[0]; });
  const Metric g = Metric::diagonal(Chart::euclidean(2), [](std::span<const Jet2> c) {
    return JetVector{Jet2(4.0, c[0].dim()), Jet2(1.0, c[0].dim())};
  });
  const std::vector<double> x{1.0, 2.0};
  const MetricGradient mg = metric_gradient(u, g, x);
  EXPECT_DOUBLE_EQ(mg.grad(0), 0.25);
  EXPECT_DOUBLE_EQ(mg.grad(1), 0.0);
  EXPECT_DOUBLE_EQ(mg.norm_sq.value(), 0.25);
}

TEST(MetricGradient, RejectsDegenerateMetric) {
  const SmoothMap u = scalar(2, [](auto c) { return c[0]; });
  const Metric g = Metric::diagonal(Chart::euclidean(2), [](std::span<const Jet2> c) {
    return JetVector{c[0] * c[0], Jet2(1.0, c[0].dim())};
  });
  const std::vector<double> x{0.0, 1.0};
  EXPECT_THROW(metric_gradient(u, g, x), DegenerateMetricError);
}

TEST(Christoffel, EuclideanVanishes) {
  const Metric g = Metric::euclidean(Chart::euclidean(3));
  const std::vector<double> x{0.1, 0.2, 0.3};
  const Christoffel c = christoffel(g, x);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) EXPECT_EQ(c(k, i, j), 0.0);
    }
  }
}

TEST(Christoffel, PolarPlane) {
  const std::vector<double> x{2.0, 0.7};
  const Christoffel c = christoffel(polar_plane(), x);
  EXPECT_DOUBLE_EQ(c(0, 1, 1), -2.0);
  EXPECT_DOUBLE_EQ(c(1, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(c(1, 1, 0), 0.5);
  EXPECT_EQ(c(0, 0, 0), 0.0);
  EXPECT_EQ(c(0, 0, 1), 0.0);
  EXPECT_EQ(c(1, 0, 0), 0.0);
  EXPECT_EQ(c(1, 1, 1), 0.0);
}

TEST(Christoffel, SpherePolarAgainstFiniteDifferenceOracle) {
  const Metric g = sphere_polar();
  const std::vector<double> x{kPi / 4, 1.0};
  const Christoffel c = christoffel(g, x);
  EXPECT_NEAR(c(0, 1, 1), -0.5, 1e-15);
  EXPECT_NEAR(c(1, 0, 1), 1.0, 1e-15);  // cot(pi/4)

  // Oracle: Gamma from finite differences of metric values.
  const int n = 2;
  std::vector<Eigen::MatrixXd> dg(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> xp = x, xm = x;
    xp[static_cast<size_t>(k)] += 1e-5;
    xm[static_cast<size_t>(k)] -= 1e-5;
    dg[static_cast<size_t>(k)] = (g.at(xp).values() - g.at(xm).values()) / 2e-5;
  }
  const Eigen::MatrixXd ginv = g.at(x).values().inverse();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) {
          v += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        }
        EXPECT_NEAR(c(k, i, j), v, 1e-9);
      }
    }
  }
}

TEST(Christoffel, SymmetricInLowerIndicesOnCatalogMetrics) {
  for (const CatalogEntry& e : catalog_list()) {
    const std::vector<Point> pts = e.region.random(10, 3);
    for (const Point& x : pts) {
      const Christoffel c = christoffel(e.source_metric, x);
      const int n = c.dim();
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) ASSERT_EQ(c(k, i, j), c(k, j, i)) << e.id;
        }
      }
    }
  }
}

TEST(MetricProperties, EntryDerivativesMatchFiniteDifferencesOnCatalogMetrics) {
  for (const CatalogEntry& e : catalog_list()) {
    for (const Metric* m : {&e.source_metric}) {
      const std::vector<Point> pts = e.region.random(100, 17);
      for (const Point& x : pts) {
        const JetMatrix jm = m->at(x);
        const int n = jm.size();
        for (int k = 0; k < n; ++k) {
          Point xp = x, xm = x;
          xp[static_cast<size_t>(k)] += 1e-5;
          xm[static_cast<size_t>(k)] -= 1e-5;
          const Eigen::MatrixXd fd = (m->at(xp).values() - m->at(xm).values()) / 2e-5;
          Eigen::MatrixXd ad(n, n);
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) ad(i, j) = jm(i, j).grad(k);
          }
          ASSERT_LT(oracle::rel_error(ad, fd), 1e-5) << e.id;
        }
        const MetricAt ma = evaluate_metric(*m, x);
        ASSERT_LT((ma.g * ma.inverse - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10) << e.id;
      }
    }
  }
}

TEST(DifferentialFrame, OrthogonalProjection) {
  const SmoothMap phi(Chart::euclidean(3), Chart::euclidean(2),
                      [](std::span<const Jet2> c) { return JetVector{c[0], c[1]}; });
  const Metric g = Metric::euclidean(Chart::euclidean(3)), h = Metric::euclidean(Chart::euclidean(2));
  const std::vector<double> x{0.3, 0.1, -4.0};
  const PointFrame f = differential_frame(phi, g, h, x);
  EXPECT_EQ(f.rank, 2);
  ASSERT_EQ(f.vertical.cols(), 1);
  EXPECT_NEAR(std::abs(f.vertical(2, 0)), 1.0, 1e-12);
  EXPECT_EQ(f.horizontal.cols(), 2);
}

TEST(DifferentialFrame, ConstantMapIsCritical) {
  const SmoothMap phi(Chart::euclidean(3), Chart::euclidean(2),
                      [](std::span<const Jet2> c) { return JetVector{Jet2(1.0, c[0].dim()), Jet2(2.0, c[0].dim())}; });
  const Metric g = Metric::euclidean(Chart::euclidean(3)), h = Metric::euclidean(Chart::euclidean(2));
  const std::vector<double> x{1, 2, 3};
  const PointFrame f = differential_frame(phi, g, h, x);
  EXPECT_EQ(f.rank, 0);
  EXPECT_EQ(f.vertical.cols(), 3);
  EXPECT_EQ(f.horizontal.cols(), 0);
}

TEST(DifferentialFrame, CliffordTorusKillsRadialDirection) {
  const CatalogEntry& e = catalog_get("clifford_torus");
  const std::vector<double> x{kPi / 4, 1.0, 2.0};
  const PointFrame f = differential_frame(e.map, e.source_metric, e.target_metric, x);
  EXPECT_EQ(f.rank, 2);
  ASSERT_EQ(f.vertical.cols(), 1);
  EXPECT_NEAR(std::abs(f.vertical(0, 0)), 1.0, 1e-12);
}

TEST(DifferentialFrame, BasesAreOrthonormalUnderSourceMetric) {
  for (const CatalogEntry& e : catalog_list()) {
    for (const Point& x : e.region.random(20, 5)) {
      const PointFrame f = differential_frame(e.map, e.source_metric, e.target_metric, x);
      const Eigen::MatrixXd g = e.source_metric.at(x).values();
      Eigen::MatrixXd basis(g.rows(), f.horizontal.cols() + f.vertical.cols());
      basis << f.horizontal, f.vertical;
      const int n = static_cast<int>(basis.cols());
      ASSERT_EQ(n, e.map.source().dim) << e.id;
      ASSERT_EQ(f.rank + f.vertical.cols(), n) << e.id;
      const Eigen::MatrixXd gram = basis.transpose() * g * basis;
      ASSERT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9) << e.id;
    }
  }
}

TEST(SmoothMap, SingularEvaluationCarriesPoint) {
  const SmoothMap u = scalar(2, [](auto c) { return atan(c[0] / c[1]); });
  const std::vector<double> x{1.0, 0.0};
  try {
    u.evaluate(x);
    FAIL() << "expected a singular point error";
  } catch (const SingularPointError& e) {
    ASSERT_EQ(e.point().size(), 2u);
    EXPECT_EQ(e.point()[0], 1.0);
    EXPECT_EQ(e.point()[1], 0.0);
  }
}

TEST(SmoothMap, ComponentCountIsChecked) {
  const SmoothMap bad(Chart::euclidean(2), Chart::euclidean(2), [](std::span<const Jet2> c) { return JetVector{c[0]}; });
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(bad.evaluate(x), Error);
}

TEST(SmoothMap, CompositionChainsDerivatives) {
  const SmoothMap inner(Chart::euclidean(2), Chart::euclidean(2),
                        [](std::span<const Jet2> c) { return JetVector{c[0] * c[1], c[0] + c[1]}; });
  const SmoothMap outer(Chart::euclidean(2), Chart::euclidean(1),
                        [](std::span<const Jet2> c) { return JetVector{sin(c[0]) * c[1]}; });
  const SmoothMap comp = compose(outer, inner);
  const std::vector<double> x{0.4, -1.1};
  const Jet2 v = comp.evaluate(x)[0];
  const oracle::Scalar f = [](const std::vector<double>& y) { return std::sin(y[0] * y[1]) * (y[0] + y[1]); };
  EXPECT_NEAR(v.value(), f(x), 1e-15);
  const Eigen::VectorXd g = oracle::gradient(f, x);
  const Eigen::MatrixXd H = oracle::hessian(f, x);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(v.grad(i), g(i), 1e-8);
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(v.hess(i, j), H(i, j), 1e-6);
  }
}

TEST(Chart, SphereTangentProjector) {
  const Chart s2 = Chart::ambient_sphere(3);
  EXPECT_EQ(s2.intrinsic_dim(), 2);
  const std::vector<double> y{0.0, 0.0, 1.0};
  const Eigen::MatrixXd p = s2.tangent_projector(y);
  EXPECT_NEAR(p(2, 2), 0.0, 1e-15);
  EXPECT_NEAR(p(0, 0), 1.0, 1e-15);
  const std::vector<double> z{1.0, 2.0};
  EXPECT_TRUE(Chart::euclidean(2).contains(z));
}
