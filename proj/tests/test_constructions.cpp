#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "infharm/catalog.hpp"
#include "infharm/constructions.hpp"
#include "infharm/error.hpp"
#include "infharm/expr.hpp"
#include "infharm/inflap.hpp"
#include "oracles.hpp"

using namespace infharm;

namespace {

SmoothMap scalar_expr(const std::string& text, int dim) {
  const Expression e = Expression::parse(text, dim);
  return SmoothMap(Chart::euclidean(dim), Chart::euclidean(1),
                   [e](std::span<const Jet2> c) { return JetVector{e.evaluate(c)}; });
}

Metric euclid(int n) { return Metric::euclidean(Chart::euclidean(n)); }

std::vector<Point> annulus_grid(int n, double lo, double hi) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = lo + (hi - lo) * i / (n - 1), y = lo + (hi - lo) * j / (n - 1);
      pts.push_back({x, y});
    }
  }
  return pts;
}

double max_inf_lap(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const Point> pts) {
  double worst = 0.0;
  for (const Point& x : pts) worst = std::max(worst, inf_laplacian_map(phi, g, h, x).norm());
  return worst;
}

}  // namespace

TEST(LineMap, ArctanRatioAlongDiagonal) {
  const SmoothMap u = scalar_expr("atan(x1/x2)", 2);
  const SmoothMap phi = build_line_map(u, {1.0, 1.0});
  const std::vector<Point> pts = annulus_grid(15, 0.2, 2.0);
  EXPECT_LT(max_inf_lap(phi, euclid(2), euclid(2), pts), 1e-8);
}

TEST(LineMap, AffineScaledByDirectionNorm) {
  const SmoothMap phi = build_line_map(scalar_expr("x1", 2), {3.0, 4.0});
  const std::vector<double> x{0.7, -1.2};
  EXPECT_DOUBLE_EQ(energy_density(phi, euclid(2), euclid(2), x).value(), 25.0);
}

TEST(LineMap, AronssonFunctionOffAxes) {
  const SmoothMap phi = build_line_map(scalar_expr("x1^(4/3) - x2^(4/3)", 2), {2.0, 0.0});
  const std::vector<Point> pts = annulus_grid(12, 0.1, 1.5);
  const double worst = max_inf_lap(phi, euclid(2), euclid(2), pts);
  EXPECT_LT(worst, 1e-8);
}

TEST(LineMap, ZeroDirectionRejected) {
  EXPECT_THROW(build_line_map(scalar_expr("x1", 2), {0.0, 0.0}), ArgumentError);
}

TEST(EikonalTuple, AffinePlusDistance) {
  const double a = 1.5, b = -0.5;
  const std::vector<SmoothMap> comps{scalar_expr("1.5*x1 - 0.5*x2 + 3", 2), scalar_expr("sqrt(x1^2 + x2^2)", 2)};
  const std::vector<Point> pts = annulus_grid(10, 0.3, 2.0);
  const SmoothMap phi = build_eikonal_tuple(comps, euclid(2), pts);
  for (const Point& x : pts) {
    EXPECT_NEAR(energy_density(phi, euclid(2), euclid(2), x).value(), a * a + b * b + 1.0, 1e-12);
  }
  EXPECT_LT(max_inf_lap(phi, euclid(2), euclid(2), pts), 1e-10);
}

TEST(EikonalTuple, SingleCoordinate) {
  const std::vector<SmoothMap> comps{scalar_expr("x1", 3)};
  const std::vector<Point> pts{{0.1, 0.2, 0.3}, {1, 2, 3}};
  const SmoothMap phi = build_eikonal_tuple(comps, euclid(3), pts);
  EXPECT_DOUBLE_EQ(energy_density(phi, euclid(3), euclid(1), pts[1]).value(), 1.0);
}

TEST(EikonalTuple, NonEikonalComponentIsNamed) {
  const std::vector<SmoothMap> comps{scalar_expr("x1", 2), scalar_expr("x1^2", 2)};
  const std::vector<Point> pts = annulus_grid(5, 0.2, 1.0);
  try {
    build_eikonal_tuple(comps, euclid(2), pts);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("component 2"), std::string::npos) << e.what();
  }
}

TEST(ProductMap, AronssonProductEnergy) {
  const SmoothMap u = scalar_expr("x1^(4/3) - x2^(4/3)", 2);
  const std::vector<Point> pts = annulus_grid(5, 0.2, 1.2);
  const SmoothMap phi = build_product_map(u, euclid(2), pts, u, euclid(2), pts);
  const Metric g = product_metric(euclid(2), euclid(2));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const Point x = oracle::uniform_point(rng, 4, 0.1, 1.5);
    double expected = 0.0;
    for (double v : x) expected += std::cbrt(v * v);
    expected *= 16.0 / 9.0;
    const double e = energy_density(phi, g, euclid(2), x).value();
    EXPECT_NEAR(e, expected, 1e-12 * expected);
    EXPECT_LT(inf_laplacian_map(phi, g, euclid(2), x).norm(), 1e-8);
  }
}

TEST(ProductMap, AffineFactorsGiveConstantEnergy) {
  const SmoothMap u = scalar_expr("2*x1 + x2", 2), v = scalar_expr("3*x1", 1);
  const std::vector<Point> pu{{0, 0}, {1, 1}}, pv{{0}, {1}};
  const SmoothMap phi = build_product_map(u, euclid(2), pu, v, euclid(1), pv);
  const Metric g = product_metric(euclid(2), euclid(1));
  for (const Point& x : std::vector<Point>{{0.1, 0.2, 0.3}, {-1, 4, 2}}) {
    EXPECT_NEAR(energy_density(phi, g, euclid(2), x).value(), 14.0, 1e-12);
  }
}

TEST(ProductMap, ArctanTimesLinear) {
  const SmoothMap u = scalar_expr("atan(x1/x2)", 2), v = scalar_expr("x1", 1);
  const std::vector<Point> pu = annulus_grid(5, 0.2, 1.0), pv{{0.0}, {1.0}};
  const SmoothMap phi = build_product_map(u, euclid(2), pu, v, euclid(1), pv);
  const Metric g = product_metric(euclid(2), euclid(1));
  double worst = 0.0;
  for (const Point& p : annulus_grid(8, 0.2, 1.8)) {
    for (double z : {-1.0, 0.0, 1.0}) {
      const Point x{p[0], p[1], z};
      worst = std::max(worst, inf_laplacian_map(phi, g, euclid(2), x).norm());
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(ProductMap, RejectsNonHarmonicFactor) {
  const SmoothMap u = scalar_expr("x1^2 + x2", 2), v = scalar_expr("x1", 1);
  const std::vector<Point> pu = annulus_grid(4, 0.5, 1.0), pv{{0.0}};
  EXPECT_THROW(build_product_map(u, euclid(2), pu, v, euclid(1), pv), ValidationError);
}

TEST(DirectSum, IdentityPlusIdentity) {
  const SmoothMap id = identity_map(Chart::euclidean(2));
  const std::vector<Point> pts{{0, 0}, {1, 1}};
  const SmoothMap phi = build_direct_sum(id, euclid(2), pts, id, euclid(2), pts);
  const Metric g = product_metric(euclid(2), euclid(2));
  EXPECT_DOUBLE_EQ(energy_density(phi, g, euclid(2), std::vector<double>{0.3, 0.1, -2, 5}).value(), 4.0);
}

TEST(DirectSum, EnergyIsAdditiveOnCatalogEntry) {
  const CatalogEntry& e = catalog_get("direct_sum_affine_cyclic");
  for (const Point& x : e.region.grid()) {
    const double got = energy_density(e.map, e.source_metric, e.target_metric, x).value();
    ASSERT_NEAR(got, e.expected_energy(x), 1e-12 * std::max(1.0, std::abs(got)));
    ASSERT_LT(inf_laplacian_map(e.map, e.source_metric, e.target_metric, x).norm(), 1e-8);
  }
}

TEST(DirectSum, EnergyAdditivityForAronssonLineMap) {
  const SmoothMap phi = build_line_map(scalar_expr("x1^(4/3) - x2^(4/3)", 2), {1.0, 2.0});
  const SmoothMap psi = scalar_expr("x1", 1);
  const SmoothMap psi2(Chart::euclidean(1), Chart::euclidean(2),
                       [psi](std::span<const Jet2> c) { return JetVector{psi.apply(c)[0] * 2.0, psi.apply(c)[0]}; });
  const std::vector<Point> pp = annulus_grid(6, 0.2, 1.2), pq{{0.0}, {1.0}};
  const SmoothMap sum = build_direct_sum(phi, euclid(2), pp, psi2, euclid(1), pq);
  const Metric g = product_metric(euclid(2), euclid(1));
  double worst = 0.0;
  for (const Point& p : annulus_grid(8, 0.2, 1.5)) {
    const Point x{p[0], p[1], 0.4};
    const double e = energy_density(sum, g, euclid(2), x).value();
    const double parts = energy_density(phi, euclid(2), euclid(2), p).value() +
                         energy_density(psi2, euclid(1), euclid(2), std::vector<double>{0.4}).value();
    ASSERT_NEAR(e, parts, 1e-12 * std::max(1.0, parts));
    worst = std::max(worst, inf_laplacian_map(sum, g, euclid(2), x).norm());
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(DirectSum, TargetMismatchRejected) {
  const SmoothMap id2 = identity_map(Chart::euclidean(2)), id3 = identity_map(Chart::euclidean(3));
  const std::vector<Point> p2{{0, 0}}, p3{{0, 0, 0}};
  EXPECT_THROW(build_direct_sum(id2, euclid(2), p2, id3, euclid(3), p3), ArgumentError);
}

TEST(IdentityMap, HomotheticMetric) {
  const Chart c = Chart::euclidean(3);
  const Metric g = Metric::euclidean(c);
  const Metric h = Metric::diagonal(c, [](std::span<const Jet2> x) {
    const Jet2 v(4.0, x[0].dim());
    return JetVector{v, v, v};
  });
  const std::vector<Point> pts{{0, 0, 0}, {1, -1, 2}, {0.3, 0.3, 0.3}};
  const IdentityCheck r = check_identity_map(g, h, pts);
  EXPECT_TRUE(r.is_inf_harmonic);
  for (double t : r.trace_values) EXPECT_DOUBLE_EQ(t, 12.0);
}

TEST(IdentityMap, BallMetricTraceIsOne) {
  const CatalogEntry& e = catalog_get("ball_identity");
  const std::vector<Point> pts = e.region.grid();
  const IdentityCheck r = check_identity_map(e.source_metric, e.target_metric, pts);
  EXPECT_TRUE(r.is_inf_harmonic);
  for (double t : r.trace_values) EXPECT_NEAR(t, 1.0, 1e-14);
}

TEST(IdentityMap, NonconstantConformalFactor) {
  const Chart c = Chart::euclidean(2);
  const Metric h = Metric::diagonal(c, [](std::span<const Jet2> x) {
    const Jet2 f = 1.0 + x[0] * x[0];
    return JetVector{f, f};
  });
  const std::vector<Point> pts{{0, 0}, {1, 0}};
  const IdentityCheck r = check_identity_map(Metric::euclidean(c), h, pts);
  EXPECT_FALSE(r.is_inf_harmonic);
  EXPECT_DOUBLE_EQ(r.trace_values[0], 2.0);
  EXPECT_DOUBLE_EQ(r.trace_values[1], 4.0);
}

TEST(Catalog, SolProjectionEnergy) {
  const CatalogEntry& e = catalog_get("sol_projection");
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Point x = oracle::uniform_point(rng, 3, -1, 1);
    const double expected = std::exp(2 * x[2]) + std::exp(-2 * x[2]);
    EXPECT_NEAR(energy_density(e.map, e.source_metric, e.target_metric, x).value(), expected, 1e-12 * expected);
    EXPECT_NEAR(e.expected_energy(x), expected, 1e-12 * expected);
  }
}

TEST(Catalog, ExpTrigUnitCoefficients) {
  const CatalogEntry& e = catalog_get("exp_trig");
  const std::vector<double> x{0.4, -1.0, 2.5};
  EXPECT_NEAR(energy_density(e.map, e.source_metric, e.target_metric, x).value(), 3.0, 1e-14);
  const CatalogEntry f = exp_trig_entry({1.0, 2.0});
  const std::vector<double> y{0.1, 0.2};
  EXPECT_NEAR(energy_density(f.map, f.source_metric, f.target_metric, y).value(), 5.0, 1e-14);
}

TEST(Catalog, UnknownId) { EXPECT_THROW(catalog_get("nonexistent"), UnknownIdError); }

TEST(Catalog, IdsAreSortedAndUnique) {
  const std::vector<std::string> ids = catalog_ids();
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
  int positive = 0;
  for (const CatalogEntry& e : catalog_list()) positive += e.negative ? 0 : 1;
  EXPECT_GE(positive, 14);
}

TEST(Catalog, ShippedGridsEvaluateWithoutError) {
  for (const CatalogEntry& e : catalog_list()) {
    const std::vector<Point> pts = e.region.grid();
    ASSERT_LE(static_cast<int>(pts.size()), kMaxGridPoints) << e.id;
    ASSERT_FALSE(pts.empty()) << e.id;
    for (const Point& x : pts) {
      ASSERT_NO_THROW(map_report(e.map, e.source_metric, e.target_metric, x)) << e.id;
    }
  }
}

TEST(Catalog, PositiveEntriesPassAtTolerance1e6) {
  CheckOptions opt;
  opt.tol = 1e-6;
  for (const CatalogEntry& e : catalog_list()) {
    const EntryCheck r = check_entry(e, opt);
    EXPECT_TRUE(r.passed) << e.id << ": " << (r.failures.empty() ? "" : r.failures.front());
    if (!e.negative) EXPECT_TRUE(r.classification.verdict.contains_all(e.expected)) << e.id;
    EXPECT_FALSE(r.classification.verdict.intersects(e.expected_absent)) << e.id;
    if (r.has_energy_oracle) EXPECT_LT(r.energy_max_rel_error, 1e-10) << e.id;
  }
}

TEST(Catalog, NegativeWitnessesExceedThreshold) {
  int negatives = 0;
  for (const CatalogEntry& e : catalog_list()) {
    if (!e.negative) continue;
    ++negatives;
    const MapReport r = map_report(e.map, e.source_metric, e.target_metric, e.witness);
    EXPECT_GT(criterion_residual(r, e.witness_criterion), kWitnessThreshold) << e.id;
  }
  EXPECT_GE(negatives, 2);
}

TEST(Catalog, ClosedFormEnergiesMatchOnShippedGrids) {
  for (const CatalogEntry& e : catalog_list()) {
    if (!e.expected_energy) continue;
    for (const Point& x : e.region.grid()) {
      const double got = energy_density(e.map, e.source_metric, e.target_metric, x).value();
      const double want = e.expected_energy(x);
      ASSERT_LE(std::abs(got - want), 1e-10 * std::max(1.0, std::abs(want))) << e.id;
    }
  }
}
