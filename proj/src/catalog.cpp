#include "infharm/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "infharm/constructions.hpp"
#include "infharm/error.hpp"
#include "infharm/parallel.hpp"

namespace infharm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMargin = kDefaultMargin;

double norm_sq(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

Jet2 jet_norm_sq(std::span<const Jet2> c) {
  Jet2 s(0.0, c.empty() ? 0 : c[0].dim());
  for (const Jet2& v : c) s += v * v;
  return s;
}

Metric euclid(int n) { return Metric::euclidean(Chart::euclidean(n)); }

// Conformally flat metric F^-2 delta with F = (1 + s |x|^2) / 2.
Metric model_space_metric(int m, double s, Chart chart) {
  return Metric::diagonal(std::move(chart), [m, s](std::span<const Jet2> c) {
    const Jet2 f = 0.5 * (1.0 + s * jet_norm_sq(c));
    const Jet2 w = reciprocal(f * f);
    return JetVector(static_cast<size_t>(m), w);
  });
}

// Energy of the fiber projection of a multiply warped product: sum of 1/g_ii
// over the fiber coordinates, read off the metric itself.
std::function<double(const Point&)> warped_projection_energy(const Metric& g, std::vector<int> fiber) {
  return [g, fiber](const Point& x) {
    const Eigen::MatrixXd m = g.at(x).values();
    double s = 0.0;
    for (int i : fiber) s += 1.0 / m(i, i);
    return s;
  };
}

SampleRegion box(std::vector<double> lo, std::vector<double> hi, int per_axis, std::string description,
                 std::function<bool(const Point&)> keep = {}) {
  SampleRegion r;
  r.lower = std::move(lo);
  r.upper = std::move(hi);
  r.points_per_axis = per_axis;
  r.keep = std::move(keep);
  r.description = std::move(description);
  return r;
}

const VerdictSet kAll{Verdict::infinity_harmonic, Verdict::hwc, Verdict::horizontally_homothetic,
                      Verdict::infinity_harmonic_morphism};
const VerdictSet kIH{Verdict::infinity_harmonic};
const VerdictSet kNotHWC{Verdict::hwc, Verdict::horizontally_homothetic, Verdict::infinity_harmonic_morphism};

CatalogEntry make(std::string id, std::string title, SmoothMap map, Metric g, Metric h, SampleRegion region,
                  std::string provenance) {
  return CatalogEntry{std::move(id), std::move(title), std::move(map), std::move(g), std::move(h), {}, {}, {},
                      std::move(region), std::move(provenance), false, {}, {}};
}

SmoothMap linear_map(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  return SmoothMap(Chart::euclidean(m), Chart::euclidean(n), [a, b, n, m](std::span<const Jet2> c) {
    JetVector out;
    for (int r = 0; r < n; ++r) {
      Jet2 s(b.size() ? b(r) : 0.0, c[0].dim());
      for (int i = 0; i < m; ++i) s += a(r, i) * c[static_cast<size_t>(i)];
      out.push_back(s);
    }
    return out;
  });
}

SmoothMap aronsson_function() {
  return SmoothMap(Chart::euclidean(2), Chart::euclidean(1), [](std::span<const Jet2> c) {
    return JetVector{pow(c[0], 4.0 / 3.0) - pow(c[1], 4.0 / 3.0)};
  });
}

double aronsson_energy(const Point& x) {
  double s = 0.0;
  for (double v : x) s += std::cbrt(v * v);
  return 16.0 / 9.0 * s;
}

SmoothMap arctan_ratio(int m) {
  return SmoothMap(Chart::euclidean(m), Chart::euclidean(1),
                   [](std::span<const Jet2> c) { return JetVector{atan(c[0] / c[1])}; });
}

SmoothMap cyclic_trig(int m) {
  return SmoothMap(Chart::euclidean(m), Chart::euclidean(m), [m](std::span<const Jet2> c) {
    JetVector out;
    for (int k = 0; k < m; ++k) out.push_back(cos(c[static_cast<size_t>(k)]) + sin(c[static_cast<size_t>((k + 1) % m)]));
    return out;
  });
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;

  {
    Eigen::MatrixXd a(2, 3);
    a << 1, 2, 0, 0, 1, -1;
    Eigen::VectorXd b(2);
    b << 1, -1;
    CatalogEntry e = make("affine_map", "affine map R^3 -> R^2", linear_map(a, b), euclid(3), euclid(2),
                          box({-2, -2, -2}, {2, 2, 2}, 10, "cube [-2,2]^3"), "constant energy density: affine maps");
    const double energy = a.squaredNorm();
    e.expected_energy = [energy](const Point&) { return energy; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  out.push_back(exp_trig_entry({1.0, 1.0, 1.0}));

  {
    CatalogEntry e = make("cyclic_trig", "cyclic cos/sin map R^3 -> R^3", cyclic_trig(3), euclid(3), euclid(3),
                          box({-3, -3, -3}, {3, 3, 3}, 10, "cube [-3,3]^3"),
                          "constant energy density: cyclic trigonometric map");
    e.expected_energy = [](const Point&) { return 3.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    // S^3 in Hopf coordinates (cos t e^{i a}, sin t e^{i b}), t in (0, pi/2).
    Chart s3{3, [](std::span<const double> x) { return x[0] > 0.0 && x[0] < kPi / 2; }, "S^3 (Hopf coordinates)",
             Embedding::none};
    const Metric g = Metric::diagonal(s3, [](std::span<const Jet2> c) {
      const Jet2 ct = cos(c[0]), st = sin(c[0]);
      return JetVector{Jet2(1.0, c[0].dim()), ct * ct, st * st};
    });
    const Chart s2 = Chart::ambient_sphere(3);
    SmoothMap hopf(s3, s2, [](std::span<const Jet2> c) {
      const Jet2 two_t = 2.0 * c[0];
      const Jet2 d = c[1] - c[2];
      return JetVector{cos(two_t), sin(two_t) * cos(d), sin(two_t) * sin(d)};
    });
    CatalogEntry e = make("hopf_eigenmap", "Hopf map S^3 -> S^2", hopf, g, Metric::euclidean(s2),
                          box({kMargin, 0, 0}, {kPi / 2 - kMargin, 2 * kPi, 2 * kPi}, 12,
                              "t in [0.05, pi/2 - 0.05], angles in [0, 2pi]"),
                          "eigenmap between spheres: degree-2 harmonic polynomials restricted to S^3");
    e.expected_energy = [](const Point&) { return 8.0; };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    SmoothMap cyl(Chart::euclidean(2, "cylinder (s, t)"), Chart::euclidean(3), [](std::span<const Jet2> c) {
      return JetVector{cos(c[1]), sin(c[1]), c[0]};
    });
    CatalogEntry e = make("isometric_immersion_cylinder", "unit cylinder in R^3", cyl, euclid(2), euclid(3),
                          box({-2, 0}, {2, 2 * kPi}, 30, "s in [-2,2], t in [0, 2pi]"),
                          "constant energy density: isometric immersions");
    e.expected_energy = [](const Point&) { return 2.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    Eigen::MatrixXd a(2, 3);
    a << 1, 0, 0, 0, 1, 0;
    CatalogEntry e = make("riemannian_submersion", "orthogonal projection R^3 -> R^2", linear_map(a, {}), euclid(3),
                          euclid(2), box({-2, -2, -2}, {2, 2, 2}, 10, "cube [-2,2]^3"),
                          "Riemannian submersions");
    e.expected_energy = [](const Point&) { return 2.0; };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    SmoothMap circle(Chart::euclidean(1, "arc length s"), Chart::euclidean(2),
                     [](std::span<const Jet2> c) { return JetVector{cos(c[0]), sin(c[0])}; });
    CatalogEntry e = make("arc_length_circle", "unit circle by arc length", circle, euclid(1), euclid(2),
                          box({0}, {2 * kPi}, 200, "s in [0, 2pi]"), "curves parametrized by arc length");
    e.expected_energy = [](const Point&) { return 1.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    const Metric sol = Metric::diagonal(Chart::euclidean(3, "Sol (x, y, z)"), [](std::span<const Jet2> c) {
      return JetVector{exp(2.0 * c[2]), exp(-2.0 * c[2]), Jet2(1.0, c[0].dim())};
    });
    SmoothMap pi(sol.chart(), Chart::euclidean(2), [](std::span<const Jet2> c) { return JetVector{c[0], c[1]}; });
    CatalogEntry e = make("sol_projection", "Sol space onto the (x, y) plane", pi, sol, euclid(2),
                          box({-1, -1, -1}, {1, 1, 1}, 10, "cube [-1,1]^3"),
                          "projection of a multiply warped product: Sol geometry");
    e.expected_energy = warped_projection_energy(sol, {0, 1});
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    Chart s3{3, [](std::span<const double> x) { return x[0] > 0.0 && x[0] < kPi / 2; },
             "S^3 minus two great circles (t, a, b)", Embedding::none};
    const Metric g = Metric::diagonal(s3, [](std::span<const Jet2> c) {
      const Jet2 st = sin(c[0]), ct = cos(c[0]);
      return JetVector{Jet2(1.0, c[0].dim()), st * st, ct * ct};
    });
    SmoothMap pi(s3, Chart::euclidean(2, "flat torus"), [](std::span<const Jet2> c) { return JetVector{c[1], c[2]}; });
    CatalogEntry e = make("clifford_torus", "S^3 onto the Clifford torus", pi, g, euclid(2),
                          box({kMargin, 0, 0}, {kPi / 2 - kMargin, 2 * kPi, 2 * kPi}, 12,
                              "t in [0.05, pi/2 - 0.05], angles in [0, 2pi]"),
                          "projection of a multiply warped product: Clifford torus");
    e.expected_energy = [](const Point& x) {
      const double s = std::sin(x[0]), c = std::cos(x[0]);
      return 1.0 / (s * s) + 1.0 / (c * c);
    };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    Chart punctured{3, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 0.0; },
                    "R^3 minus origin", Embedding::none};
    const Chart s2 = Chart::ambient_sphere(3);
    SmoothMap radial(punctured, s2, [](std::span<const Jet2> c) {
      const Jet2 inv = reciprocal(sqrt(jet_norm_sq(c)));
      return JetVector{c[0] * inv, c[1] * inv, c[2] * inv};
    });
    CatalogEntry e = make("radial_projection", "radial projection R^3 \\ 0 -> S^2", radial,
                          Metric::euclidean(punctured), Metric::euclidean(s2),
                          box({-2, -2, -2}, {2, 2, 2}, 12, "cube [-2,2]^3 with |x| > 0.05",
                              [](const Point& x) { return std::sqrt(norm_sq(x)) > kMargin; }),
                          "radial projection onto the sphere, dilation 1/|x|");
    e.expected_energy = [](const Point& x) { return 2.0 / norm_sq(x); };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    Chart s2{2, [](std::span<const double> x) { return x[0] > 0.0 && x[0] < kPi; }, "S^2 minus poles (phi, theta)",
             Embedding::none};
    const Metric g = Metric::diagonal(s2, [](std::span<const Jet2> c) {
      const Jet2 s = sin(c[0]);
      return JetVector{Jet2(1.0, c[0].dim()), s * s};
    });
    SmoothMap pi(s2, Chart::euclidean(1, "circle"), [](std::span<const Jet2> c) { return JetVector{c[1]}; });
    CatalogEntry e = make("sphere_to_circle", "S^2 minus poles onto a circle", pi, g, euclid(1),
                          box({kMargin, 0}, {kPi - kMargin, 2 * kPi}, 30, "phi in [0.05, pi - 0.05]"),
                          "warped product onto its fiber: sphere to circle, dilation 1/|sin phi|");
    e.expected_energy = [](const Point& x) { return 1.0 / std::pow(std::sin(x[0]), 2); };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    // Cone dr^2 + c^2 r^2 dtheta^2 over the circle of length 2 pi c.
    constexpr double c = 0.5;
    Chart cone{2, [](std::span<const double> x) { return x[0] > 0.0; }, "cone minus apex (r, theta)",
               Embedding::none};
    const Metric g = Metric::diagonal(cone, [](std::span<const Jet2> x) {
      return JetVector{Jet2(1.0, x[0].dim()), (c * c) * x[0] * x[0]};
    });
    SmoothMap pi(cone, Chart::euclidean(1, "circle of length 2 pi c"),
                 [](std::span<const Jet2> x) { return JetVector{c * x[1]}; });
    CatalogEntry e = make("cone_to_circle", "cone minus apex onto a circle", pi, g, euclid(1),
                          box({kMargin, 0}, {2, 2 * kPi}, 30, "r in [0.05, 2]"),
                          "warped product onto its fiber: cone to circle, dilation 1/r");
    e.expected_energy = [](const Point& x) { return 1.0 / (x[0] * x[0]); };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    const Metric g = Metric::diagonal(Chart::euclidean(3, "R x_{e^t} R^2 (t, x, y)"), [](std::span<const Jet2> c) {
      const Jet2 w = exp(2.0 * c[0]);
      return JetVector{Jet2(1.0, c[0].dim()), w, w};
    });
    SmoothMap pi(g.chart(), Chart::euclidean(2), [](std::span<const Jet2> c) { return JetVector{c[1], c[2]}; });
    CatalogEntry e = make("warped_fiber_projection", "warped product onto its fiber", pi, g, euclid(2),
                          box({-1, -1, -1}, {1, 1, 1}, 10, "cube [-1,1]^3"),
                          "warped product onto its fiber: horizontally homothetic");
    e.expected_energy = warped_projection_energy(g, {1, 2});
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    const SampleRegion region = box({-2, -2}, {2, 2}, 30, "square [-2,2]^2 with |x| > 0.05",
                                    [](const Point& x) { return std::sqrt(norm_sq(x)) > kMargin; });
    const Metric g = euclid(2);
    const std::vector<SmoothMap> comps{
        SmoothMap(Chart::euclidean(2), Chart::euclidean(1),
                  [](std::span<const Jet2> c) { return JetVector{c[0] + 2.0 * c[1]}; }),
        SmoothMap(Chart::euclidean(2), Chart::euclidean(1),
                  [](std::span<const Jet2> c) { return JetVector{sqrt(jet_norm_sq(c))}; }),
    };
    const std::vector<Point> samples = region.grid();
    CatalogEntry e = make("eikonal_tuple", "(x + 2y, |(x, y)|)", build_eikonal_tuple(comps, g, samples), g,
                          euclid(2), region, "tuple of eikonal infinity harmonic functions");
    e.expected_energy = [](const Point&) { return 6.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    CatalogEntry e = make("aronsson", "x^{4/3} - y^{4/3}", aronsson_function(), euclid(2), euclid(1),
                          box({kMargin, kMargin}, {2, 2}, 30, "positive quadrant [0.05, 2]^2"),
                          "Aronsson's infinity harmonic function, as a map to R");
    e.expected_energy = aronsson_energy;
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    const SmoothMap u = aronsson_function();
    const Metric g = euclid(2);
    const std::vector<Point> samples = box({kMargin, kMargin}, {2, 2}, 10, "").grid();
    const SmoothMap phi = build_product_map(u, g, samples, u, g, samples);
    CatalogEntry e = make("aronsson_product", "(u(x1, x2), u(x3, x4)) with Aronsson's u", phi,
                          product_metric(g, g), euclid(2),
                          box({kMargin, kMargin, kMargin, kMargin}, {2, 2, 2, 2}, 7, "[0.05, 2]^4"),
                          "product of infinity harmonic functions");
    e.expected_energy = aronsson_energy;
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    Chart ball{2, [](std::span<const double> x) { return std::hypot(x[0] - 2.0, x[1] - 2.0) < 1.0; },
               "unit ball about (2, 2)", Embedding::none};
    const Metric h = Metric::diagonal(ball, [](std::span<const Jet2> c) {
      const Jet2 inv = reciprocal(jet_norm_sq(c));
      return JetVector{c[0] * c[0] * inv, c[1] * c[1] * inv};
    });
    CatalogEntry e = make("ball_identity", "identity onto the ball with sum x_i^2/|x|^2 dx_i^2", identity_map(ball),
                          Metric::euclidean(ball), h,
                          box({1, 1}, {3, 3}, 30, "ball about (2, 2) of radius 0.95",
                              [](const Point& x) { return std::hypot(x[0] - 2.0, x[1] - 2.0) < 1.0 - kMargin; }),
                          "identity map with constant trace of the target metric");
    e.expected_energy = [](const Point&) { return 1.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    const Chart plane = Chart::euclidean(2, "stereographic plane");
    CatalogEntry e = make("arctan_sphere", "arctan(x1/x2) on the sphere", arctan_ratio(2),
                          model_space_metric(2, 1.0, plane), euclid(1),
                          box({-2, kMargin}, {2, 2}, 30, "x1 in [-2,2], x2 in [0.05, 2]"),
                          "infinity harmonic function on the round sphere");
    e.expected_energy = [](const Point& x) {
      const double r2 = norm_sq(x);
      return (1.0 + r2) * (1.0 + r2) / (4.0 * r2);
    };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  {
    Chart ball{2, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] < 1.0; }, "Poincare disc",
               Embedding::none};
    CatalogEntry e = make("arctan_hyperbolic", "arctan(x1/x2) on the hyperbolic plane", arctan_ratio(2),
                          model_space_metric(2, -1.0, ball), euclid(1),
                          box({-1, kMargin}, {1, 1}, 30, "upper half of the disc of radius 0.95",
                              [](const Point& x) { return std::sqrt(norm_sq(x)) < 1.0 - kMargin; }),
                          "infinity harmonic function on hyperbolic space");
    e.expected_energy = [](const Point& x) {
      const double r2 = norm_sq(x);
      return (1.0 - r2) * (1.0 - r2) / (4.0 * r2);
    };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  out.push_back(hyperbolic_family_entry({1.0, 2.0}, "hyperbolic_family_a12"));
  out.push_back(hyperbolic_family_entry({3.0, -1.0}, "hyperbolic_family_a3m1"));

  {
    Chart punctured{2, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] > 0.0; },
                    "R^2 minus origin", Embedding::none};
    const Chart s1 = Chart::ambient_sphere(2);
    SmoothMap pi(punctured, s1, [](std::span<const Jet2> c) {
      const Jet2 inv = reciprocal(sqrt(jet_norm_sq(c)));
      return JetVector{c[0] * inv, c[1] * inv};
    });
    CatalogEntry e = make("metric_projection_circle", "nearest-point projection onto the unit circle", pi,
                          Metric::euclidean(punctured), Metric::euclidean(s1),
                          box({-2, -2}, {2, 2}, 10, "annulus 0.5 <= |x| <= 2",
                              [](const Point& x) {
                                const double r = std::sqrt(norm_sq(x));
                                return r >= 0.5 && r <= 2.0;
                              }),
                          "metric projection onto a group orbit");
    e.region.points_per_axis = 12;
    e.expected_energy = [](const Point& x) { return 1.0 / norm_sq(x); };
    e.expected = kAll;
    out.push_back(std::move(e));
  }

  const auto alpha = [](const Jet2& t) { return 1.0 + t * t; };
  const auto beta = [](const Jet2& t) { return 2.0 + t * t; };
  const Metric doubly = Metric::diagonal(Chart::euclidean(3, "I x_a S^1 x_b S^1 (t, m, n)"),
                                         [alpha, beta](std::span<const Jet2> c) {
                                           const Jet2 a = alpha(c[0]), b = beta(c[0]);
                                           return JetVector{Jet2(1.0, c[0].dim()), a * a, b * b};
                                         });
  const SmoothMap psi(doubly.chart(), Chart::euclidean(2, "S^1 x S^1"),
                      [](std::span<const Jet2> c) { return JetVector{c[1], c[2]}; });
  {
    CatalogEntry e = make("doubly_warped_projection", "doubly warped product onto S^1 x S^1", psi, doubly, euclid(2),
                          box({0, -1, -1}, {1, 1, 1}, 10, "t in [0,1], m, n in [-1,1]"),
                          "projection of a doubly warped product, warpings 1 + t^2 and 2 + t^2");
    e.expected_energy = warped_projection_energy(doubly, {1, 2});
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    const SmoothMap line = build_line_map(arctan_ratio(2), {1.0, 1.0});
    CatalogEntry e = make("line_map_arctan", "arctan(x1/x2) (1, 1)", line, euclid(2), euclid(2),
                          box({-2, kMargin}, {2, 2}, 30, "x1 in [-2,2], x2 in [0.05, 2]"),
                          "infinity harmonic line in R^n");
    e.expected_energy = [](const Point& x) { return 2.0 / norm_sq(x); };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 3, -1;
    const Eigen::VectorXd b = Eigen::VectorXd::Zero(2);
    const Metric g = euclid(2);
    const std::vector<Point> samples = box({-3, -3}, {3, 3}, 8, "").grid();
    const SmoothMap sum = build_direct_sum(linear_map(a, b), g, samples, cyclic_trig(2), g, samples);
    CatalogEntry e = make("direct_sum_affine_cyclic", "affine map plus cyclic trigonometric map", sum,
                          product_metric(g, g), euclid(2), box({-3, -3, -3, -3}, {3, 3, 3, 3}, 7, "[-3,3]^4"),
                          "direct sum of infinity harmonic maps into R^2");
    const double energy = a.squaredNorm() + 2.0;
    e.expected_energy = [energy](const Point&) { return energy; };
    e.expected = kIH;
    out.push_back(std::move(e));
  }

  {
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 2;
    CatalogEntry e = make("linear_diag12", "linear map diag(1, 2)", linear_map(a, {}), euclid(2), euclid(2),
                          box({-2, -2}, {2, 2}, 30, "square [-2,2]^2"),
                          "onto linear map that is not horizontally conformal");
    e.expected_energy = [](const Point&) { return 5.0; };
    e.expected = kIH;
    e.expected_absent = kNotHWC;
    out.push_back(std::move(e));
  }

  {
    const SmoothMap dist(Chart::euclidean(2, "S^1 x S^1"), Chart::euclidean(1),
                         [](std::span<const Jet2> c) { return JetVector{sqrt(jet_norm_sq(c))}; });
    CatalogEntry e = make("doubly_warped_distance", "distance from (0, 0) after the doubly warped projection",
                          compose(dist, psi), doubly, euclid(1),
                          box({0, -1, -1}, {1, 1, 1}, 10, "t in [0,1], (m, n) away from (0, 0)",
                              [](const Point& x) { return std::hypot(x[1], x[2]) > kMargin; }),
                          "composition of infinity harmonic maps that is not infinity harmonic");
    e.negative = true;
    e.expected_absent = kIH;
    e.witness = {0.5, 0.5, 0.25};
    e.witness_criterion = "inf_laplacian_raw";
    out.push_back(std::move(e));
  }

  {
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 2;
    const SmoothMap dist(Chart::euclidean(2), Chart::euclidean(1),
                         [](std::span<const Jet2> c) { return JetVector{sqrt(jet_norm_sq(c))}; });
    CatalogEntry e = make("linear_diag12_distance", "distance from 0 pulled back by diag(1, 2)",
                          compose(dist, linear_map(a, {})), euclid(2), euclid(1),
                          box({-2, -2}, {2, 2}, 30, "square [-2,2]^2 with |x| > 0.05",
                              [](const Point& x) { return std::sqrt(norm_sq(x)) > kMargin; }),
                          "pullback of an infinity harmonic function by a non-conformal linear map");
    e.negative = true;
    e.expected_absent = kIH;
    e.witness = {1.0, 1.0};
    e.witness_criterion = "inf_laplacian_raw";
    out.push_back(std::move(e));
  }

  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
  return out;
}

}  // namespace

std::vector<Point> SampleRegion::grid(int per_axis) const {
  const int dim = static_cast<int>(lower.size());
  if (dim == 0 || upper.size() != lower.size()) throw ArgumentError("sample region needs matching bounds");
  int n = per_axis > 0 ? per_axis : points_per_axis;
  if (n < 1) throw ArgumentError("grid needs at least one point per axis");
  while (n > 1 && std::pow(static_cast<double>(n), dim) > kMaxGridPoints) --n;
  std::vector<Point> out;
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  while (true) {
    Point x(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      const size_t k = static_cast<size_t>(i);
      x[k] = n == 1 ? 0.5 * (lower[k] + upper[k]) : lower[k] + (upper[k] - lower[k]) * idx[k] / (n - 1);
    }
    if (!keep || keep(x)) out.push_back(std::move(x));
    int i = 0;
    while (i < dim && ++idx[static_cast<size_t>(i)] == n) idx[static_cast<size_t>(i++)] = 0;
    if (i == dim) break;
  }
  if (out.empty()) throw ArgumentError("sample region " + description + " has no grid points");
  return out;
}

std::vector<Point> SampleRegion::random(int count, std::uint64_t seed) const {
  std::vector<Point> out;
  if (count <= 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const size_t dim = lower.size();
  for (int attempt = 0; attempt < 1000 * count && static_cast<int>(out.size()) < count; ++attempt) {
    Point x(dim);
    for (size_t i = 0; i < dim; ++i) x[i] = lower[i] + (upper[i] - lower[i]) * unit(rng);
    if (!keep || keep(x)) out.push_back(std::move(x));
  }
  return out;
}

CatalogEntry exp_trig_entry(std::vector<double> lambda) {
  if (lambda.empty() || lambda.size() > kMaxJetDim) throw ArgumentError("exp_trig needs 1 to 8 coefficients");
  const int m = static_cast<int>(lambda.size());
  SmoothMap phi(Chart::euclidean(m), Chart::euclidean(2, "C"), [lambda](std::span<const Jet2> c) {
    Jet2 re(0.0, c[0].dim()), im(0.0, c[0].dim());
    for (size_t k = 0; k < lambda.size(); ++k) {
      re += lambda[k] * cos(c[k]);
      im += lambda[k] * sin(c[k]);
    }
    return JetVector{re, im};
  });
  std::vector<double> lo(static_cast<size_t>(m), -3.0), hi(static_cast<size_t>(m), 3.0);
  CatalogEntry e = make("exp_trig", "sum of lambda_k e^{i x_k}", phi, euclid(m), euclid(2),
                        box(lo, hi, m == 1 ? 100 : (m == 2 ? 30 : 10), "cube [-3,3]^m"),
                        "constant energy density: sums of lambda_k e^{i x_k}");
  double energy = 0.0;
  for (double l : lambda) energy += l * l;
  e.expected_energy = [energy](const Point&) { return energy; };
  e.expected = kIH;
  return e;
}

CatalogEntry hyperbolic_family_entry(std::vector<double> a, std::string id) {
  const int m = static_cast<int>(a.size()) + 1;
  if (m < 2 || m > kMaxJetDim) throw ArgumentError("hyperbolic family needs 1 to 7 coefficients");
  Chart ball{m,
             [](std::span<const double> x) {
               double s = 0.0;
               for (double v : x) s += v * v;
               return s < 1.0;
             },
             "Poincare ball B^" + std::to_string(m), Embedding::none};
  SmoothMap u(ball, Chart::euclidean(1), [a, m](std::span<const Jet2> c) {
    Jet2 num(0.0, c[0].dim());
    for (int i = 0; i < m - 1; ++i) num += a[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
    const Jet2 den = 1.0 + jet_norm_sq(c) - 2.0 * c[static_cast<size_t>(m - 1)];
    return JetVector{num / den};
  });
  std::string coeffs;
  for (double v : a) coeffs += (coeffs.empty() ? "" : ", ") + std::to_string(static_cast<int>(v));
  std::vector<double> lo(static_cast<size_t>(m), -0.9), hi(static_cast<size_t>(m), 0.9);
  CatalogEntry e = make(std::move(id), "linear over (1 + |x|^2 - 2 x_m), a = (" + coeffs + ")", u,
                        model_space_metric(m, -1.0, ball), euclid(1),
                        box(lo, hi, m <= 2 ? 30 : 12, "ball of radius 0.9",
                            [](const Point& x) { return std::sqrt(norm_sq(x)) <= 0.9; }),
                        "infinity harmonic functions on hyperbolic space from the sphere");
  e.expected = kAll;
  return e;
}

const std::vector<CatalogEntry>& catalog_list() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const CatalogEntry& e : catalog_list()) ids.push_back(e.id);
  return ids;
}

const CatalogEntry& catalog_get(const std::string& id) {
  for (const CatalogEntry& e : catalog_list()) {
    if (e.id == id) return e;
  }
  throw UnknownIdError("unknown catalog id '" + id + "'");
}

double criterion_residual(const MapReport& r, const std::string& criterion) {
  static const std::map<std::string, double MapReport::*> fields{
      {"inf_harmonic", &MapReport::inf_harmonic_residual},
      {"inf_laplacian_raw", &MapReport::inf_laplacian_norm},
      {"energy_gradient_vertical", &MapReport::energy_gradient_vertical_residual},
      {"conformality", &MapReport::conformality_residual},
      {"onto_deficit", &MapReport::onto_deficit},
      {"homothety", &MapReport::homothety_residual},
  };
  const auto it = fields.find(criterion);
  if (it == fields.end()) throw ArgumentError("unknown residual criterion '" + criterion + "'");
  return r.*(it->second);
}

std::vector<Point> entry_samples(const CatalogEntry& entry, const CheckOptions& options) {
  std::vector<Point> samples = entry.region.grid(options.grid);
  const std::vector<Point> extra = entry.region.random(options.random_samples, options.seed);
  samples.insert(samples.end(), extra.begin(), extra.end());
  return samples;
}

EntryCheck check_entry(const CatalogEntry& entry, const CheckOptions& options) {
  EntryCheck out;
  out.id = entry.id;
  const std::vector<Point> samples = entry_samples(entry, options);
  std::vector<MapReport> reports(samples.size());
  detail::parallel_for(samples.size(), [&](size_t i) {
    reports[i] = map_report(entry.map, entry.source_metric, entry.target_metric, samples[i]);
  });
  out.classification = classify_reports(reports, options.tol);

  for (Verdict v : kAllVerdicts) {
    if (entry.expected.contains(v) && !out.classification.verdict.contains(v)) {
      out.failures.push_back("expected verdict " + verdict_name(v) + " missing");
    }
    if (entry.expected_absent.contains(v) && out.classification.verdict.contains(v)) {
      out.failures.push_back("verdict " + verdict_name(v) + " should be absent");
    }
  }

  if (entry.expected_energy) {
    out.has_energy_oracle = true;
    for (const MapReport& r : reports) {
      const double want = entry.expected_energy(r.point);
      const double err = std::abs(r.energy_density - want) / std::max(std::abs(want), 1e-300);
      out.energy_max_rel_error = std::max(out.energy_max_rel_error, err);
    }
    if (!(out.energy_max_rel_error <= options.energy_rel_tol)) {
      out.failures.push_back("energy density differs from the closed form by " +
                             std::to_string(out.energy_max_rel_error) + " (relative)");
    }
  }

  if (entry.negative) {
    const MapReport w = map_report(entry.map, entry.source_metric, entry.target_metric, entry.witness);
    out.witness_residual = criterion_residual(w, entry.witness_criterion);
    if (!(*out.witness_residual > kWitnessThreshold)) {
      out.failures.push_back("witness residual " + std::to_string(*out.witness_residual) + " is not above " +
                             std::to_string(kWitnessThreshold));
    }
  }
  out.passed = out.failures.empty();
  return out;
}

}  // namespace infharm
