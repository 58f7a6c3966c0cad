#include "infharm/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "infharm/error.hpp"
#include "infharm/inflap.hpp"

namespace infharm {

namespace {

Chart product_chart(const Chart& a, const Chart& b) {
  Chart c = Chart::euclidean(a.dim + b.dim, a.label + " x " + b.label);
  const int split = a.dim;
  if (a.domain || b.domain) {
    c.domain = [a, b, split](std::span<const double> x) {
      return a.contains(x.subspan(0, static_cast<size_t>(split))) && b.contains(x.subspan(static_cast<size_t>(split)));
    };
  }
  return c;
}

void require_inf_harmonic(const SmoothMap& phi, const Metric& g, std::span<const Point> samples, double tol,
                          const std::string& what) {
  const Metric euclid = Metric::euclidean(phi.target());
  for (const Point& x : samples) {
    const double r = inf_laplacian_map(phi, g, euclid, x).norm();
    if (!(r <= tol)) {
      throw ValidationError(what + " is not infinity harmonic: |inf Laplacian| = " + std::to_string(r) +
                            " at a sample point");
    }
  }
}

}  // namespace

SmoothMap build_line_map(const SmoothMap& u, std::vector<double> direction) {
  if (u.target().dim != 1) throw ArgumentError("line map needs a scalar function");
  if (direction.empty() || std::all_of(direction.begin(), direction.end(), [](double v) { return v == 0.0; })) {
    throw ArgumentError("line map direction must be nonzero");
  }
  const int n = static_cast<int>(direction.size());
  return SmoothMap(u.source(), Chart::euclidean(n), [u, direction](std::span<const Jet2> c) {
    const Jet2 v = u.apply(c)[0];
    JetVector out;
    for (double a : direction) out.push_back(a * v);
    return out;
  });
}

SmoothMap build_eikonal_tuple(std::span<const SmoothMap> components, const Metric& g,
                              std::span<const Point> samples, double tol) {
  if (components.empty()) throw ArgumentError("eikonal tuple needs at least one component");
  if (samples.empty()) throw ArgumentError("eikonal tuple validation needs sample points");
  const Chart source = components[0].source();
  for (size_t k = 0; k < components.size(); ++k) {
    const SmoothMap& f = components[k];
    const std::string name = "component " + std::to_string(k + 1);
    if (f.target().dim != 1) throw ArgumentError(name + " is not scalar");
    if (f.source().dim != source.dim) throw ArgumentError(name + " has a different source dimension");
    double lo = INFINITY, hi = -INFINITY;
    for (const Point& x : samples) {
      const double e = metric_gradient(f, g, x).norm_sq.value();
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      if (!(std::abs(inf_laplacian_function(f, g, x)) <= tol * std::max(1.0, e))) {
        throw ValidationError(name + " is not infinity harmonic");
      }
    }
    if (!(hi - lo <= tol * std::max(1.0, hi))) {
      throw ValidationError(name + " does not have constant |grad|^2 (range " + std::to_string(lo) + " to " +
                            std::to_string(hi) + ")");
    }
  }
  std::vector<SmoothMap> comps(components.begin(), components.end());
  const int n = static_cast<int>(comps.size());
  return SmoothMap(source, Chart::euclidean(n), [comps](std::span<const Jet2> c) {
    JetVector out;
    for (const SmoothMap& f : comps) out.push_back(f.apply(c)[0]);
    return out;
  });
}

Metric product_metric(const Metric& g, const Metric& h) {
  const int m = g.dim();
  const int k = h.dim();
  return Metric(product_chart(g.chart(), h.chart()),
                [g, h, m, k](std::span<const Jet2> c) {
                  const int dim = c.empty() ? 0 : c[0].dim();
                  const JetMatrix a = g.entries(c.subspan(0, static_cast<size_t>(m)));
                  const JetMatrix b = h.entries(c.subspan(static_cast<size_t>(m)));
                  JetMatrix out(m + k);
                  for (int i = 0; i < m + k; ++i) {
                    for (int j = 0; j < m + k; ++j) {
                      if (i < m && j < m) {
                        out(i, j) = a(i, j);
                      } else if (i >= m && j >= m) {
                        out(i, j) = b(i - m, j - m);
                      } else {
                        out(i, j) = Jet2(0.0, dim);
                      }
                    }
                  }
                  return out;
                },
                g.is_euclidean() && h.is_euclidean());
}

SmoothMap build_product_map(const SmoothMap& u, const Metric& g, std::span<const Point> u_samples,
                            const SmoothMap& v, const Metric& h, std::span<const Point> v_samples, double tol) {
  if (u.target().dim != 1 || v.target().dim != 1) throw ArgumentError("product map needs scalar factors");
  require_inf_harmonic(u, g, u_samples, tol, "first factor");
  require_inf_harmonic(v, h, v_samples, tol, "second factor");
  const int m = u.source().dim;
  return SmoothMap(product_chart(u.source(), v.source()), Chart::euclidean(2), [u, v, m](std::span<const Jet2> c) {
    return JetVector{u.apply(c.subspan(0, static_cast<size_t>(m)))[0], v.apply(c.subspan(static_cast<size_t>(m)))[0]};
  });
}

SmoothMap build_direct_sum(const SmoothMap& phi, const Metric& g, std::span<const Point> phi_samples,
                           const SmoothMap& psi, const Metric& h, std::span<const Point> psi_samples, double tol) {
  if (phi.target().dim != psi.target().dim) {
    throw ArgumentError("direct sum needs maps into the same R^n (" + std::to_string(phi.target().dim) + " vs " +
                        std::to_string(psi.target().dim) + ")");
  }
  if (phi.target().embedding != Embedding::none || psi.target().embedding != Embedding::none) {
    throw ArgumentError("direct sum needs Euclidean targets");
  }
  require_inf_harmonic(phi, g, phi_samples, tol, "first summand");
  require_inf_harmonic(psi, h, psi_samples, tol, "second summand");
  const int m = phi.source().dim;
  const int n = phi.target().dim;
  return SmoothMap(product_chart(phi.source(), psi.source()), Chart::euclidean(n),
                   [phi, psi, m, n](std::span<const Jet2> c) {
                     const JetVector a = phi.apply(c.subspan(0, static_cast<size_t>(m)));
                     const JetVector b = psi.apply(c.subspan(static_cast<size_t>(m)));
                     JetVector out;
                     for (int i = 0; i < n; ++i) out.push_back(a[static_cast<size_t>(i)] + b[static_cast<size_t>(i)]);
                     return out;
                   });
}

SmoothMap identity_map(const Chart& chart) {
  return SmoothMap(chart, chart, [](std::span<const Jet2> c) { return JetVector(c.begin(), c.end()); });
}

IdentityCheck check_identity_map(const Metric& g, const Metric& h, std::span<const Point> samples, double tol) {
  if (g.dim() != h.dim()) throw ArgumentError("identity check needs two metrics on the same chart");
  IdentityCheck out;
  for (const Point& x : samples) {
    const MetricAt ga = evaluate_metric(g, x);
    const MetricAt ha = evaluate_metric(h, x);
    out.trace_values.push_back(ga.inverse.cwiseProduct(ha.g).sum());
  }
  if (out.trace_values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.trace_values.begin(), out.trace_values.end());
  out.is_inf_harmonic = *hi - *lo < tol;
  return out;
}

}  // namespace infharm
