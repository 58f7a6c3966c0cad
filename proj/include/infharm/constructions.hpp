#pragma once

// Builders that assemble infinity harmonic maps from simpler pieces.

#include <span>
#include <vector>

#include "infharm/geometry.hpp"

namespace infharm {

/// x -> u(x) * direction. Throws ArgumentError for a zero direction.
SmoothMap build_line_map(const SmoothMap& u, std::vector<double> direction);

/// Stacks scalar functions on a common source into a map to R^n. Each
/// component must have constant |grad|^2 and vanishing infinity Laplacian on
/// `samples` (tolerance `tol`, relative to the mean |grad|^2); otherwise a
/// ValidationError names the first offending component.
SmoothMap build_eikonal_tuple(std::span<const SmoothMap> components, const Metric& g,
                              std::span<const Point> samples, double tol = 1e-8);

/// Block-diagonal metric g + h on the product chart (x, y).
Metric product_metric(const Metric& g, const Metric& h);

/// (x, y) -> (u(x), v(y)) on the product chart. u and v are checked to be
/// infinity harmonic on their sample sets.
SmoothMap build_product_map(const SmoothMap& u, const Metric& g, std::span<const Point> u_samples,
                            const SmoothMap& v, const Metric& h, std::span<const Point> v_samples,
                            double tol = 1e-8);

/// (p, q) -> phi(p) + psi(q). Both maps must land in the same R^n and be
/// infinity harmonic (Euclidean target) on their sample sets.
SmoothMap build_direct_sum(const SmoothMap& phi, const Metric& g, std::span<const Point> phi_samples,
                           const SmoothMap& psi, const Metric& h, std::span<const Point> psi_samples,
                           double tol = 1e-8);

/// The identity chart map of a chart (used with two metrics on it).
SmoothMap identity_map(const Chart& chart);

struct IdentityCheck {
  bool is_inf_harmonic = false;
  std::vector<double> trace_values;  ///< Trace_g h per sample
};

/// The identity (M, g) -> (M, h) is infinity harmonic iff Trace_g h is
/// constant; verdict is max spread of the traces < tol.
IdentityCheck check_identity_map(const Metric& g, const Metric& h, std::span<const Point> samples,
                                 double tol = 1e-9);

}  // namespace infharm
