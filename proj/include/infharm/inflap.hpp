#pragma once

// Energy density, infinity Laplacian, tension field and p-Laplacian of maps
// between charts, and the residual-based classifiers built on them.

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infharm/geometry.hpp"

namespace infharm {

/// |d phi|^2 = g^{ij} phi^a_i phi^b_j h_ab, with its gradient in source
/// coordinates.
Jet1 energy_density(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x);

/// 1/2 g(grad u, grad |grad u|^2) for a scalar u.
double inf_laplacian_function(const SmoothMap& u, const Metric& g, std::span<const double> x);

/// 1/2 d(phi)(grad |d phi|^2), a vector in target coordinates.
Eigen::VectorXd inf_laplacian_map(const SmoothMap& phi, const Metric& g, const Metric& h,
                                  std::span<const double> x);

/// Left-hand sides of the component system for a map between Euclidean
/// domains: row a is sum_b <grad phi^a, grad |grad phi^b|^2>. Equals twice
/// inf_laplacian_map. Computed componentwise without the energy density.
Eigen::VectorXd euclidean_system_lhs(const SmoothMap& phi, std::span<const double> x);

/// Trace_g of the second fundamental form of phi.
Eigen::VectorXd tension_field(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x);

/// Euler-Lagrange operator of the p-energy:
///   |d phi|^{p-2} tension + (p-2) |d phi|^{p-4} * 1/2 d(phi)(grad |d phi|^2).
/// Throws VanishingEnergyError when |d phi| = 0 and p < 4.
Eigen::VectorXd p_laplacian(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x,
                            double p);

/// Per-point diagnostics.
struct MapReport {
  Point point;
  double energy_density = 0.0;
  Eigen::VectorXd inf_laplacian;
  Eigen::VectorXd tension;
  double inf_laplacian_norm = 0.0;  ///< |inf_laplacian|_h
  double dilation_sq = 0.0;         ///< |d phi|^2 / rank, 0 at critical points
  /// |M - lambda^2 I|_F / lambda^2 for M the pulled-back metric on the
  /// horizontal space in a g-orthonormal frame.
  double conformality_residual = 0.0;
  /// g-norm of the horizontal part of grad |d phi|^2, divided by |d phi|^2.
  double energy_gradient_vertical_residual = 0.0;
  /// |inf_laplacian|_h / max(1, |d phi|^2)^{3/2}.
  double inf_harmonic_residual = 0.0;
  /// |d phi(grad lambda^2)|_h in the same units as inf_harmonic_residual
  /// (scaled by rank/2).
  double homothety_residual = 0.0;
  /// (dim N - rank) / dim N at non-critical points: 0 iff d(phi) is onto.
  double onto_deficit = 0.0;
  int rank = 0;
  bool critical = false;
  bool near_degenerate = false;
};

MapReport map_report(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const double> x,
                     double rank_tol = kDefaultRankTol);

enum class Verdict : unsigned {
  infinity_harmonic = 1u << 0,
  hwc = 1u << 1,
  horizontally_homothetic = 1u << 2,
  infinity_harmonic_morphism = 1u << 3,
};

class VerdictSet {
 public:
  VerdictSet() = default;
  VerdictSet(std::initializer_list<Verdict> vs) {
    for (Verdict v : vs) insert(v);
  }

  void insert(Verdict v) { bits_ |= static_cast<unsigned>(v); }
  bool contains(Verdict v) const { return (bits_ & static_cast<unsigned>(v)) != 0; }
  bool contains_all(VerdictSet other) const { return (bits_ & other.bits_) == other.bits_; }
  bool intersects(VerdictSet other) const { return (bits_ & other.bits_) != 0; }
  bool empty() const { return bits_ == 0; }
  unsigned bits() const { return bits_; }
  std::vector<std::string> names() const;

  friend bool operator==(VerdictSet, VerdictSet) = default;

 private:
  unsigned bits_ = 0;
};

std::string verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view name);
inline constexpr Verdict kAllVerdicts[] = {Verdict::infinity_harmonic, Verdict::hwc,
                                           Verdict::horizontally_homothetic,
                                           Verdict::infinity_harmonic_morphism};

inline constexpr double kDefaultTolerance = 1e-7;

struct Classification {
  VerdictSet verdict;
  double tolerance = kDefaultTolerance;
  int sample_count = 0;
  /// Keys: inf_harmonic, energy_gradient_vertical, conformality, onto_deficit,
  /// homothety, inf_laplacian_raw.
  std::map<std::string, double> worst_residuals;
  std::map<std::string, Point> worst_points;
  int critical_points = 0;
  int near_degenerate_points = 0;
};

/// Throws ArgumentError on an empty sample list. The verdict set always
/// satisfies morphism => {hwc, infinity_harmonic, horizontally_homothetic};
/// a violation raises std::logic_error.
Classification classify(const SmoothMap& phi, const Metric& g, const Metric& h, std::span<const Point> samples,
                        double tol = kDefaultTolerance, double rank_tol = kDefaultRankTol);

/// Classification from precomputed reports.
Classification classify_reports(std::span<const MapReport> reports, double tol);

struct LinearMorphism {
  bool is_morphism = false;
  std::optional<double> lambda;
};

/// A (n x m) is a linear infinity harmonic morphism iff it is onto and
/// A A^T = lambda^2 I for some lambda > 0 (tolerance 1e-10).
LinearMorphism linear_morphism_check(const Eigen::MatrixXd& a);

/// |inf Laplacian of dist(0, .) o A| at r * w for each radius, with w a fixed
/// witness direction. Throws DegenerateProbeError when A is horizontally
/// conformal and ArgumentError when A is not onto or radii do not decrease.
std::vector<double> morphism_blowup_probe(const Eigen::MatrixXd& a, std::span<const double> radii);
/// The witness direction used by morphism_blowup_probe.
Eigen::VectorXd blowup_witness_direction(const Eigen::MatrixXd& a);

/// max over samples of | |grad(f o pi)|^2 - lambda^2 (|grad f|^2 o pi) |, with
/// lambda^2 = |d pi|^2 / rank and |grad f| measured on the target manifold.
double pullback_energy_check(const SmoothMap& pi, const Metric& g, const Metric& h, const SmoothMap& f,
                             std::span<const Point> samples);

}  // namespace infharm
