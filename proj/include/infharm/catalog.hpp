#pragma once

// Registry of concrete example maps with their expected energy densities and
// verdicts, plus the verification routine that checks an entry.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infharm/geometry.hpp"
#include "infharm/inflap.hpp"

namespace infharm {

/// Axis-aligned box in chart coordinates, sampled on a tensor grid and
/// filtered by `keep` (which removes singular sets with their margin).
struct SampleRegion {
  std::vector<double> lower;
  std::vector<double> upper;
  int points_per_axis = 10;
  std::function<bool(const Point&)> keep;
  std::string description;

  /// Tensor grid including the box corners. `per_axis` overrides
  /// points_per_axis when positive. At most 10^4 points.
  std::vector<Point> grid(int per_axis = 0) const;
  /// `count` uniform points from the box that pass `keep`, drawn from a
  /// generator seeded with `seed`.
  std::vector<Point> random(int count, std::uint64_t seed) const;
};

inline constexpr double kDefaultMargin = 0.05;
inline constexpr int kMaxGridPoints = 10000;

struct CatalogEntry {
  std::string id;
  std::string title;
  SmoothMap map;
  Metric source_metric;
  Metric target_metric;
  /// Closed-form energy density; empty when only "nonconstant" is known.
  std::function<double(const Point&)> expected_energy;
  VerdictSet expected;
  /// Verdicts that must not appear.
  VerdictSet expected_absent;
  SampleRegion region;
  std::string provenance;
  /// Negative controls must exhibit a residual above kWitnessThreshold at
  /// `witness` for the criterion `witness_criterion`.
  bool negative = false;
  Point witness;
  std::string witness_criterion;
};

inline constexpr double kWitnessThreshold = 1e-3;

std::vector<std::string> catalog_ids();
const std::vector<CatalogEntry>& catalog_list();
/// Throws UnknownIdError.
const CatalogEntry& catalog_get(const std::string& id);

/// Parameterized entries.
CatalogEntry exp_trig_entry(std::vector<double> lambda);
CatalogEntry hyperbolic_family_entry(std::vector<double> a, std::string id);

struct CheckOptions {
  double tol = 1e-6;
  int grid = 0;            ///< points per axis; 0 keeps the entry default
  std::uint64_t seed = 0;  ///< extra random samples are drawn with this seed
  int random_samples = 32;
  double energy_rel_tol = 1e-10;
};

struct EntryCheck {
  std::string id;
  bool passed = false;
  Classification classification;
  double energy_max_rel_error = 0.0;  ///< 0 when no closed form
  bool has_energy_oracle = false;
  std::optional<double> witness_residual;
  std::vector<std::string> failures;
};

EntryCheck check_entry(const CatalogEntry& entry, const CheckOptions& options);

/// Sample points used by check_entry: grid followed by seeded random points.
std::vector<Point> entry_samples(const CatalogEntry& entry, const CheckOptions& options);

/// The residual named by `criterion` for a single point report.
double criterion_residual(const MapReport& report, const std::string& criterion);

}  // namespace infharm
