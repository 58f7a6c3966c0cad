#pragma once

// Line-based map descriptions, one `key = value` per line, '#' comments:
//
//   source.dim = 3
//   target.dim = 2
//   target.sphere = false      # true: target is the unit sphere in R^{target.dim}
//   g[1][1] = 1 + x1^2         # source metric entries (default: identity)
//   h[2][2] = 4                # target metric entries, in target coordinates
//   phi[1] = x1                # one line per target component
//   box[1] = -1, 1             # sample box per source axis (default [-1, 1])
//   exclude = x1^2 + x2^2      # drop samples where |expr| < margin; repeatable
//   margin = 0.05
//   grid = 8                   # points per axis
//
// Metric entries are symmetric; giving [i][j] also sets [j][i].

#include <istream>
#include <string>

#include "infharm/catalog.hpp"
#include "infharm/geometry.hpp"

namespace infharm {

struct MapSpec {
  int source_dim = 0;
  int target_dim = 0;
  bool target_sphere = false;
  SmoothMap map;
  Metric source_metric;
  Metric target_metric;
  SampleRegion region;
};

/// Throws ParseError (with line and column) for syntax errors, unknown keys
/// or identifiers, and missing required keys.
MapSpec parse_map_spec(std::istream& in);
MapSpec parse_map_spec_string(const std::string& text);

}  // namespace infharm
