#include "infharm/mapspec.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <vector>

#include "infharm/error.hpp"
#include "infharm/expr.hpp"

namespace infharm {

namespace {

struct Line {
  int number = 0;
  std::string key;
  std::string value;
  int key_column = 1;
  int value_column = 1;
};

std::string trim(const std::string& s, size_t& offset) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    offset = s.size();
    return {};
  }
  const size_t e = s.find_last_not_of(" \t\r");
  offset = b;
  return s.substr(b, e - b + 1);
}

std::vector<Line> split_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const size_t hash = raw.find('#');
    const std::string text = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) {
      size_t off = 0;
      trim(text, off);
      throw ParseError("expected 'key = value'", number, static_cast<int>(off) + 1);
    }
    Line l;
    l.number = number;
    size_t koff = 0, voff = 0;
    l.key = trim(text.substr(0, eq), koff);
    l.value = trim(text.substr(eq + 1), voff);
    l.key_column = static_cast<int>(koff) + 1;
    l.value_column = static_cast<int>(eq + 1 + voff) + 1;
    if (l.value.empty()) throw ParseError("missing value for '" + l.key + "'", number, l.value_column);
    out.push_back(std::move(l));
  }
  return out;
}

int parse_int(const Line& l) {
  int v = 0;
  const auto r = std::from_chars(l.value.data(), l.value.data() + l.value.size(), v);
  if (r.ec != std::errc() || r.ptr != l.value.data() + l.value.size()) {
    throw ParseError("expected an integer", l.number, l.value_column);
  }
  return v;
}

double parse_double(const std::string& s, int line, int column) {
  size_t off = 0;
  const std::string t = trim(s, off);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size()) {
    throw ParseError("expected a number", line, column + static_cast<int>(off));
  }
  return v;
}

struct Indexed {
  std::string base;
  std::vector<int> idx;
};

std::optional<Indexed> parse_indexed(const std::string& key) {
  static const std::regex one(R"(^(phi|box)\[(\d+)\]$)");
  static const std::regex two(R"(^(g|h)\[(\d+)\]\[(\d+)\]$)");
  std::smatch m;
  if (std::regex_match(key, m, one)) return Indexed{m[1], {std::stoi(m[2])}};
  if (std::regex_match(key, m, two)) return Indexed{m[1], {std::stoi(m[2]), std::stoi(m[3])}};
  return std::nullopt;
}

using EntryTable = std::map<std::pair<int, int>, Expression>;

Metric build_metric(const Chart& chart, const EntryTable& entries) {
  if (entries.empty()) return Metric::euclidean(chart);
  const int n = chart.dim;
  return Metric(chart, [entries, n](std::span<const Jet2> c) {
    const int d = c.empty() ? 0 : c[0].dim();
    JetMatrix out = JetMatrix::identity(n, d);
    for (const auto& [ij, e] : entries) {
      const Jet2 v = e.evaluate(c);
      out(ij.first, ij.second) = v;
      out(ij.second, ij.first) = v;
    }
    return out;
  });
}

}  // namespace

MapSpec parse_map_spec(std::istream& in) {
  const std::vector<Line> lines = split_lines(in);
  std::optional<int> source_dim, target_dim;
  int last_line = 0;
  for (const Line& l : lines) {
    last_line = l.number;
    if (l.key == "source.dim" || l.key == "target.dim") {
      const int v = parse_int(l);
      if (v < 1 || v > kMaxJetDim) {
        throw ParseError("dimension must be between 1 and " + std::to_string(kMaxJetDim), l.number, l.value_column);
      }
      (l.key == "source.dim" ? source_dim : target_dim) = v;
    }
  }
  if (!source_dim) throw ParseError("missing source.dim", last_line + 1, 1);
  if (!target_dim) throw ParseError("missing target.dim", last_line + 1, 1);
  const int m = *source_dim, n = *target_dim;

  bool sphere = false;
  EntryTable g_entries, h_entries;
  std::map<int, Expression> phi;
  std::vector<double> lower(static_cast<size_t>(m), -1.0), upper(static_cast<size_t>(m), 1.0);
  std::vector<Expression> excludes;
  double margin = kDefaultMargin;
  int grid = 8;

  for (const Line& l : lines) {
    if (l.key == "source.dim" || l.key == "target.dim") continue;
    if (l.key == "target.sphere") {
      if (l.value == "true") {
        sphere = true;
      } else if (l.value == "false") {
        sphere = false;
      } else {
        throw ParseError("expected true or false", l.number, l.value_column);
      }
      continue;
    }
    if (l.key == "margin") {
      margin = parse_double(l.value, l.number, l.value_column);
      if (!(margin >= 0.0)) throw ParseError("margin must be >= 0", l.number, l.value_column);
      continue;
    }
    if (l.key == "grid") {
      grid = parse_int(l);
      if (grid < 1) throw ParseError("grid must be >= 1", l.number, l.value_column);
      continue;
    }
    if (l.key == "exclude") {
      excludes.push_back(Expression::parse(l.value, m, l.number, l.value_column));
      continue;
    }
    const std::optional<Indexed> ix = parse_indexed(l.key);
    if (!ix) throw ParseError("unknown key '" + l.key + "'", l.number, l.key_column);
    auto check_index = [&](int i, int limit) {
      if (i < 1 || i > limit) {
        throw ParseError("index " + std::to_string(i) + " out of range 1.." + std::to_string(limit), l.number,
                         l.key_column);
      }
    };
    if (ix->base == "phi") {
      check_index(ix->idx[0], n);
      phi.insert_or_assign(ix->idx[0] - 1, Expression::parse(l.value, m, l.number, l.value_column));
    } else if (ix->base == "box") {
      check_index(ix->idx[0], m);
      const size_t comma = l.value.find(',');
      if (comma == std::string::npos) throw ParseError("expected 'lower, upper'", l.number, l.value_column);
      const double lo = parse_double(l.value.substr(0, comma), l.number, l.value_column);
      const double hi = parse_double(l.value.substr(comma + 1), l.number, l.value_column + static_cast<int>(comma) + 1);
      if (!(hi > lo)) throw ParseError("box upper bound must exceed lower bound", l.number, l.value_column);
      lower[static_cast<size_t>(ix->idx[0] - 1)] = lo;
      upper[static_cast<size_t>(ix->idx[0] - 1)] = hi;
    } else {
      const bool src = ix->base == "g";
      const int dim = src ? m : n;
      check_index(ix->idx[0], dim);
      check_index(ix->idx[1], dim);
      const std::pair<int, int> key{std::min(ix->idx[0], ix->idx[1]) - 1, std::max(ix->idx[0], ix->idx[1]) - 1};
      (src ? g_entries : h_entries).insert_or_assign(key, Expression::parse(l.value, dim, l.number, l.value_column));
    }
  }
  for (int k = 0; k < n; ++k) {
    if (!phi.count(k)) throw ParseError("missing phi[" + std::to_string(k + 1) + "]", last_line + 1, 1);
  }

  const Chart source = Chart::euclidean(m, "R^" + std::to_string(m));
  const Chart target = sphere ? Chart::ambient_sphere(n) : Chart::euclidean(n, "R^" + std::to_string(n));
  std::vector<Expression> comps;
  for (int k = 0; k < n; ++k) comps.push_back(phi.at(k));

  MapSpec spec{m,
               n,
               sphere,
               SmoothMap(source, target,
                         [comps](std::span<const Jet2> c) {
                           JetVector out;
                           for (const Expression& e : comps) out.push_back(e.evaluate(c));
                           return out;
                         }),
               build_metric(source, g_entries),
               build_metric(target, h_entries),
               {}};
  spec.region.lower = lower;
  spec.region.upper = upper;
  spec.region.points_per_axis = grid;
  spec.region.description = "map description box";
  if (!excludes.empty()) {
    spec.region.keep = [excludes, margin](const Point& x) {
      for (const Expression& e : excludes) {
        if (!(std::abs(e.evaluate(std::span<const double>(x))) >= margin)) return false;
      }
      return true;
    };
  }
  return spec;
}

MapSpec parse_map_spec_string(const std::string& text) {
  std::istringstream in(text);
  return parse_map_spec(in);
}

}  // namespace infharm
