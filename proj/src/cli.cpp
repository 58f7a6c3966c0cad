#include "infharm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infharm/catalog.hpp"
#include "infharm/conformal.hpp"
#include "infharm/error.hpp"
#include "infharm/expr.hpp"
#include "infharm/mapspec.hpp"
#include "infharm/parallel.hpp"
#include "infharm/reductions.hpp"

namespace infharm {

namespace {

using Json = nlohmann::ordered_json;

struct Common {
  double tol = kDefaultTolerance;
  int grid = 0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_tol = true) {
  if (with_tol) cmd->add_option("--tol", c.tol, "residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--grid", c.grid, "grid points per axis (0 keeps the default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", c.seed, "seed for random sample points");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "human"}));
  cmd->add_option("--out", c.out, "write the report to this file");
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(const Point& p) {
  Json a = Json::array();
  for (double v : p) a.push_back(number(v));
  return a;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

std::string point_text(std::span<const double> p) {
  std::ostringstream s;
  s << std::setprecision(6) << '(';
  for (size_t i = 0; i < p.size(); ++i) s << (i ? ", " : "") << p[i];
  s << ')';
  return s.str();
}

Json verdict_json(VerdictSet v) {
  Json o = Json::object();
  for (Verdict x : kAllVerdicts) o[verdict_name(x)] = v.contains(x);
  return o;
}

Json names_json(VerdictSet v) {
  Json a = Json::array();
  for (Verdict x : kAllVerdicts) {
    if (v.contains(x)) a.push_back(verdict_name(x));
  }
  return a;
}

std::string names_text(VerdictSet v) {
  std::string s;
  for (const std::string& n : v.names()) s += (s.empty() ? "" : ",") + n;
  return s;
}

Json classification_json(const Classification& c) {
  Json o;
  o["verdict"] = verdict_json(c.verdict);
  o["verdicts"] = names_json(c.verdict);
  o["tolerance"] = c.tolerance;
  o["sample_count"] = c.sample_count;
  o["critical_points"] = c.critical_points;
  o["near_degenerate_points"] = c.near_degenerate_points;
  Json res = Json::object(), pts = Json::object();
  for (const auto& [k, v] : c.worst_residuals) res[k] = number(v);
  for (const auto& [k, p] : c.worst_points) pts[k] = point_json(p);
  o["worst_residuals"] = res;
  o["worst_points"] = pts;
  return o;
}

void residual_table(std::ostream& os, const Classification& c) {
  os << "  residual                   worst        at\n";
  for (const auto& [k, v] : c.worst_residuals) {
    os << "  " << std::left << std::setw(26) << k << std::right << std::setw(10) << fmt(v);
    auto it = c.worst_points.find(k);
    if (it != c.worst_points.end()) os << "   " << point_text(it->second);
    os << '\n';
  }
}

// Writes `text` to --out or the output stream.
int emit(const Common& c, const std::string& text, std::ostream& out, std::ostream& err) {
  if (c.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    err << "error: cannot open output file '" << c.out << "'\n";
    return kExitUsage;
  }
  f << text;
  return kExitOk;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int cmd_check(const Common& c, const std::vector<std::string>& ids_in, std::ostream& out, std::ostream& err) {
  std::vector<const CatalogEntry*> entries;
  if (ids_in.empty()) {
    for (const CatalogEntry& e : catalog_list()) entries.push_back(&e);
  } else {
    std::vector<std::string> ids = ids_in;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (const std::string& id : ids) {
      try {
        entries.push_back(&catalog_get(id));
      } catch (const UnknownIdError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }
  CheckOptions opt;
  opt.tol = c.tol;
  opt.grid = c.grid;
  opt.seed = c.seed;

  std::vector<EntryCheck> results(entries.size());
  detail::parallel_for(
      entries.size(),
      [&](size_t i) {
        try {
          results[i] = check_entry(*entries[i], opt);
        } catch (const std::exception& e) {
          results[i].id = entries[i]->id;
          results[i].passed = false;
          results[i].failures.push_back(std::string("error: ") + e.what());
        }
      },
      1);

  bool all = true;
  for (const EntryCheck& r : results) all = all && r.passed;

  std::string text;
  if (c.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "check";
    j["tolerance"] = c.tol;
    j["grid"] = c.grid;
    j["seed"] = c.seed;
    j["passed"] = all;
    Json arr = Json::array();
    for (size_t i = 0; i < results.size(); ++i) {
      const EntryCheck& r = results[i];
      const CatalogEntry& e = *entries[i];
      Json o;
      o["id"] = r.id;
      o["title"] = e.title;
      o["negative"] = e.negative;
      o["passed"] = r.passed;
      o["expected"] = names_json(e.expected);
      o["expected_absent"] = names_json(e.expected_absent);
      o["classification"] = classification_json(r.classification);
      o["energy"] = {{"has_oracle", r.has_energy_oracle}, {"max_rel_error", number(r.energy_max_rel_error)}};
      o["witness_residual"] = r.witness_residual ? number(*r.witness_residual) : Json(nullptr);
      o["failures"] = r.failures;
      arr.push_back(o);
    }
    j["entries"] = arr;
    text = dump(j);
  } else if (c.format == "csv") {
    std::ostringstream s;
    s << std::setprecision(17);
    s << "id,passed,verdicts,inf_harmonic,conformality,homothety,energy_max_rel_error\n";
    for (const EntryCheck& r : results) {
      auto res = [&](const char* k) {
        auto it = r.classification.worst_residuals.find(k);
        return it == r.classification.worst_residuals.end() ? 0.0 : it->second;
      };
      s << r.id << ',' << (r.passed ? "true" : "false") << ',' << names_text(r.classification.verdict) << ','
        << res("inf_harmonic") << ',' << res("conformality") << ',' << res("homothety") << ','
        << r.energy_max_rel_error << '\n';
    }
    text = s.str();
  } else {
    std::ostringstream s;
    int passed = 0;
    for (const EntryCheck& r : results) {
      passed += r.passed ? 1 : 0;
      s << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(32) << r.id << std::right
        << names_text(r.classification.verdict);
      if (r.has_energy_oracle) s << "  energy rel err " << fmt(r.energy_max_rel_error);
      if (r.witness_residual) s << "  witness " << fmt(*r.witness_residual);
      s << '\n';
      for (const std::string& f : r.failures) s << "     " << f << '\n';
    }
    s << passed << "/" << results.size() << " entries passed\n";
    text = s.str();
  }
  const int code = emit(c, text, out, err);
  if (code != kExitOk) return code;
  return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_classify(const Common& c, const std::string& path, int random_count, const std::vector<std::string>& expect,
                 std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open '" << path << "'\n";
    return kExitUsage;
  }
  std::optional<VerdictSet> expected;
  if (!expect.empty()) {
    VerdictSet v;
    for (const std::string& name : expect) {
      if (name == "none") continue;
      const std::optional<Verdict> p = parse_verdict(name);
      if (!p) {
        err << "error: unknown verdict '" << name << "'\n";
        return kExitUsage;
      }
      v.insert(*p);
    }
    expected = v;
  }
  Classification cl;
  try {
    const MapSpec spec = parse_map_spec(in);
    std::vector<Point> samples = spec.region.grid(c.grid);
    for (Point& p : spec.region.random(random_count, c.seed)) samples.push_back(std::move(p));
    cl = classify(spec.map, spec.source_metric, spec.target_metric, samples, c.tol);
  } catch (const ParseError& e) {
    err << path << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
    return kExitUsage;
  } catch (const SingularPointError& e) {
    err << "error: " << e.reason() << " at sample point " << point_text(e.point()) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bool ok = !expected || *expected == cl.verdict;
  std::string text;
  if (c.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "classify";
    j["file"] = path;
    j["seed"] = c.seed;
    j["classification"] = classification_json(cl);
    if (expected) {
      j["expected"] = names_json(*expected);
      j["passed"] = ok;
    }
    text = dump(j);
  } else if (c.format == "csv") {
    std::ostringstream s;
    s << std::setprecision(17) << "residual,worst\n";
    for (const auto& [k, v] : cl.worst_residuals) s << k << ',' << v << '\n';
    text = s.str();
  } else {
    std::ostringstream s;
    s << "verdict: " << names_text(cl.verdict) << "  (" << cl.sample_count << " samples, tol " << fmt(cl.tolerance)
      << ")\n";
    residual_table(s, cl);
    if (cl.critical_points) s << "  critical points: " << cl.critical_points << '\n';
    if (expected) s << (ok ? "matches" : "does not match") << " expected verdict " << names_text(*expected) << '\n';
    text = s.str();
  }
  const int code = emit(c, text, out, err);
  if (code != kExitOk) return code;
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct ReduceArgs {
  std::string branch;
  int k = 1;
  double a = 0.0;
  std::optional<double> c;
  int n = 2;
  double alpha = std::numbers::pi / 3;
  double alpha0 = 0.0;
  double r0 = 0.5;
  double step = 0.0;
  double s0 = -5.0;
  double s1 = 5.0;
  double s_end = 20.0;
  int sign = 1;
  int stride = 1;
  int verify_grid = 50;
};

int cmd_reduce(const Common& c, const ReduceArgs& r, std::ostream& out, std::ostream& err) {
  ReductionSolution sol;
  try {
    if (r.branch == "kink") {
      sol = cylinder_kink(r.k, r.a, r.s0, r.s1, r.step > 0 ? r.step : 1e-3);
    } else if (r.branch == "constant") {
      sol = cylinder_constant(r.k, r.alpha, r.s0, r.s1, r.step > 0 ? r.step : 1e-2);
    } else if (r.branch == "pendulum") {
      sol = cylinder_pendulum(r.k, r.c.value_or(2.0 * r.k * r.k), r.alpha0, r.s_end, r.step > 0 ? r.step : 1e-3);
    } else if (r.branch == "ball") {
      sol = solve_ball_profile(r.n, r.c.value_or(r.n + 1.0), r.r0, r.step > 0 ? r.step : 1e-4, r.sign);
    } else {
      sol = equator_solution(r.n, r.r0);
    }
  } catch (const WrongRegimeError& e) {
    err << "error: the pendulum branch needs C > k^2 (circulating regime): " << e.what()
        << "\n  use `reduce kink` for C = k^2 or `reduce constant` for a constant profile\n";
    return kExitUsage;
  } catch (const InfeasibleConstantError& e) {
    err << "error: the ball profile needs C >= n - 1 so that rho'(1) is real: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ReductionVerification ver;
  try {
    ver = reconstruct_and_verify(sol, r.verify_grid);
  } catch (const Error& e) {
    err << "error: reconstruction failed: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  if (!c.out.empty()) {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "error: cannot open output file '" << c.out << "'\n";
      return kExitUsage;
    }
    write_csv(sol, f, r.stride);
  }

  std::string text;
  if (c.format == "csv") {
    if (c.out.empty()) {
      std::ostringstream s;
      write_csv(sol, s, r.stride);
      text = s.str();
    }
  } else if (c.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "reduce";
    j["branch"] = r.branch;
    j["kind"] = reduction_kind_name(sol.kind);
    j["n"] = sol.n;
    j["k"] = sol.k;
    j["step"] = sol.step;
    j["sample_count"] = sol.samples.size();
    j["conserved_constant"] = sol.conserved_constant ? number(*sol.conserved_constant) : Json(nullptr);
    j["max_invariant_residual"] = number(sol.max_residual());
    j["turning_point"] = sol.turning_point ? number(*sol.turning_point) : Json(nullptr);
    j["period"] = sol.period ? number(*sol.period) : Json(nullptr);
    j["verification"] = {{"points", ver.points},
                         {"max_inf_laplacian", number(ver.max_inf_laplacian)},
                         {"max_energy_error", number(ver.max_energy_error)},
                         {"passed", ver.passed}};
    if (!c.out.empty()) j["csv"] = c.out;
    text = dump(j);
  } else {
    std::ostringstream s;
    s << reduction_kind_name(sol.kind) << ": " << sol.samples.size() << " samples, step " << sol.step << '\n';
    if (sol.conserved_constant) s << "  conserved constant C = " << *sol.conserved_constant << '\n';
    s << "  max invariant residual " << fmt(sol.max_residual()) << '\n';
    if (sol.turning_point) s << "  turning point at " << *sol.turning_point << '\n';
    if (sol.period) s << "  period " << std::setprecision(10) << *sol.period << '\n';
    s << "  reconstructed map on " << ver.points << " points: max |inf Laplacian| " << fmt(ver.max_inf_laplacian)
      << ", max energy error " << fmt(ver.max_energy_error) << '\n';
    s << (ver.passed ? "  energy density is constant and the map is infinity harmonic\n" : "  verification FAILED\n");
    text = s.str();
  }
  out << text;
  return ver.passed ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct ConformalCheck {
  std::string name;
  double worst = 0.0;
  double threshold = 0.0;
  int points = 0;
};

int cmd_conformal(const Common& c, int count, std::ostream& out, std::ostream& err) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const SmoothMap angle(Chart::euclidean(2), Chart::euclidean(1),
                        [](std::span<const Jet2> x) { return JetVector{atan(x[0] / x[1])}; });
  auto family = [](double a1, double a2) {
    return SmoothMap(Chart::euclidean(3), Chart::euclidean(1), [a1, a2](std::span<const Jet2> x) {
      return JetVector{(a1 * x[0] + a2 * x[1]) / (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 2.0 * x[2])};
    });
  };
  auto draw = [&](int dim, double radius, bool off_axis) {
    for (;;) {
      Point p(static_cast<size_t>(dim));
      double r2 = 0.0;
      for (double& v : p) {
        v = radius * uni(rng);
        r2 += v * v;
      }
      if (r2 >= radius * radius) continue;
      if (off_axis && std::abs(p[1]) < 0.1) continue;
      return p;
    }
  };

  std::vector<ConformalCheck> checks;
  try {
    ConformalCheck sph{"sphere_equation angle function", 0.0, 1e-8, count};
    ConformalCheck hyp{"hyperbolic_equation angle function", 0.0, 1e-8, count};
    ConformalCheck two{"conformal_law vs scaled metric", 0.0, 1e-9, count};
    const Metric e2 = Metric::euclidean(Chart::euclidean(2));
    const ConformalFactor fs = ConformalFactor::sphere(2);
    const Metric scaled = conformally_scaled_metric(e2, fs);
    for (int i = 0; i < count; ++i) {
      const Point p = draw(2, 2.0, true);
      sph.worst = std::max(sph.worst, sphere_equation_terms(angle, p).relative());
      const double a = conformal_inf_laplacian(angle, e2, fs, p);
      const double b = inf_laplacian_function(angle, scaled, p);
      two.worst = std::max(two.worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      const Point q = draw(2, 0.95, true);
      hyp.worst = std::max(hyp.worst, hyperbolic_equation_terms(angle, q).relative());
    }
    checks.push_back(sph);
    checks.push_back(hyp);
    checks.push_back(two);
    for (const auto& [a1, a2] : {std::pair{1.0, 2.0}, std::pair{3.0, -1.0}}) {
      ConformalCheck fam{"hyperbolic_equation family a=(" + std::to_string(static_cast<int>(a1)) + "," +
                             std::to_string(static_cast<int>(a2)) + ")",
                         0.0, 1e-8, count};
      const SmoothMap u = family(a1, a2);
      for (int i = 0; i < count; ++i) {
        fam.worst = std::max(fam.worst, hyperbolic_equation_terms(u, draw(3, 0.9, false)).relative());
      }
      checks.push_back(fam);
    }
    ConformalCheck res{"sphere_restriction ambient vs polar", 0.0, 1e-6, count};
    const SmoothMap height(Chart::euclidean(3), Chart::euclidean(1), [](std::span<const Jet2> x) {
      return JetVector{x[2] + x[0] * x[1] + exp(0.5 * x[0])};
    });
    for (int i = 0; i < count; ++i) {
      Point p = draw(3, 1.0, false);
      double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      if (n < 1e-3 || std::abs(p[2] / n) > 0.99) {
        --i;
        continue;
      }
      for (double& v : p) v /= n;
      res.worst = std::max(res.worst, std::abs(sphere_restriction_residual(height, p) -
                                               sphere_restriction_polar(height, p)));
    }
    checks.push_back(res);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  bool all = true;
  for (const ConformalCheck& k : checks) all = all && k.worst < k.threshold;
  std::string text;
  if (c.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "conformal";
    j["seed"] = c.seed;
    j["passed"] = all;
    Json arr = Json::array();
    for (const ConformalCheck& k : checks) {
      arr.push_back({{"name", k.name},
                     {"points", k.points},
                     {"worst", number(k.worst)},
                     {"threshold", k.threshold},
                     {"passed", k.worst < k.threshold}});
    }
    j["checks"] = arr;
    text = dump(j);
  } else if (c.format == "csv") {
    std::ostringstream s;
    s << std::setprecision(17) << "name,points,worst,threshold,passed\n";
    for (const ConformalCheck& k : checks) {
      s << k.name << ',' << k.points << ',' << k.worst << ',' << k.threshold << ','
        << (k.worst < k.threshold ? "true" : "false") << '\n';
    }
    text = s.str();
  } else {
    std::ostringstream s;
    for (const ConformalCheck& k : checks) {
      s << (k.worst < k.threshold ? "PASS " : "FAIL ") << std::left << std::setw(40) << k.name << std::right
        << " worst " << fmt(k.worst) << " (threshold " << fmt(k.threshold) << ", " << k.points << " points)\n";
    }
    text = s.str();
  }
  const int code = emit(c, text, out, err);
  if (code != kExitOk) return code;
  return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_catalog(const Common& c, std::ostream& out, std::ostream& err) {
  std::string text;
  if (c.format == "json") {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "catalog";
    Json arr = Json::array();
    for (const CatalogEntry& e : catalog_list()) {
      arr.push_back({{"id", e.id},
                     {"title", e.title},
                     {"source_dim", e.map.source().dim},
                     {"target_dim", e.map.target().dim},
                     {"expected", names_json(e.expected)},
                     {"expected_absent", names_json(e.expected_absent)},
                     {"negative", e.negative},
                     {"region", e.region.description},
                     {"provenance", e.provenance}});
    }
    j["entries"] = arr;
    text = dump(j);
  } else if (c.format == "csv") {
    std::ostringstream s;
    s << "id,negative,expected,title\n";
    for (const CatalogEntry& e : catalog_list()) {
      s << e.id << ',' << (e.negative ? "true" : "false") << ',' << names_text(e.expected) << ",\"" << e.title
        << "\"\n";
    }
    text = s.str();
  } else {
    std::ostringstream s;
    for (const CatalogEntry& e : catalog_list()) {
      s << std::left << std::setw(32) << e.id << std::right << e.title << '\n';
      s << "    expected: " << names_text(e.expected) << (e.negative ? "  (negative control)" : "") << '\n';
    }
    text = s.str();
  }
  return emit(c, text, out, err);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinity Laplacians, energy densities and classification of maps between Riemannian manifolds"};
  app.name("infharm");
  app.require_subcommand(1);

  Common check_c, classify_c, reduce_c, conformal_c, catalog_c;
  std::vector<std::string> entry_ids;
  auto* check = app.add_subcommand("check", "verify the example catalog");
  add_common(check, check_c);
  check->add_option("--entry", entry_ids, "catalog id (repeatable; default all)");

  std::string spec_path;
  int random_count = 0;
  std::vector<std::string> expect;
  auto* cls = app.add_subcommand("classify", "classify a map given in a map description file");
  add_common(cls, classify_c);
  cls->add_option("file", spec_path, "map description file")->required();
  cls->add_option("--samples", random_count, "extra random sample points drawn with --seed")
      ->check(CLI::NonNegativeNumber);
  cls->add_option("--expect", expect, "expected verdicts (or none); exit 1 on mismatch")->delimiter(',');

  ReduceArgs ra;
  auto* red = app.add_subcommand("reduce", "solve a symmetric reduction and verify the rebuilt map");
  add_common(red, reduce_c, false);
  red->add_option("branch", ra.branch, "kink | pendulum | constant | ball | equator")
      ->required()
      ->check(CLI::IsMember({"kink", "pendulum", "constant", "ball", "equator"}));
  red->add_option("--k", ra.k, "winding number (cylinder branches)");
  red->add_option("--A", ra.a, "kink shift");
  red->add_option("--C", ra.c, "conserved constant");
  red->add_option("--n", ra.n, "ball dimension");
  red->add_option("--alpha", ra.alpha, "constant profile value");
  red->add_option("--alpha0", ra.alpha0, "pendulum initial profile value");
  red->add_option("--r0", ra.r0, "inner radius (ball, equator)");
  red->add_option("--step", ra.step, "integration or sampling step");
  red->add_option("--s0", ra.s0, "start of the s range (kink, constant)");
  red->add_option("--s1", ra.s1, "end of the s range (kink, constant)");
  red->add_option("--s-end", ra.s_end, "integration length (pendulum)");
  red->add_option("--sign", ra.sign, "branch of rho'(1) (ball)")->check(CLI::IsMember({-1, 1}));
  red->add_option("--stride", ra.stride, "CSV row stride")->check(CLI::PositiveNumber);
  red->add_option("--verify-grid", ra.verify_grid, "reconstruction grid per axis")->check(CLI::Range(2, 200));

  int conf_count = 100;
  auto* conf = app.add_subcommand("conformal", "model-space equation and restriction checks");
  add_common(conf, conformal_c, false);
  conf->add_option("--samples", conf_count, "random points per check")->check(CLI::Range(1, 100000));

  auto* cat = app.add_subcommand("catalog", "list the example catalog");
  add_common(cat, catalog_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests carry exit code 0.
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_c, entry_ids, out, err);
    if (cls->parsed()) return cmd_classify(classify_c, spec_path, random_count, expect, out, err);
    if (red->parsed()) return cmd_reduce(reduce_c, ra, out, err);
    if (conf->parsed()) return cmd_conformal(conformal_c, conf_count, out, err);
    return cmd_catalog(catalog_c, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace infharm
