#include "infharm/reductions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "infharm/error.hpp"
#include "infharm/inflap.hpp"
#include "infharm/parallel.hpp"

namespace infharm {

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::array<double, 2>;

template <class F>
State rk4_step(const F& f, double x, const State& y, double h) {
  auto axpy = [](const State& a, double s, const State& b) { return State{a[0] + s * b[0], a[1] + s * b[1]}; };
  const State k1 = f(x, y);
  const State k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(x + h, axpy(y, h, k3));
  return State{y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
               y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("step must be positive");
}

int steps_for(double length, double step) {
  const double n = std::ceil(length / step - 1e-9);
  if (n > 5e7) throw ArgumentError("too many integration steps");
  return std::max(1, static_cast<int>(n));
}

double cylinder_residual(int k, double c, double a, double da) {
  const double s = std::sin(a);
  return std::abs(da * da + k * k * s * s - c);
}

// Profile values at sample nodes, looked up by parameter.
class Profile {
 public:
  explicit Profile(std::vector<ProfileSample> samples) : samples_(std::move(samples)) {
    std::sort(samples_.begin(), samples_.end(),
              [](const ProfileSample& a, const ProfileSample& b) { return a.param < b.param; });
  }

  Jet2 operator()(const Jet2& t) const {
    const double v = t.value();
    auto it = std::lower_bound(samples_.begin(), samples_.end(), v,
                               [](const ProfileSample& s, double x) { return s.param < x; });
    const double tol = 1e-12 * std::max(1.0, std::abs(v));
    const ProfileSample* hit = nullptr;
    if (it != samples_.end() && std::abs(it->param - v) <= tol) hit = &*it;
    if (!hit && it != samples_.begin() && std::abs(std::prev(it)->param - v) <= tol) hit = &*std::prev(it);
    if (!hit) throw ArgumentError("profile evaluated away from its sample nodes");
    return Jet2::chain(t, hit->value, hit->derivative, hit->second);
  }

 private:
  std::vector<ProfileSample> samples_;
};

std::vector<double> node_params(const ReductionSolution& sol, int count) {
  const int n = static_cast<int>(sol.samples.size());
  if (n == 0) throw ArgumentError("reduction solution has no samples");
  std::vector<double> out;
  const int c = std::min(count, n);
  for (int j = 0; j < c; ++j) {
    const int idx = c == 1 ? 0 : static_cast<int>(std::lround(static_cast<double>(j) * (n - 1) / (c - 1)));
    out.push_back(sol.samples[static_cast<size_t>(idx)].param);
  }
  return out;
}

}  // namespace

std::string reduction_kind_name(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::equator: return "equator";
    case ReductionKind::ball_profile: return "ball_profile";
    case ReductionKind::cylinder_constant: return "cylinder_constant";
    case ReductionKind::cylinder_kink: return "cylinder_kink";
    case ReductionKind::cylinder_pendulum: return "cylinder_pendulum";
  }
  return "unknown";
}

double ReductionSolution::max_residual() const {
  double m = 0.0;
  for (const ProfileSample& s : samples) m = std::max(m, s.residual);
  return m;
}

ReductionSolution solve_ball_profile(int n, double c, double r0, double step, int sign) {
  if (n < 2) throw ArgumentError("ball dimension must be >= 2");
  if (!(r0 > 0.0 && r0 < 1.0)) throw ArgumentError("r0 must lie in (0, 1)");
  if (sign != 1 && sign != -1) throw ArgumentError("branch sign must be +1 or -1");
  check_step(step);
  const double nm1 = n - 1.0;
  if (!(c >= nm1)) {
    throw InfeasibleConstantError("C = " + std::to_string(c) + " is below n - 1 = " + std::to_string(nm1) +
                                  "; rho'(1) would be imaginary");
  }

  // d/dr of rho'^2 + (n-1) sin^2 rho / r^2 = C, solved for rho''.
  const auto field = [nm1](double r, const State& y) {
    const double s = std::sin(y[0]), co = std::cos(y[0]);
    return State{y[1], -nm1 * (s * co / (r * r) - s * s / (r * r * r * y[1]))};
  };
  const auto residual = [nm1, c](double r, const State& y) {
    const double s = std::sin(y[0]);
    return std::abs(y[1] * y[1] + nm1 * s * s / (r * r) - c);
  };

  ReductionSolution sol;
  sol.kind = ReductionKind::ball_profile;
  sol.conserved_constant = c;
  sol.n = n;
  sol.step = step;

  double r = 1.0;
  State y{kPi / 2, sign * std::sqrt(c - nm1)};
  auto record = [&](double rr, const State& yy) {
    sol.samples.push_back({rr, yy[0], yy[1], field(rr, yy)[1], residual(rr, yy)});
  };
  if (y[1] * y[1] < kTurningBand * c) {
    sol.samples.push_back({r, y[0], y[1], 0.0, residual(r, y)});
    sol.turning_point = r;
    return sol;
  }
  record(r, y);
  const int steps = steps_for(1.0 - r0, step);
  for (int i = 0; i < steps; ++i) {
    const double h = (i == steps - 1) ? (r0 - r) : -step;
    const State next = rk4_step(field, r, y, h);
    const double r_next = i == steps - 1 ? r0 : r + h;
    if (!(next[1] * next[1] >= kTurningBand * c) || !std::isfinite(next[0])) {
      sol.turning_point = r;
      break;
    }
    y = next;
    r = r_next;
    record(r, y);
  }
  return sol;
}

ReductionSolution equator_solution(int n, double r0, int count) {
  if (n < 2) throw ArgumentError("ball dimension must be >= 2");
  if (!(r0 > 0.0 && r0 < 1.0)) throw ArgumentError("r0 must lie in (0, 1)");
  if (count < 2) throw ArgumentError("equator solution needs at least two samples");
  ReductionSolution sol;
  sol.kind = ReductionKind::equator;
  sol.n = n;
  sol.step = (1.0 - r0) / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double r = 1.0 - (1.0 - r0) * i / (count - 1);
    sol.samples.push_back({r, kPi / 2, 0.0, 0.0, 0.0});
  }
  return sol;
}

ReductionSolution cylinder_kink(int k, double a, double s0, double s1, double step) {
  if (k == 0) throw ArgumentError("k must be a nonzero integer");
  if (!(s1 > s0)) throw ArgumentError("s range must be increasing");
  check_step(step);
  ReductionSolution sol;
  sol.kind = ReductionKind::cylinder_kink;
  sol.k = k;
  sol.step = step;
  const double c = static_cast<double>(k) * k;
  sol.conserved_constant = c;
  const int steps = steps_for(s1 - s0, step);
  for (int i = 0; i <= steps; ++i) {
    const double s = i == steps ? s1 : s0 + i * step;
    const double u = k * s + a;
    const double alpha = 2.0 * std::atan(std::exp(u)) - kPi / 2;
    const double sech = 1.0 / std::cosh(u);
    const double th = std::tanh(u);
    const double d1 = k * sech;
    const double d2 = -c * th * sech;
    // Residual from the closed-form identities sin a = tanh u, a' = k sech u.
    const double res = std::abs(d1 * d1 + c * th * th - c);
    sol.samples.push_back({s, alpha, d1, d2, res});
  }
  return sol;
}

ReductionSolution cylinder_constant(int k, double alpha, double s0, double s1, double step) {
  if (k == 0) throw ArgumentError("k must be a nonzero integer");
  if (!(s1 > s0)) throw ArgumentError("s range must be increasing");
  check_step(step);
  ReductionSolution sol;
  sol.kind = ReductionKind::cylinder_constant;
  sol.k = k;
  sol.step = step;
  const double sa = std::sin(alpha);
  sol.conserved_constant = k * k * sa * sa;
  const int steps = steps_for(s1 - s0, step);
  for (int i = 0; i <= steps; ++i) {
    const double s = i == steps ? s1 : s0 + i * step;
    sol.samples.push_back({s, alpha, 0.0, 0.0, 0.0});
  }
  return sol;
}

ReductionSolution cylinder_pendulum(int k, double c, double alpha0, double s_end, double step) {
  if (k == 0) throw ArgumentError("k must be a nonzero integer");
  const double k2 = static_cast<double>(k) * k;
  if (!(c > k2)) {
    throw WrongRegimeError("C = " + std::to_string(c) + " is not above k^2 = " + std::to_string(k2) +
                           "; C = k^2 is the kink branch and a' = 0 the constant branch");
  }
  if (!(s_end > 0.0)) throw ArgumentError("s_end must be positive");
  check_step(step);
  const double sa0 = std::sin(alpha0);
  const double da0 = std::sqrt(c - k2 * sa0 * sa0);

  ReductionSolution sol;
  sol.kind = ReductionKind::cylinder_pendulum;
  sol.k = k;
  sol.step = step;
  sol.conserved_constant = c;

  const auto field = [k2](double, const State& y) { return State{y[1], -k2 * std::sin(y[0])}; };
  auto record = [&](double s, const State& y) {
    const double a = 0.5 * y[0], da = 0.5 * y[1];
    sol.samples.push_back({s, a, da, -k2 * std::sin(a) * std::cos(a), cylinder_residual(k, c, a, da)});
  };

  State y{2.0 * alpha0, 2.0 * da0};
  double s = 0.0;
  record(s, y);
  const int steps = steps_for(s_end, step);
  for (int i = 0; i < steps; ++i) {
    const double h = i == steps - 1 ? s_end - s : step;
    const State next = rk4_step(field, s, y, h);
    const double s_next = i == steps - 1 ? s_end : s + h;
    if (!sol.period) {
      // a advances by 2 pi per period of (a mod 2 pi, a').
      const double before = 0.5 * y[0] - alpha0, after = 0.5 * next[0] - alpha0;
      if (before < 2.0 * kPi && after >= 2.0 * kPi) {
        const double w = (2.0 * kPi - before) / (after - before);
        const double da = 0.5 * (y[1] + w * (next[1] - y[1]));
        if (std::abs(da - da0) < 1e-6) sol.period = s + w * (s_next - s);
      }
    }
    y = next;
    s = s_next;
    record(s, y);
  }
  return sol;
}

std::vector<double> pendulum_energy(const ReductionSolution& sol) {
  const double k2 = static_cast<double>(sol.k) * sol.k;
  std::vector<double> out;
  out.reserve(sol.samples.size());
  for (const ProfileSample& p : sol.samples) {
    const double theta = 2.0 * p.value, omega = 2.0 * p.derivative;
    out.push_back(0.5 * omega * omega - k2 * std::cos(theta));
  }
  return out;
}

ReconstructedMap reconstruct(const ReductionSolution& sol, int grid) {
  if (grid < 2) throw ArgumentError("reconstruction grid needs at least 2 points per axis");
  const Profile profile(sol.samples);
  const std::vector<double> nodes = node_params(sol, grid);
  std::vector<double> angles;
  for (int j = 0; j < grid; ++j) angles.push_back(2.0 * kPi * j / grid);

  if (sol.kind == ReductionKind::cylinder_constant || sol.kind == ReductionKind::cylinder_kink ||
      sol.kind == ReductionKind::cylinder_pendulum) {
    const double k = sol.k;
    const Chart cyl = Chart::euclidean(2, "cylinder (s, t)");
    const Chart s2 = Chart::ambient_sphere(3);
    SmoothMap phi(cyl, s2, [profile, k](std::span<const Jet2> c) {
      const Jet2 a = profile(c[0]);
      const Jet2 sa = sin(a);
      const Jet2 kt = k * c[1];
      return JetVector{cos(a), sa * cos(kt), sa * sin(kt)};
    });
    std::vector<Point> pts;
    for (double s : nodes) {
      for (double t : angles) pts.push_back({s, t});
    }
    return {phi, Metric::euclidean(cyl), Metric::euclidean(s2), pts};
  }

  const int n = sol.n;
  if (n == 2) {
    Chart polar{2, [](std::span<const double> x) { return x[0] > 0.0; }, "disc minus origin (r, theta)",
                Embedding::none};
    Chart sphere{2, [](std::span<const double> x) { return x[0] > 0.0 && x[0] < kPi; },
                 "S^2 minus poles (rho, phi)", Embedding::none};
    const Metric g = Metric::diagonal(polar, [](std::span<const Jet2> c) {
      return JetVector{Jet2(1.0, c[0].dim()), c[0] * c[0]};
    });
    const Metric h = Metric::diagonal(sphere, [](std::span<const Jet2> c) {
      const Jet2 s = sin(c[0]);
      return JetVector{Jet2(1.0, c[0].dim()), s * s};
    });
    SmoothMap phi(polar, sphere, [profile](std::span<const Jet2> c) { return JetVector{profile(c[0]), c[1]}; });
    std::vector<Point> pts;
    for (double r : nodes) {
      for (double t : angles) pts.push_back({r, t});
    }
    return {phi, g, h, pts};
  }

  const Chart ball = Chart::euclidean(n, "B^" + std::to_string(n) + " minus origin");
  const Chart sn = Chart::ambient_sphere(n + 1);
  SmoothMap phi(ball, sn, [profile](std::span<const Jet2> c) {
    Jet2 r2(0.0, c[0].dim());
    for (const Jet2& v : c) r2 += v * v;
    const Jet2 r = sqrt(r2);
    const Jet2 rho = profile(r);
    const Jet2 scale = sin(rho) / r;
    JetVector out;
    for (const Jet2& v : c) out.push_back(scale * v);
    out.push_back(cos(rho));
    return out;
  });
  // Directions from a fixed generator; radii are rescaled so |x| hits the
  // node exactly (up to rounding absorbed by the lookup tolerance).
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  std::vector<Point> pts;
  for (int j = 0; j < grid; ++j) {
    Point d(static_cast<size_t>(n));
    double norm = 0.0;
    for (double& v : d) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double r : nodes) {
      Point x(d);
      for (double& v : x) v *= r / norm;
      pts.push_back(std::move(x));
    }
  }
  return {phi, Metric::euclidean(ball), Metric::euclidean(sn), pts};
}

ReductionVerification reconstruct_and_verify(const ReductionSolution& sol, int grid) {
  const ReconstructedMap rm = reconstruct(sol, grid);
  const size_t count = rm.grid.size();
  std::vector<double> lap(count), err(count);
  detail::parallel_for(count, [&](size_t i) {
    const Point& x = rm.grid[i];
    const MapReport rep = map_report(rm.map, rm.source_metric, rm.target_metric, x);
    lap[i] = rep.inf_laplacian_norm;
    double expected;
    if (sol.conserved_constant) {
      expected = *sol.conserved_constant;
    } else {
      double r2 = 0.0;
      if (sol.n == 2) {
        r2 = x[0] * x[0];
      } else {
        for (double v : x) r2 += v * v;
      }
      expected = (sol.n - 1) / r2;
    }
    err[i] = std::abs(rep.energy_density - expected);
  });
  ReductionVerification out;
  out.points = static_cast<int>(count);
  for (size_t i = 0; i < count; ++i) {
    out.max_inf_laplacian = std::max(out.max_inf_laplacian, lap[i]);
    out.max_energy_error = std::max(out.max_energy_error, err[i]);
  }
  out.passed = out.max_inf_laplacian < kReductionTolerance && out.max_energy_error < kReductionTolerance;
  return out;
}

void write_csv(const ReductionSolution& sol, std::ostream& out, int stride) {
  if (stride < 1) throw ArgumentError("CSV stride must be >= 1");
  out << "param,value,derivative,residual\n";
  const auto old_precision = out.precision(17);
  const size_t n = sol.samples.size();
  for (size_t i = 0; i < n; ++i) {
    if (i % static_cast<size_t>(stride) != 0 && i + 1 != n) continue;
    const ProfileSample& s = sol.samples[i];
    out << s.param << ',' << s.value << ',' << s.derivative << ',' << s.residual << '\n';
  }
  out.precision(old_precision);
}

}  // namespace infharm
