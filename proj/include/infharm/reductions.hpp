#pragma once

// ODE reductions of symmetric infinity harmonic maps into spheres:
// rotationally symmetric maps of the ball, and maps of the cylinder of the
// form (cos a(s), sin a(s) e^{ikt}).

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "infharm/geometry.hpp"

namespace infharm {

enum class ReductionKind { equator, ball_profile, cylinder_constant, cylinder_kink, cylinder_pendulum };

std::string reduction_kind_name(ReductionKind kind);

struct ProfileSample {
  double param = 0.0;   ///< r or s
  double value = 0.0;   ///< rho or alpha
  double derivative = 0.0;
  double second = 0.0;  ///< second derivative implied by the ODE
  double residual = 0.0;  ///< |conserved quantity - C|
};

struct ReductionSolution {
  ReductionKind kind = ReductionKind::cylinder_kink;
  std::vector<ProfileSample> samples;  ///< ordered as integrated
  /// C; absent for the equator map, whose energy (n-1)/r^2 is not constant.
  std::optional<double> conserved_constant;
  int n = 0;  ///< ball dimension (ball kinds)
  int k = 0;  ///< winding number (cylinder kinds)
  double step = 0.0;
  /// Parameter at which the square-root argument of the first-order ODE
  /// fell into the turning band and integration stopped.
  std::optional<double> turning_point;
  /// Period of a mod 2 pi (pendulum branch), if a return was observed.
  std::optional<double> period;

  double max_residual() const;
};

/// Fraction of C below which rho'^2 (or alpha'^2) counts as a turning point.
inline constexpr double kTurningBand = 1e-2;

/// Integrates rho'' (the derivative of rho'^2 + (n-1) sin^2(rho) / r^2 = C)
/// backwards from r = 1 with rho(1) = pi/2 and rho'(1) = sign * sqrt(C - (n-1)),
/// using classical RK4 with a fixed step, down to r0 > 0.
/// Throws InfeasibleConstantError when C < n - 1.
ReductionSolution solve_ball_profile(int n, double c, double r0, double step, int sign = 1);

/// The equator map: rho = pi/2 sampled on [r0, 1].
ReductionSolution equator_solution(int n, double r0, int count = 101);

/// Closed-form kink a(s) = 2 arctan(e^{ks + A}) - pi/2 on [s0, s1].
ReductionSolution cylinder_kink(int k, double a, double s0, double s1, double step);

/// Constant profile a = alpha.
ReductionSolution cylinder_constant(int k, double alpha, double s0, double s1, double step);

/// Integrates the pendulum theta'' + k^2 sin theta = 0 for theta = 2a with
/// a(0) = alpha0, a'(0) = sqrt(C - k^2 sin^2 alpha0), over [0, s_end].
/// Throws WrongRegimeError when C <= k^2.
ReductionSolution cylinder_pendulum(int k, double c, double alpha0, double s_end, double step);

/// Pendulum energy theta'^2 / 2 - k^2 cos theta along a pendulum solution.
std::vector<double> pendulum_energy(const ReductionSolution& sol);

struct ReductionVerification {
  int points = 0;
  double max_inf_laplacian = 0.0;  ///< max |inf Laplacian| of the rebuilt map
  double max_energy_error = 0.0;   ///< max |energy - C| (or vs (n-1)/r^2)
  bool passed = false;
};

inline constexpr double kReductionTolerance = 1e-6;

/// Rebuilds the full map from the profile samples and evaluates it on a
/// grid whose radial/axial coordinates are sample nodes:
///  - cylinder kinds: (s, t) -> (cos a, sin a cos kt, sin a sin kt) in R^3;
///  - ball kinds, n = 2: (r, theta) -> (rho(r), theta) between geodesic polar
///    charts; n > 2: x -> (sin rho x/|x|, cos rho) into the ambient sphere.
ReductionVerification reconstruct_and_verify(const ReductionSolution& sol, int grid = 50);

/// The reconstructed map with its source and target metrics.
struct ReconstructedMap {
  SmoothMap map;
  Metric source_metric;
  Metric target_metric;
  std::vector<Point> grid;
};
ReconstructedMap reconstruct(const ReductionSolution& sol, int grid = 50);

/// CSV with header param,value,derivative,residual. Every `stride`-th sample
/// plus the last one.
void write_csv(const ReductionSolution& sol, std::ostream& out, int stride = 1);

}  // namespace infharm
