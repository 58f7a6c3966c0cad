#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "infharm/error.hpp"
#include "infharm/reductions.hpp"

using namespace infharm;

namespace {

constexpr double kPi = std::numbers::pi;

double ball_invariant(const ProfileSample& s, int n) {
  const double sr = std::sin(s.value) / s.param;
  return s.derivative * s.derivative + (n - 1) * sr * sr;
}

double kink_value(int k, double a, double s) { return 2 * std::atan(std::exp(k * s + a)) - kPi / 2; }

}  // namespace

TEST(BallProfile, ConservedQuantityAlongSolution) {
  // C = 2 reaches a turning point before r = 0.5; C = 4 runs through.
  for (double c : {2.0, 4.0}) {
    const ReductionSolution sol = solve_ball_profile(2, c, 0.5, 1e-4);
    ASSERT_GT(sol.samples.size(), 10u);
    EXPECT_DOUBLE_EQ(sol.samples.front().param, 1.0);
    EXPECT_DOUBLE_EQ(sol.samples.front().value, kPi / 2);
    for (const ProfileSample& s : sol.samples) ASSERT_LT(std::abs(ball_invariant(s, 2) - c), 1e-8) << s.param;
    EXPECT_LT(sol.max_residual(), 1e-8);
  }
  const ReductionSolution full = solve_ball_profile(2, 4.0, 0.5, 1e-4);
  EXPECT_FALSE(full.turning_point);
  EXPECT_DOUBLE_EQ(full.samples.back().param, 0.5);
  const ReductionSolution turn = solve_ball_profile(2, 2.0, 0.5, 1e-4);
  ASSERT_TRUE(turn.turning_point);
  EXPECT_GT(*turn.turning_point, 0.5);
}

TEST(BallProfile, HalvedStepAgrees) {
  const ReductionSolution a = solve_ball_profile(2, 4.0, 0.5, 2e-4);
  const ReductionSolution b = solve_ball_profile(2, 4.0, 0.5, 1e-4);
  double worst = 0.0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    const ProfileSample& s = a.samples[i];
    const ProfileSample& t = b.samples[2 * i];
    ASSERT_NEAR(s.param, t.param, 1e-12);
    worst = std::max(worst, std::abs(s.value - t.value));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(BallProfile, HigherDimension) {
  const ReductionSolution sol = solve_ball_profile(3, 5.0, 0.4, 1e-4);
  for (const ProfileSample& s : sol.samples) ASSERT_LT(std::abs(ball_invariant(s, 3) - 5.0), 1e-8);
}

TEST(BallProfile, InfeasibleConstant) {
  EXPECT_THROW(solve_ball_profile(2, 0.5, 0.5, 1e-4), InfeasibleConstantError);
  EXPECT_THROW(solve_ball_profile(4, 2.9, 0.5, 1e-4), InfeasibleConstantError);
}

TEST(BallProfile, BadArguments) {
  EXPECT_THROW(solve_ball_profile(2, 3.0, 0.0, 1e-4), ArgumentError);
  EXPECT_THROW(solve_ball_profile(2, 3.0, 0.5, -1e-4), ArgumentError);
}

TEST(Equator, HasNoConservedConstant) {
  const ReductionSolution sol = equator_solution(2, 0.5);
  EXPECT_FALSE(sol.conserved_constant);
  for (const ProfileSample& s : sol.samples) EXPECT_DOUBLE_EQ(s.value, kPi / 2);
  // (n-1)/r^2 sin^2(rho) varies with r.
  EXPECT_NE(ball_invariant(sol.samples.front(), 2), ball_invariant(sol.samples.back(), 2));
}

TEST(Kink, UnitWindingAtOrigin) {
  const ReductionSolution sol = cylinder_kink(1, 0.0, -1.0, 1.0, 0.5);
  const ProfileSample& s = sol.samples[2];
  ASSERT_DOUBLE_EQ(s.param, 0.0);
  EXPECT_DOUBLE_EQ(s.value, 0.0);
  EXPECT_DOUBLE_EQ(s.derivative, 1.0);
  ASSERT_TRUE(sol.conserved_constant);
  EXPECT_DOUBLE_EQ(*sol.conserved_constant, 1.0);
}

TEST(Kink, ApproachesEquatorAtInfinity) {
  const ReductionSolution sol = cylinder_kink(2, 0.0, 0.0, 20.0, 0.5);
  EXPECT_NEAR(sol.samples.back().value, kPi / 2, 1e-12);
  for (size_t i = 1; i < sol.samples.size(); ++i) EXPECT_GE(sol.samples[i].value, sol.samples[i - 1].value);
}

TEST(Kink, InvariantHoldsToRounding) {
  const ReductionSolution sol = cylinder_kink(1, 0.0, -5.0, 5.0, 1e-2);
  EXPECT_GE(sol.samples.size(), 1000u);
  for (const ProfileSample& s : sol.samples) {
    const double sa = std::sin(s.value);
    ASSERT_LT(std::abs(s.derivative * s.derivative + sa * sa - 1.0), 1e-12);
  }
}

TEST(Pendulum, ConservedAlongTrajectory) {
  const ReductionSolution sol = cylinder_pendulum(1, 2.0, 0.0, 20.0, 1e-3);
  EXPECT_NEAR(sol.samples.front().derivative, std::sqrt(2.0), 1e-15);
  for (const ProfileSample& s : sol.samples) {
    const double sa = std::sin(s.value);
    ASSERT_LT(std::abs(s.derivative * s.derivative + sa * sa - 2.0), 1e-7);
  }
  const ReductionSolution fine = cylinder_pendulum(1, 2.0, 0.0, 20.0, 5e-4);
  double worst = 0.0;
  for (size_t i = 0; i < sol.samples.size(); ++i) {
    worst = std::max(worst, std::abs(sol.samples[i].value - fine.samples[2 * i].value));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Pendulum, StepOneEMinusFourResidual) {
  const ReductionSolution sol = cylinder_pendulum(2, 9.0, 0.3, 10.0, 1e-4);
  EXPECT_LT(sol.max_residual(), 1e-8);
}

TEST(Pendulum, BoundaryIsWrongRegime) {
  try {
    cylinder_pendulum(1, 1.0, 0.0, 10.0, 1e-3);
    FAIL() << "expected WrongRegimeError";
  } catch (const WrongRegimeError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("kink"), std::string::npos);
    EXPECT_NE(m.find("constant"), std::string::npos);
  }
  EXPECT_THROW(cylinder_pendulum(2, 3.0, 0.0, 10.0, 1e-3), WrongRegimeError);
}

TEST(Pendulum, PeriodAndEnergyOverTenPeriods) {
  const ReductionSolution first = cylinder_pendulum(1, 2.0, 0.0, 20.0, 1e-3);
  ASSERT_TRUE(first.period);
  const double t = *first.period;
  const ReductionSolution sol = cylinder_pendulum(1, 2.0, 0.0, 10.0 * t + 0.01, 1e-3);
  const std::vector<double> e = pendulum_energy(sol);
  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  EXPECT_LT(*hi - *lo, 1e-8);
  // theta'^2/2 - cos(theta) at theta = 0, theta' = 2 sqrt(2).
  EXPECT_NEAR(e.front(), 3.0, 1e-14);
}

TEST(Pendulum, Rk4DriftIsFourthOrder) {
  const double coarse = cylinder_pendulum(1, 2.0, 0.0, 40.0, 0.2).max_residual();
  const double fine = cylinder_pendulum(1, 2.0, 0.0, 40.0, 0.05).max_residual();
  EXPECT_GE(coarse / fine, 200.0) << coarse << " " << fine;
}

TEST(Pendulum, TracksKinkNearBoundary) {
  const int k = 1;
  const ReductionSolution p = cylinder_pendulum(k, k * k * (1 + 1e-4), 0.0, 1.0 / k + 1e-3, 1e-3);
  double worst = 0.0;
  for (const ProfileSample& s : p.samples) {
    if (s.param > 1.0 / k) break;
    worst = std::max(worst, std::abs(s.value - kink_value(k, 0.0, s.param)));
  }
  EXPECT_LT(worst, 0.01);
}

TEST(Verify, KinkOnCylinderGrid) {
  const ReductionVerification v = reconstruct_and_verify(cylinder_kink(1, 0.0, -3.0, 3.0, 1e-3), 50);
  EXPECT_TRUE(v.passed);
  EXPECT_EQ(v.points, 2500);
  EXPECT_LT(v.max_inf_laplacian, 1e-6);
  EXPECT_LT(v.max_energy_error, 1e-6);
}

TEST(Verify, Pendulum) {
  const ReductionVerification v = reconstruct_and_verify(cylinder_pendulum(1, 2.0, 0.0, 10.0, 1e-3), 30);
  EXPECT_TRUE(v.passed);
  EXPECT_LT(v.max_inf_laplacian, 1e-6);
  EXPECT_LT(v.max_energy_error, 1e-6);
}

TEST(Verify, ConstantBranchEnergy) {
  const ReductionSolution sol = cylinder_constant(2, kPi / 3, -1.0, 1.0, 1e-2);
  ASSERT_TRUE(sol.conserved_constant);
  EXPECT_NEAR(*sol.conserved_constant, 3.0, 1e-14);
  const ReductionVerification v = reconstruct_and_verify(sol, 20);
  EXPECT_TRUE(v.passed);
  EXPECT_LT(v.max_inf_laplacian, 1e-12);
}

TEST(Verify, EquatorTwoAndThreeDimensions) {
  for (int n : {2, 3}) {
    const ReductionVerification v = reconstruct_and_verify(equator_solution(n, 0.5), 20);
    EXPECT_TRUE(v.passed) << n;
    EXPECT_LT(v.max_inf_laplacian, 1e-6) << n;
    EXPECT_LT(v.max_energy_error, 1e-6) << n;
  }
}

TEST(Verify, BallProfiles) {
  const ReductionVerification v2 = reconstruct_and_verify(solve_ball_profile(2, 4.0, 0.5, 1e-4), 20);
  EXPECT_TRUE(v2.passed);
  const ReductionVerification v3 = reconstruct_and_verify(solve_ball_profile(3, 5.0, 0.5, 1e-4), 6);
  EXPECT_TRUE(v3.passed);
  EXPECT_LT(v3.max_energy_error, 1e-6);
}

TEST(Reconstruct, OffNodeEvaluationIsRefused) {
  const ReductionSolution sol = cylinder_kink(1, 0.0, -1.0, 1.0, 0.1);
  const ReconstructedMap r = reconstruct(sol, 5);
  ASSERT_FALSE(r.grid.empty());
  EXPECT_NO_THROW(r.map.evaluate(r.grid.front()));
  const std::vector<double> off{0.05, 0.3};
  EXPECT_THROW(r.map.evaluate(off), ArgumentError);
}

TEST(Csv, HeaderStrideAndLastRow) {
  const ReductionSolution sol = cylinder_kink(1, 0.0, 0.0, 1.0, 0.1);
  std::ostringstream out;
  write_csv(sol, out, 3);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0], "param,value,derivative,residual");
  // 11 samples: rows 0, 3, 6, 9 and the last.
  EXPECT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines.back().substr(0, 1), "1");
  EXPECT_EQ(reduction_kind_name(sol.kind), "cylinder_kink");
}
