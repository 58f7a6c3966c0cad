#pragma once

// Forward-mode automatic differentiation to second order.
//
// A Jet2 carries the value, gradient and dense Hessian of a scalar with
// respect to `dim` independent variables. Arithmetic and elementary functions
// propagate the second-order Taylor data exactly. Jets of dimension 0 are
// constants and combine with jets of any dimension.

#include <array>
#include <span>
#include <vector>

namespace infharm {

inline constexpr int kMaxJetDim = 8;

class Jet2;

/// Value and gradient only. Used where a second derivative would need
/// third-order information (e.g. the gradient of an energy density).
class Jet1 {
 public:
  Jet1() = default;
  Jet1(double value, int dim = 0);  // NOLINT: constants convert implicitly

  int dim() const { return dim_; }
  double value() const { return value_; }
  double grad(int i) const { return i < dim_ ? grad_[i] : 0.0; }
  std::span<const double> gradient() const { return {grad_.data(), static_cast<size_t>(dim_)}; }
  void set_grad(int i, double v) { grad_[i] = v; }

  /// Chain rule: f(a) with f(a.value) = f0 and f'(a.value) = f1.
  static Jet1 chain(const Jet1& a, double f0, double f1);

  Jet1 operator-() const;
  Jet1& operator+=(const Jet1& b);
  Jet1& operator-=(const Jet1& b);
  Jet1& operator*=(double s);

  friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
  friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
  friend Jet1 operator*(const Jet1& a, const Jet1& b);
  friend Jet1 operator/(const Jet1& a, const Jet1& b);
  friend Jet1 operator*(Jet1 a, double s) { return a *= s; }
  friend Jet1 operator*(double s, Jet1 a) { return a *= s; }

 private:
  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxJetDim> grad_{};
};

class Jet2 {
 public:
  Jet2() = default;
  Jet2(double value, int dim = 0);  // NOLINT: constants convert implicitly

  /// The coordinate function x_index seeded at `point`.
  static Jet2 variable(std::span<const double> point, int index);

  int dim() const { return dim_; }
  double value() const { return value_; }
  double grad(int i) const { return i < dim_ ? grad_[i] : 0.0; }
  double hess(int i, int j) const { return (i < dim_ && j < dim_) ? hess_[i * kMaxJetDim + j] : 0.0; }
  std::span<const double> gradient() const { return {grad_.data(), static_cast<size_t>(dim_)}; }

  void set_grad(int i, double v) { grad_[i] = v; }
  /// Writes both (i,j) and (j,i).
  void set_hess(int i, int j, double v) {
    hess_[i * kMaxJetDim + j] = v;
    hess_[j * kMaxJetDim + i] = v;
  }

  /// Chain rule: f(a) given f, f', f'' at a.value().
  static Jet2 chain(const Jet2& a, double f0, double f1, double f2);

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& b);
  Jet2& operator-=(const Jet2& b);
  Jet2& operator*=(double s);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator+(Jet2 a, double s) { a.value_ += s; return a; }
  friend Jet2 operator+(double s, Jet2 a) { a.value_ += s; return a; }
  friend Jet2 operator-(Jet2 a, double s) { a.value_ -= s; return a; }
  friend Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }
  friend Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }

 private:
  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxJetDim> grad_{};
  std::array<double, kMaxJetDim * kMaxJetDim> hess_{};
};

/// Coordinate function x_index at `point` (value point[index], gradient
/// e_index, Hessian 0). Throws ArgumentError for an out-of-range index.
Jet2 lift(std::span<const double> point, int index);
/// All coordinate functions at `point`.
std::vector<Jet2> lift_point(std::span<const double> point);

/// Drops the Hessian.
Jet1 truncate(const Jet2& a);

Jet2 reciprocal(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
/// a^q for a constant exponent. Non-integer q needs a > 0.
Jet2 pow(const Jet2& a, double q);
Jet2 atan(const Jet2& a);
/// Angle of (x, y); singular at the origin.
Jet2 atan2(const Jet2& y, const Jet2& x);
Jet2 square(const Jet2& a);

Jet1 reciprocal(const Jet1& a);
Jet1 sqrt(const Jet1& a);

}  // namespace infharm
