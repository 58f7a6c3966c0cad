#include "infharm/jet.hpp"

#include <cmath>
#include <sstream>

#include "infharm/error.hpp"

namespace infharm {

SingularPointError::SingularPointError(const std::string& what, std::vector<double> point)
    : Error([&] {
        if (point.empty()) return what;
        std::ostringstream os;
        os.precision(17);
        os << what << " at (";
        for (size_t i = 0; i < point.size(); ++i) os << (i ? ", " : "") << point[i];
        os << ")";
        return os.str();
      }()),
      reason_(what),
      point_(std::move(point)) {}

SingularPointError SingularPointError::at(std::vector<double> point) const {
  return SingularPointError(reason_, std::move(point));
}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

int common_dim(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw ArgumentError("jet dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

void check_dim(int dim) {
  if (dim < 0 || dim > kMaxJetDim) {
    throw ArgumentError("jet dimension " + std::to_string(dim) + " outside [0, " +
                        std::to_string(kMaxJetDim) + "]");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet1

Jet1::Jet1(double value, int dim) : dim_(dim), value_(value) { check_dim(dim); }

Jet1 Jet1::chain(const Jet1& a, double f0, double f1) {
  Jet1 r(f0, a.dim_);
  for (int i = 0; i < a.dim_; ++i) r.grad_[i] = f1 * a.grad_[i];
  return r;
}

Jet1 Jet1::operator-() const {
  Jet1 r = *this;
  r.value_ = -r.value_;
  for (int i = 0; i < dim_; ++i) r.grad_[i] = -r.grad_[i];
  return r;
}

Jet1& Jet1::operator+=(const Jet1& b) {
  dim_ = common_dim(dim_, b.dim_);
  value_ += b.value_;
  for (int i = 0; i < b.dim_; ++i) grad_[i] += b.grad_[i];
  return *this;
}

Jet1& Jet1::operator-=(const Jet1& b) {
  dim_ = common_dim(dim_, b.dim_);
  value_ -= b.value_;
  for (int i = 0; i < b.dim_; ++i) grad_[i] -= b.grad_[i];
  return *this;
}

Jet1& Jet1::operator*=(double s) {
  value_ *= s;
  for (int i = 0; i < dim_; ++i) grad_[i] *= s;
  return *this;
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
  Jet1 r(a.value_ * b.value_, common_dim(a.dim_, b.dim_));
  for (int i = 0; i < r.dim_; ++i) r.grad_[i] = a.value_ * b.grad(i) + b.value_ * a.grad(i);
  return r;
}

Jet1 reciprocal(const Jet1& a) {
  if (a.value() == 0.0) throw SingularPointError("division by zero");
  const double inv = 1.0 / a.value();
  return Jet1::chain(a, inv, -inv * inv);
}

Jet1 operator/(const Jet1& a, const Jet1& b) { return a * reciprocal(b); }

Jet1 sqrt(const Jet1& a) {
  if (!(a.value() > 0.0)) throw SingularPointError("sqrt of non-positive value");
  const double s = std::sqrt(a.value());
  return Jet1::chain(a, s, 0.5 / s);
}

Jet1 truncate(const Jet2& a) {
  Jet1 r(a.value(), a.dim());
  for (int i = 0; i < a.dim(); ++i) r.set_grad(i, a.grad(i));
  return r;
}

// ---------------------------------------------------------------------------
// Jet2

Jet2::Jet2(double value, int dim) : dim_(dim), value_(value) { check_dim(dim); }

Jet2 Jet2::variable(std::span<const double> point, int index) {
  if (index < 0 || index >= static_cast<int>(point.size())) {
    throw ArgumentError("lift index " + std::to_string(index) + " out of range for dimension " +
                        std::to_string(point.size()));
  }
  Jet2 r(point[index], static_cast<int>(point.size()));
  r.grad_[index] = 1.0;
  return r;
}

Jet2 lift(std::span<const double> point, int index) { return Jet2::variable(point, index); }

std::vector<Jet2> lift_point(std::span<const double> point) {
  std::vector<Jet2> out;
  out.reserve(point.size());
  for (int i = 0; i < static_cast<int>(point.size()); ++i) out.push_back(Jet2::variable(point, i));
  return out;
}

Jet2 Jet2::chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r(f0, a.dim_);
  for (int i = 0; i < a.dim_; ++i) r.grad_[i] = f1 * a.grad_[i];
  for (int i = 0; i < a.dim_; ++i) {
    for (int j = i; j < a.dim_; ++j) {
      r.set_hess(i, j, f2 * a.grad_[i] * a.grad_[j] + f1 * a.hess_[i * kMaxJetDim + j]);
    }
  }
  return r;
}

Jet2 Jet2::operator-() const {
  Jet2 r(-value_, dim_);
  for (int i = 0; i < dim_; ++i) {
    r.grad_[i] = -grad_[i];
    for (int j = 0; j < dim_; ++j) r.hess_[i * kMaxJetDim + j] = -hess_[i * kMaxJetDim + j];
  }
  return r;
}

Jet2& Jet2::operator+=(const Jet2& b) {
  dim_ = common_dim(dim_, b.dim_);
  value_ += b.value_;
  for (int i = 0; i < b.dim_; ++i) {
    grad_[i] += b.grad_[i];
    for (int j = 0; j < b.dim_; ++j) hess_[i * kMaxJetDim + j] += b.hess_[i * kMaxJetDim + j];
  }
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& b) {
  dim_ = common_dim(dim_, b.dim_);
  value_ -= b.value_;
  for (int i = 0; i < b.dim_; ++i) {
    grad_[i] -= b.grad_[i];
    for (int j = 0; j < b.dim_; ++j) hess_[i * kMaxJetDim + j] -= b.hess_[i * kMaxJetDim + j];
  }
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  value_ *= s;
  for (int i = 0; i < dim_; ++i) {
    grad_[i] *= s;
    for (int j = 0; j < dim_; ++j) hess_[i * kMaxJetDim + j] *= s;
  }
  return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.value_ * b.value_, common_dim(a.dim_, b.dim_));
  const int d = r.dim_;
  for (int i = 0; i < d; ++i) r.grad_[i] = a.value_ * b.grad(i) + b.value_ * a.grad(i);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double second = a.value_ * b.hess(i, j) + b.value_ * a.hess(i, j);
      const double cross = a.grad(i) * b.grad(j) + b.grad(i) * a.grad(j);
      r.set_hess(i, j, second + cross);
    }
  }
  return r;
}

Jet2 reciprocal(const Jet2& a) {
  const double v = a.value();
  if (v == 0.0) throw SingularPointError("division by zero");
  const double inv = 1.0 / v;
  return Jet2::chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::chain(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::chain(a, c, -s, -c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return Jet2::chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw SingularPointError("log of non-positive value");
  return Jet2::chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sqrt(const Jet2& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw SingularPointError("sqrt of non-positive value");
  const double s = std::sqrt(v);
  return Jet2::chain(a, s, 0.5 / s, -0.25 / (s * v));
}

Jet2 pow(const Jet2& a, double q) {
  const double v = a.value();
  if (q == 0.0) return Jet2(1.0, a.dim());
  if (q == 1.0) return a;
  const bool integral = std::floor(q) == q;
  if (!integral && !(v > 0.0)) throw SingularPointError("fractional power of non-positive value");
  if (integral && v == 0.0 && q < 2.0) throw SingularPointError("negative power of zero");
  const double f0 = std::pow(v, q);
  const double f1 = q * std::pow(v, q - 1.0);
  const double f2 = q * (q - 1.0) * std::pow(v, q - 2.0);
  return Jet2::chain(a, f0, f1, f2);
}

Jet2 square(const Jet2& a) { return a * a; }

Jet2 atan(const Jet2& a) {
  const double v = a.value();
  const double d = 1.0 / (1.0 + v * v);
  return Jet2::chain(a, std::atan(v), d, -2.0 * v * d * d);
}

Jet2 atan2(const Jet2& y, const Jet2& x) {
  const double yv = y.value(), xv = x.value();
  const double r2 = xv * xv + yv * yv;
  if (r2 == 0.0) throw SingularPointError("atan2 at the origin");
  // Partials of theta(y, x).
  const double ty = xv / r2, tx = -yv / r2;
  const double tyy = -2.0 * xv * yv / (r2 * r2);
  const double txx = 2.0 * xv * yv / (r2 * r2);
  const double txy = (yv * yv - xv * xv) / (r2 * r2);

  Jet2 r(std::atan2(yv, xv), std::max(y.dim(), x.dim()));
  if (y.dim() && x.dim() && y.dim() != x.dim()) throw ArgumentError("jet dimension mismatch in atan2");
  const int d = r.dim();
  for (int i = 0; i < d; ++i) r.set_grad(i, ty * y.grad(i) + tx * x.grad(i));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double outer = tyy * y.grad(i) * y.grad(j) + txx * x.grad(i) * x.grad(j) +
                           txy * (x.grad(i) * y.grad(j) + y.grad(i) * x.grad(j));
      r.set_hess(i, j, outer + ty * y.hess(i, j) + tx * x.hess(i, j));
    }
  }
  return r;
}

}  // namespace infharm
