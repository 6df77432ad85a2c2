#pragma once

// Second-order forward-mode scalar.
//
// A Dual2 carries a value together with its gradient and Hessian with
// respect to a fixed set of active variables.  Arithmetic propagates both
// derivative orders exactly (up to rounding), so a function built from
// Dual2 operations yields f, grad f and Hess f in a single pass.
//
//   auto x = Dual2<double>::variable(1.0, 0, 2);
//   auto y = Dual2<double>::variable(2.0, 1, 2);
//   auto r = x * x + y * y;   // r.value() == 5, r.gradient() == (2, 4)

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>

namespace kenmotsu {

template <typename Scalar>
class Dual2 {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Dual2() = default;

  Dual2(Scalar value, Vector gradient, Matrix hessian)
      : value_(value), gradient_(std::move(gradient)), hessian_(std::move(hessian)) {}

  static Dual2 constant(Scalar value, Eigen::Index active) {
    return Dual2(value, Vector::Zero(active), Matrix::Zero(active, active));
  }

  static Dual2 variable(Scalar value, Eigen::Index slot, Eigen::Index active) {
    Dual2 d = constant(value, active);
    d.gradient_(slot) = Scalar(1);
    return d;
  }

  Scalar value() const { return value_; }
  const Vector& gradient() const { return gradient_; }
  const Matrix& hessian() const { return hessian_; }
  Eigen::Index active() const { return gradient_.size(); }

  // Apply a scalar function given its value and first two derivatives at value().
  Dual2 chain(Scalar f, Scalar df, Scalar d2f) const {
    return Dual2(f, df * gradient_,
                 df * hessian_ + d2f * (gradient_ * gradient_.transpose()));
  }

  Dual2 operator-() const { return Dual2(-value_, -gradient_, -hessian_); }

  Dual2& operator+=(const Dual2& o) {
    value_ += o.value_;
    gradient_ += o.gradient_;
    hessian_ += o.hessian_;
    return *this;
  }
  Dual2& operator-=(const Dual2& o) {
    value_ -= o.value_;
    gradient_ -= o.gradient_;
    hessian_ -= o.hessian_;
    return *this;
  }
  Dual2& operator*=(const Dual2& o) {
    hessian_ = value_ * o.hessian_ + o.value_ * hessian_ +
               gradient_ * o.gradient_.transpose() + o.gradient_ * gradient_.transpose();
    gradient_ = value_ * o.gradient_ + o.value_ * gradient_;
    value_ *= o.value_;
    return *this;
  }
  // Direct quotient rule, so the value slot is computed as a / b exactly.
  Dual2& operator/=(const Dual2& o) {
    const Scalar q = value_ / o.value_;
    Vector dq = (gradient_ - q * o.gradient_) / o.value_;
    hessian_ = (hessian_ - q * o.hessian_ - dq * o.gradient_.transpose() -
                o.gradient_ * dq.transpose()) /
               o.value_;
    gradient_ = std::move(dq);
    value_ = q;
    return *this;
  }

  Dual2& operator+=(Scalar s) {
    value_ += s;
    return *this;
  }
  Dual2& operator-=(Scalar s) {
    value_ -= s;
    return *this;
  }
  Dual2& operator*=(Scalar s) {
    value_ *= s;
    gradient_ *= s;
    hessian_ *= s;
    return *this;
  }
  Dual2& operator/=(Scalar s) { return *this *= Scalar(1) / s; }

  Dual2 reciprocal() const {
    const Scalar r = Scalar(1) / value_;
    return chain(r, -r * r, Scalar(2) * r * r * r);
  }

 private:
  Scalar value_{};
  Vector gradient_;
  Matrix hessian_;
};

template <typename S> Dual2<S> operator+(Dual2<S> a, const Dual2<S>& b) { return a += b; }
template <typename S> Dual2<S> operator-(Dual2<S> a, const Dual2<S>& b) { return a -= b; }
template <typename S> Dual2<S> operator*(Dual2<S> a, const Dual2<S>& b) { return a *= b; }
template <typename S> Dual2<S> operator/(Dual2<S> a, const Dual2<S>& b) { return a /= b; }

template <typename S> Dual2<S> operator+(Dual2<S> a, S s) { return a += s; }
template <typename S> Dual2<S> operator+(S s, Dual2<S> a) { return a += s; }
template <typename S> Dual2<S> operator-(Dual2<S> a, S s) { return a -= s; }
template <typename S> Dual2<S> operator-(S s, const Dual2<S>& a) { return -a + s; }
template <typename S> Dual2<S> operator*(Dual2<S> a, S s) { return a *= s; }
template <typename S> Dual2<S> operator*(S s, Dual2<S> a) { return a *= s; }
template <typename S> Dual2<S> operator/(Dual2<S> a, S s) { return a /= s; }
template <typename S> Dual2<S> operator/(S s, const Dual2<S>& a) { return a.reciprocal() * s; }

template <typename S>
Dual2<S> sin(const Dual2<S>& a) {
  using std::cos;
  using std::sin;
  const S s = sin(a.value());
  return a.chain(s, cos(a.value()), -s);
}

template <typename S>
Dual2<S> cos(const Dual2<S>& a) {
  using std::cos;
  using std::sin;
  const S c = cos(a.value());
  return a.chain(c, -sin(a.value()), -c);
}

template <typename S>
Dual2<S> tan(const Dual2<S>& a) {
  using std::tan;
  const S t = tan(a.value());
  const S sec2 = S(1) + t * t;
  return a.chain(t, sec2, S(2) * t * sec2);
}

template <typename S>
Dual2<S> exp(const Dual2<S>& a) {
  using std::exp;
  const S e = exp(a.value());
  return a.chain(e, e, e);
}

template <typename S>
Dual2<S> log(const Dual2<S>& a) {
  using std::log;
  const S r = S(1) / a.value();
  return a.chain(log(a.value()), r, -r * r);
}

template <typename S>
Dual2<S> sqrt(const Dual2<S>& a) {
  using std::sqrt;
  const S s = sqrt(a.value());
  const S d = S(0.5) / s;
  return a.chain(s, d, -d / (S(2) * a.value()));
}

// Integer power by repeated multiplication (binary exponentiation).
template <typename S>
Dual2<S> powi(const Dual2<S>& a, int n) {
  if (n < 0) return powi(a, -n).reciprocal();
  Dual2<S> result = Dual2<S>::constant(S(1), a.active());
  Dual2<S> base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

inline double powi(double a, int n) {
  if (n < 0) return 1.0 / powi(a, -n);
  double result = 1.0;
  double base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

}  // namespace kenmotsu
