#pragma once

// Truncated univariate Taylor arithmetic.
//
// A Jet stores normalized Taylor coefficients c[k] = f^(k)(t0) / k! of a
// scalar function around a base point, up to kOrder. All arithmetic is exact
// on truncated series, so a closed-form expression evaluated on
// Jet::variable(t) yields its value and first kOrder derivatives without
// finite differences.
//
// Coefficients that are not known (for example after differentiate()) are
// set to NaN so that an insufficient order shows up in results instead of
// silently producing zeros.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace boussinesq {

class Jet {
 public:
  static constexpr int kOrder = 5;
  static constexpr int kSize = kOrder + 1;

  constexpr Jet() : c_{} {}
  constexpr Jet(double value) : c_{} { c_[0] = value; }  // NOLINT: implicit by design of the algebra

  static Jet variable(double t) {
    Jet j(t);
    j.c_[1] = 1.0;
    return j;
  }

  static Jet from_coefficients(const std::array<double, kSize>& c) {
    Jet j;
    j.c_ = c;
    return j;
  }

  double value() const { return c_[0]; }
  double coefficient(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& coefficient(int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::array<double, kSize>& coefficients() const { return c_; }

  /// k-th derivative at the base point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[static_cast<std::size_t>(k)] * f;
  }

  /// Series of the time derivative; the top coefficient becomes unknown.
  Jet differentiate() const {
    Jet d;
    for (int k = 0; k < kOrder; ++k) d.c_[k] = (k + 1) * c_[k + 1];
    d.c_[kOrder] = std::numeric_limits<double>::quiet_NaN();
    return d;
  }

  /// Series of an antiderivative whose value at the base point is `value`.
  Jet integrate(double value) const {
    Jet r;
    r.c_[0] = value;
    for (int k = 1; k <= kOrder; ++k) r.c_[k] = c_[k - 1] / k;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet q;
    for (int k = 0; k < kSize; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet exp(const Jet& a) {
    Jet e;
    e.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / k;
    }
    return e;
  }

  friend Jet log(const Jet& a) {
    Jet l;
    l.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 1; j < k; ++j) s += j * l.c_[j] * a.c_[k - j];
      l.c_[k] = (a.c_[k] - s / k) / a.c_[0];
    }
    return l;
  }

  // sin and cos share one recurrence.
  friend void sincos(const Jet& a, Jet& s, Jet& c) {
    s = Jet();
    c = Jet();
    s.c_[0] = std::sin(a.c_[0]);
    c.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double ss = 0.0;
      double cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc += j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = -cc / k;
    }
  }
  friend Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
  }
  friend Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
  }

  /// a^p for real p; requires a(t0) > 0 unless p is a non-negative integer.
  friend Jet pow(const Jet& a, double p) {
    Jet b;
    b.c_[0] = std::pow(a.c_[0], p);
    for (int k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a.c_[j] * b.c_[k - j];
      b.c_[k] = s / (k * a.c_[0]);
    }
    return b;
  }
  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

  /// Real cube root, valid for either sign of a(t0) != 0.
  friend Jet cbrt(const Jet& a) {
    if (a.c_[0] < 0.0) return -pow(-a, 1.0 / 3.0);
    return pow(a, 1.0 / 3.0);
  }

  /// |a| as a series: the branch is fixed by the sign at the base point.
  friend Jet abs(const Jet& a) { return a.c_[0] < 0.0 ? -a : a; }

  friend Jet sinh(const Jet& a) { return (exp(a) - exp(-a)) * 0.5; }
  friend Jet cosh(const Jet& a) { return (exp(a) + exp(-a)) * 0.5; }

 private:
  std::array<double, kSize> c_;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace boussinesq
