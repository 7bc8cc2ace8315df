#include "boussinesq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boussinesq/errors.hpp"

namespace boussinesq {

namespace {

// weights[j][p]: coefficient of s^(p+1) in the integral from 0 to s of the
// Lagrange basis polynomial for node j/4 on [0, 1].
struct QuarticWeights {
  std::array<std::array<double, 5>, 5> c{};
  QuarticWeights() {
    for (int j = 0; j < 5; ++j) {
      std::array<double, 5> poly{};
      poly[0] = 1.0;
      int degree = 0;
      for (int k = 0; k < 5; ++k) {
        if (k == j) continue;
        // multiply by (4s - k) / (j - k)
        const double scale = 1.0 / (j - k);
        std::array<double, 5> next{};
        for (int p = 0; p <= degree; ++p) {
          next[p + 1] += 4.0 * poly[p] * scale;
          next[p] -= k * poly[p] * scale;
        }
        poly = next;
        ++degree;
      }
      for (int p = 0; p < 5; ++p) c[j][p] = poly[p] / (p + 1);
    }
  }
  double integral(const std::array<double, 5>& f, double s) const {
    double total = 0.0;
    for (int j = 0; j < 5; ++j) {
      double acc = 0.0;
      for (int p = 4; p >= 0; --p) acc = acc * s + c[j][p];
      total += f[j] * acc * s;
    }
    return total;
  }
};

const QuarticWeights& weights() {
  static const QuarticWeights w;
  return w;
}

double boole(const std::array<double, 5>& f, double width) {
  return width / 90.0 * (7.0 * f[0] + 32.0 * f[1] + 12.0 * f[2] + 32.0 * f[3] + 7.0 * f[4]);
}

}  // namespace

Antiderivative::Antiderivative(Integrand f, double t0, Window window, double gauge, QuadratureOptions opts)
    : f_(std::move(f)), t0_(t0), window_(window), gauge_(gauge), opts_(opts) {
  if (!(window.length() > 0.0)) throw Error(ErrorKind::InvalidParams, "antiderivative window is empty");
  if (!window.contains(t0)) throw Error(ErrorKind::InvalidParams, "antiderivative base point outside window");

  const double len = window.length();
  const int n0 = std::max(1, opts_.min_panels);
  for (int i = 0; i < n0; ++i) {
    const double a = window.lo + len * i / n0;
    const double b = i + 1 == n0 ? window.hi : window.lo + len * (i + 1) / n0;
    std::array<double, 5> v{};
    for (int k = 0; k < 5; ++k) {
      const double t = a + (b - a) * k / 4.0;
      v[k] = f_(t);
      if (!std::isfinite(v[k])) {
        throw Error(ErrorKind::NonFiniteIntegrand, "integrand not finite at t=" + std::to_string(t));
      }
    }
    const double whole = (b - a) / 6.0 * (v[0] + 4.0 * v[2] + v[4]);
    refine(a, b, v, whole, opts_.abs_tol / n0, 0);
  }
  double cum = 0.0;
  for (auto& p : panels_) {
    p.cumulative = cum;
    cum += boole(p.f, p.width);
  }
  offset_ = cumulative(t0_);
}

void Antiderivative::refine(double a, double b, const std::array<double, 5>& f, double whole, double tol,
                            int depth) {
  const double w = b - a;
  const double halves = w / 12.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
  const double allowed = 15.0 * std::max(tol, opts_.rel_tol * std::abs(halves));
  if (std::abs(halves - whole) <= allowed || depth >= opts_.max_depth) {
    panels_.push_back({a, w, f, 0.0});
    return;
  }
  const double m = 0.5 * (a + b);
  const double q1 = f_(a + 0.125 * w);
  const double q3 = f_(a + 0.375 * w);
  const double q5 = f_(a + 0.625 * w);
  const double q7 = f_(a + 0.875 * w);
  for (double q : {q1, q3, q5, q7}) {
    if (!std::isfinite(q)) throw Error(ErrorKind::NonFiniteIntegrand, "integrand not finite near t=" + std::to_string(m));
  }
  const std::array<double, 5> left{f[0], q1, f[1], q3, f[2]};
  const std::array<double, 5> right{f[2], q5, f[3], q7, f[4]};
  refine(a, m, left, w / 12.0 * (f[0] + 4.0 * f[1] + f[2]), 0.5 * tol, depth + 1);
  refine(m, b, right, w / 12.0 * (f[2] + 4.0 * f[3] + f[4]), 0.5 * tol, depth + 1);
}

double Antiderivative::cumulative(double t) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), t, [](double x, const Panel& p) { return x < p.lo; });
  const Panel& p = it == panels_.begin() ? panels_.front() : *std::prev(it);
  const double s = std::clamp((t - p.lo) / p.width, 0.0, 1.0);
  return p.cumulative + p.width * weights().integral(p.f, s);
}

double Antiderivative::value(double t) const {
  const double slack = 1e-12 * std::max(1.0, window_.length());
  if (t < window_.lo - slack || t > window_.hi + slack) {
    throw Error(ErrorKind::IntegrationWindowExceeded, "t=" + std::to_string(t) + " outside quadrature window [" +
                                                          std::to_string(window_.lo) + ", " +
                                                          std::to_string(window_.hi) + "]");
  }
  return cumulative(std::clamp(t, window_.lo, window_.hi)) - offset_ + gauge_;
}

}  // namespace boussinesq
