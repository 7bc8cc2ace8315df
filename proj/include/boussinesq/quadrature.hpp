#pragma once

// Running integrals of smooth scalar integrands over a fixed window.

#include <array>
#include <functional>
#include <vector>

#include "boussinesq/jet.hpp"
#include "boussinesq/types.hpp"

namespace boussinesq {

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_depth = 40;
  int min_panels = 32;
};

/// t -> gauge + integral of f from t0 to t, for t in the window.
///
/// The window is split by adaptive Simpson into panels; each panel keeps its
/// five Simpson nodes so any query is answered from the cached cumulative
/// value plus the integral of the quartic through those nodes, without new
/// integrand evaluations.
class Antiderivative {
 public:
  using Integrand = std::function<double(double)>;

  Antiderivative(Integrand f, double t0, Window window, double gauge = 0.0, QuadratureOptions opts = {});

  double operator()(double t) const { return value(t); }
  double value(double t) const;

  /// Series of the antiderivative at t, given the series of the integrand at t.
  Jet lift(double t, const Jet& integrand) const { return integrand.integrate(value(t)); }

  double integrand(double t) const { return f_(t); }
  double base_point() const { return t0_; }
  double gauge() const { return gauge_; }
  Window window() const { return window_; }
  std::size_t panels() const { return panels_.size(); }

 private:
  struct Panel {
    double lo = 0.0;
    double width = 0.0;
    std::array<double, 5> f{};
    double cumulative = 0.0;  // integral from window.lo to lo
  };

  void refine(double a, double b, const std::array<double, 5>& f, double whole, double tol, int depth);
  double cumulative(double t) const;

  Integrand f_;
  double t0_;
  Window window_;
  double gauge_;
  QuadratureOptions opts_;
  std::vector<Panel> panels_;
  double offset_ = 0.0;  // cumulative(t0)
};

}  // namespace boussinesq
