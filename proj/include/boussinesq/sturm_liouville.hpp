#pragma once

// Fundamental solutions of y'' + q(t) y = 0.

#include <functional>
#include <memory>
#include <optional>

#include "boussinesq/jet.hpp"
#include "boussinesq/ode.hpp"

namespace boussinesq {

using ScalarSeries = std::function<Jet(const Jet&)>;

/// Two solutions with (y, y') = (1, 0) and (0, 1) at the window start. Each
/// dense solution carries the state (y, y', running integral of y).
class FundamentalPair {
 public:
  FundamentalPair(ScalarSeries q, DenseSolution first, DenseSolution second, double base);

  const DenseSolution& first() const { return *first_; }
  const DenseSolution& second() const { return *second_; }
  double base_point() const { return base_; }
  Window window() const;

  /// Series in t of solution `which` (0 or 1).
  Jet solution(int which, double t) const;
  /// Series of the integral of solution `which` from the base point.
  Jet integral(int which, double t) const;
  double wronskian(double t) const;

 private:
  ScalarSeries q_;
  std::shared_ptr<const DenseSolution> first_;
  std::shared_ptr<const DenseSolution> second_;
  double base_;
};

/// Integrates both fundamental solutions over the window. Blow-up or step
/// collapse shortens window(); it is not an error.
FundamentalPair solve_sl(ScalarSeries q, Window window, const OdeTolerance& tol = OdeTolerance::of(1e-12, 1e-13));

}  // namespace boussinesq
