#pragma once

// Taylor-mode lifting of ODE states.
//
// Right-hand sides are written once as generic callables
//   rhs(const S& t, std::span<const S> y, std::span<S> dy)
// and instantiated both for double (integration) and for Jet (exact time
// derivatives of the solution at an interpolated state).

#include <span>
#include <vector>

#include "boussinesq/jet.hpp"
#include "boussinesq/ode.hpp"

namespace boussinesq {

/// Series of the solution through (t, y0): coefficient k+1 of y is
/// coefficient k of rhs(y) divided by k+1, built one order at a time.
template <class Rhs>
std::vector<Jet> taylor_state(const Rhs& rhs, double t, std::span<const double> y0) {
  const std::size_t n = y0.size();
  std::vector<Jet> y(n);
  std::vector<Jet> f(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = Jet(y0[i]);
  const Jet time = Jet::variable(t);
  for (int k = 0; k < Jet::kOrder; ++k) {
    rhs(time, std::span<const Jet>(y), std::span<Jet>(f));
    for (std::size_t i = 0; i < n; ++i) y[i].coefficient(k + 1) = f[i].coefficient(k) / (k + 1);
  }
  return y;
}

template <class Rhs>
OdeRhs as_ode_rhs(Rhs rhs) {
  return [rhs](double t, std::span<const double> y, std::span<double> dy) { rhs(t, y, dy); };
}

}  // namespace boussinesq
