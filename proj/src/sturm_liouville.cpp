#include "boussinesq/sturm_liouville.hpp"

#include <algorithm>
#include <array>

#include "boussinesq/taylor.hpp"

namespace boussinesq {

namespace {

struct SecondOrderRhs {
  ScalarSeries q;
  void operator()(double t, std::span<const double> y, std::span<double> dy) const {
    dy[0] = y[1];
    dy[1] = -q(Jet::variable(t)).value() * y[0];
    dy[2] = y[0];
  }
  void operator()(const Jet& t, std::span<const Jet> y, std::span<Jet> dy) const {
    dy[0] = y[1];
    dy[1] = -q(t) * y[0];
    dy[2] = y[0];
  }
};

}  // namespace

FundamentalPair::FundamentalPair(ScalarSeries q, DenseSolution first, DenseSolution second, double base)
    : q_(std::move(q)),
      first_(std::make_shared<const DenseSolution>(std::move(first))),
      second_(std::make_shared<const DenseSolution>(std::move(second))),
      base_(base) {}

Window FundamentalPair::window() const {
  const Window a = first_->window();
  const Window b = second_->window();
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Jet FundamentalPair::solution(int which, double t) const {
  const DenseSolution& s = which == 0 ? *first_ : *second_;
  const auto y = s.state(t);
  return taylor_state(SecondOrderRhs{q_}, t, y)[0];
}

Jet FundamentalPair::integral(int which, double t) const {
  const DenseSolution& s = which == 0 ? *first_ : *second_;
  const auto y = s.state(t);
  return taylor_state(SecondOrderRhs{q_}, t, y)[2];
}

double FundamentalPair::wronskian(double t) const {
  const auto a = first_->state(t);
  const auto b = second_->state(t);
  return a[0] * b[1] - b[0] * a[1];
}

FundamentalPair solve_sl(ScalarSeries q, Window window, const OdeTolerance& tol) {
  const SecondOrderRhs rhs{q};
  const OdeRhs f = as_ode_rhs(rhs);
  const std::array<double, 3> e1{1.0, 0.0, 0.0};
  const std::array<double, 3> e2{0.0, 1.0, 0.0};
  DenseSolution first = integrate_ivp(f, e1, window, tol);
  DenseSolution second = integrate_ivp(f, e2, window, tol);
  return FundamentalPair(std::move(q), std::move(first), std::move(second), window.lo);
}

}  // namespace boussinesq
