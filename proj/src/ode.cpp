#include "boussinesq/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boussinesq/errors.hpp"

namespace boussinesq {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double scaled_norm(std::span<const double> v, std::span<const double> y, const OdeTolerance& tol) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = tol.abs + tol.rel * std::abs(y[i]);
    s += (v[i] / sc) * (v[i] / sc);
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::BlowUp: return "blowup";
    case EventKind::Escape: return "escape";
    case EventKind::SignChange: return "sign_change";
    case EventKind::StepCollapse: return "step_collapse";
  }
  return "unknown";
}

std::optional<double> DenseSolution::blowup_time() const {
  for (const auto& e : events_) {
    if (e.kind != EventKind::SignChange) return e.time;
  }
  return std::nullopt;
}

const DenseSolution::Step& DenseSolution::locate(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t_end_ - t0_));
  if (steps_.empty() || t < t0_ - slack || t > t_end_ + slack) {
    throw Error(ErrorKind::IntegrationWindowExceeded,
                "t=" + std::to_string(t) + " outside [" + std::to_string(t0_) + ", " + std::to_string(t_end_) + "]");
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t, [](double x, const Step& s) { return x < s.t; });
  if (it == steps_.begin()) return steps_.front();
  return *std::prev(it);
}

void DenseSolution::state(double t, std::span<double> out) const {
  if (steps_.empty()) {
    if (std::abs(t - t0_) > 1e-12) throw Error(ErrorKind::IntegrationWindowExceeded, "empty solution");
    std::copy(y0_.begin(), y0_.end(), out.begin());
    return;
  }
  const Step& s = locate(t);
  const double th = (t - s.t) / s.h;
  const double th1 = 1.0 - th;
  for (int i = 0; i < dim_; ++i) {
    out[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
  }
}

std::vector<double> DenseSolution::state(double t) const {
  std::vector<double> y(static_cast<std::size_t>(dim_));
  state(t, y);
  return y;
}

std::vector<double> DenseSolution::derivative(double t) const {
  std::vector<double> y = state(t);
  std::vector<double> dy(y.size());
  rhs_(t, y, dy);
  return dy;
}

double DenseSolution::maximum_abs(int component) const { return max_abs_.at(static_cast<std::size_t>(component)); }

DenseSolution integrate_ivp(const OdeRhs& rhs, std::span<const double> y0, Window window, const OdeTolerance& tol,
                            const std::vector<EventRule>& events) {
  DenseSolution sol;
  sol.rhs_ = rhs;
  sol.dim_ = static_cast<int>(y0.size());
  sol.t0_ = window.lo;
  sol.t_end_ = window.lo;
  sol.y0_.assign(y0.begin(), y0.end());
  sol.max_abs_.resize(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) sol.max_abs_[i] = std::abs(y0[i]);

  const std::size_t n = y0.size();
  const double span = window.length();
  if (span <= 0.0) return sol;

  std::vector<double> y(y0.begin(), y0.end()), ynew(n), ytmp(n), err(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  double t = window.lo;
  rhs(t, y, k1);
  if (!all_finite(k1)) throw Error(ErrorKind::InvalidParams, "right-hand side not finite at initial state");

  auto event_value = [](const EventRule& e, double yc) {
    switch (e.kind) {
      case EventKind::BlowUp: return std::abs(yc) - e.threshold;
      case EventKind::Escape: return e.threshold - std::abs(yc);
      default: return yc - e.threshold;
    }
  };

  double h;
  if (tol.fixed_step) {
    h = *tol.fixed_step;
  } else {
    const double dn0 = scaled_norm(y, y, tol);
    const double dn1 = scaled_norm(k1, y, tol);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    rhs(t + h0, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
    const double dn2 = all_finite(k2) ? scaled_norm(err, y, tol) : 1e10;
    const double dmax = std::max(dn1, dn2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  if (tol.max_step > 0.0) h = std::min(h, tol.max_step);
  const double h_min = 1e-12 * span;

  long count = 0;
  bool halted = false;
  while (t < window.hi && !halted) {
    if (++count > tol.max_steps) {
      sol.events_.push_back({t, EventKind::StepCollapse, -1});
      halted = true;
      break;
    }
    bool last = false;
    if (t + h >= window.hi) {
      h = window.hi - t;
      last = true;
    }
    if (h < h_min && !last) {
      sol.events_.push_back({t, EventKind::StepCollapse, -1});
      halted = true;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, ynew, k7);

    double err_norm = 0.0;
    const bool finite = all_finite(ynew) && all_finite(k7);
    if (!tol.fixed_step) {
      if (finite) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double e =
              h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
          const double sc = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
          s += (e / sc) * (e / sc);
        }
        err_norm = std::sqrt(s / static_cast<double>(n));
      } else {
        err_norm = std::numeric_limits<double>::infinity();
      }
      if (!(err_norm <= 1.0)) {
        const double fac = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.2;
        h *= std::min(1.0, fac);
        continue;
      }
    } else if (!finite) {
      sol.events_.push_back({t, EventKind::StepCollapse, -1});
      halted = true;
      break;
    }

    DenseSolution::Step step;
    step.t = t;
    step.h = h;
    step.r1 = y;
    step.r2.resize(n);
    step.r3.resize(n);
    step.r4.resize(n);
    step.r5.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      step.r2[i] = ydiff;
      step.r3[i] = bspl;
      step.r4[i] = ydiff - h * k7[i] - bspl;
      step.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    auto interp = [&step](double tau, std::size_t i) {
      const double th = (tau - step.t) / step.h;
      const double th1 = 1.0 - th;
      return step.r1[i] + th * (step.r2[i] + th1 * (step.r3[i] + th * (step.r4[i] + th1 * step.r5[i])));
    };

    // Events: locate the first crossing inside the step by bisection on the interpolant.
    double t_stop = t + h;
    std::optional<OdeEvent> terminal;
    for (const auto& ev : events) {
      const auto c = static_cast<std::size_t>(ev.component);
      const double g0 = event_value(ev, y[c]);
      const double g1 = event_value(ev, ynew[c]);
      const bool terminal_kind = ev.kind == EventKind::BlowUp || ev.kind == EventKind::Escape;
      // A blow-up component may jump across zero inside one step; the
      // threshold crossing then lies before the zero.
      const bool through_zero = ev.kind == EventKind::BlowUp && g0 >= 0.0 && y[c] * ynew[c] < 0.0;
      const bool crossed = terminal_kind ? (g0 >= 0.0 && (g1 < 0.0 || through_zero)) : (g0 * g1 < 0.0);
      if (!crossed) continue;
      double lo = t, hi = t + h;
      if (through_zero && g1 >= 0.0) {
        double zl = t, zh = t + h;
        for (int it = 0; it < 200 && zh - zl > 1e-15 * std::max(1.0, std::abs(zh)); ++it) {
          const double mid = 0.5 * (zl + zh);
          if (interp(mid, c) * y[c] > 0.0) {
            zl = mid;
          } else {
            zh = mid;
          }
        }
        hi = zh;
      }
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = event_value(ev, interp(mid, c));
        if ((terminal_kind && gm < 0.0) || (!terminal_kind && gm * g0 < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (terminal_kind) {
        if (!terminal || hi < terminal->time) terminal = OdeEvent{hi, ev.kind, ev.component};
      } else {
        sol.events_.push_back({hi, ev.kind, ev.component});
      }
    }
    if (terminal) {
      t_stop = terminal->time;
      sol.events_.push_back(*terminal);
      halted = true;
    }

    sol.steps_.push_back(std::move(step));
    for (std::size_t i = 0; i < n; ++i) sol.max_abs_[i] = std::max(sol.max_abs_[i], std::abs(ynew[i]));
    t = halted ? t_stop : (last ? window.hi : t + h);
    y.swap(ynew);
    k1.swap(k7);

    if (!tol.fixed_step) {
      const double fac = err_norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)));
      h *= fac;
      if (tol.max_step > 0.0) h = std::min(h, tol.max_step);
    }
  }
  sol.t_end_ = t;
  sol.halted_ = halted;
  std::sort(sol.events_.begin(), sol.events_.end(),
            [](const OdeEvent& a, const OdeEvent& b) { return a.time < b.time; });
  return sol;
}

}  // namespace boussinesq
