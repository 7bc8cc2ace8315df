#pragma once

// Adaptive Dormand-Prince 5(4) integration with continuous extension and
// threshold events.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/types.hpp"

namespace boussinesq {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct OdeTolerance {
  double rel = 1e-11;
  double abs = 1e-12;
  /// When set, integrate with this constant step and no error control.
  std::optional<double> fixed_step;
  double max_step = 0.0;  ///< 0 means unlimited
  long max_steps = 2'000'000;

  static OdeTolerance of(double rel, double abs) {
    OdeTolerance t;
    t.rel = rel;
    t.abs = abs;
    return t;
  }
};

enum class EventKind {
  BlowUp,      ///< |y_c| fell below threshold; terminal
  Escape,      ///< |y_c| exceeded threshold; terminal
  SignChange,  ///< y_c - threshold changed sign; recorded only
  StepCollapse ///< step size underflow; terminal, treated as blow-up candidate
};

std::string to_string(EventKind kind);

struct EventRule {
  EventKind kind = EventKind::BlowUp;
  int component = 0;
  double threshold = 0.0;
};

struct OdeEvent {
  double time = 0.0;
  EventKind kind = EventKind::BlowUp;
  int component = -1;
};

/// Immutable dense solution on [t0, t_end]. Evaluation is read-only and safe
/// to share across threads.
class DenseSolution {
 public:
  DenseSolution() = default;

  /// Interval where the solution is available (ends at a terminal event).
  Window window() const { return {t0_, t_end_}; }
  int dimension() const { return dim_; }
  std::size_t steps() const { return steps_.size(); }
  bool halted() const { return halted_; }
  const std::vector<OdeEvent>& events() const { return events_; }
  /// Time of the first terminal event, if any.
  std::optional<double> blowup_time() const;

  std::vector<double> state(double t) const;
  void state(double t, std::span<double> out) const;
  /// Right-hand side evaluated on the interpolated state.
  std::vector<double> derivative(double t) const;
  double maximum_abs(int component) const;

 private:
  friend DenseSolution integrate_ivp(const OdeRhs&, std::span<const double>, Window, const OdeTolerance&,
                                     const std::vector<EventRule>&);
  struct Step {
    double t = 0.0;
    double h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;
  };
  const Step& locate(double t) const;

  OdeRhs rhs_;
  int dim_ = 0;
  double t0_ = 0.0;
  double t_end_ = 0.0;
  std::vector<double> y0_;
  std::vector<Step> steps_;
  std::vector<OdeEvent> events_;
  std::vector<double> max_abs_;
  bool halted_ = false;
};

/// Integrates y' = rhs(t, y) from window.lo to window.hi. Terminal events and
/// step collapse halt the integration; they are recorded, never thrown.
DenseSolution integrate_ivp(const OdeRhs& rhs, std::span<const double> y0, Window window,
                            const OdeTolerance& tol = {}, const std::vector<EventRule>& events = {});

}  // namespace boussinesq
