#pragma once

// Helpers shared by the family builders.

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "boussinesq/candidate.hpp"
#include "boussinesq/catalog.hpp"
#include "boussinesq/errors.hpp"
#include "boussinesq/params.hpp"
#include "boussinesq/quadrature.hpp"
#include "boussinesq/spatial.hpp"
#include "boussinesq/sturm_liouville.hpp"
#include "boussinesq/time_function.hpp"
#include "boussinesq/time_matrix.hpp"

namespace boussinesq::detail {

using Json = nlohmann::json;

Window window_of(const Json& p);
TimeFunction time_fn(const Json& p, const char* key);
SpatialFunction field(const Json& p, const char* key);
Profile profile(const Json& p, const char* key);
/// profile(z[var]) from the profile desc stored under key.
SpatialFunction profile_field(const Json& p, const char* key, int var);

/// Evenly spaced times including both ends.
std::vector<double> scan_times(Window w, int count = 801);

/// Throws `kind` if f changes sign or comes within 1e-10 of zero on the
/// window; with `positive`, also if f is negative.
void require_nonvanishing(const ScalarSeries& f, Window w, ErrorKind kind, const std::string& what,
                          bool positive = false);

/// k + integral of f from the window start.
std::shared_ptr<const Antiderivative> accumulate(Antiderivative::Integrand f, Window w, double k = 0.0);

/// Running integral k + int f whose series at t comes from the series of f;
/// f must be called with Jet::variable(t).
struct Running {
  std::shared_ptr<const Antiderivative> integral;
  ScalarSeries integrand;
  Jet operator()(const Jet& t) const { return integral->lift(t.value(), integrand(t)); }
};
Running running(ScalarSeries f, Window w, double k = 0.0);

/// Left-multiplies rows 0 and 1 by the plane rotation R(theta).
void rotate_xy(const Jet& theta, TimeJets& j);

/// Two independent solutions of y'' + q y = 0, q = -(a'' + c0)/a, and their
/// integrals from the window start. Constant q uses closed forms
/// (cos, sin), (1, t) or (cosh, sinh); otherwise solve_sl.
class ColumnarColumns {
 public:
  ColumnarColumns(ScalarSeries a, double c0, Window w);
  /// (a1, a2, integral a1, integral a2).
  std::array<Jet, 4> jets(double t) const;
  bool closed_form() const { return !pair_; }
  Window window() const { return window_; }
  double constant_q() const { return q0_; }

 private:
  std::shared_ptr<const FundamentalPair> pair_;
  Window window_;
  double q0_ = 0.0;
};

/// Attaches domain, window, params and gauge to the parts.
FlowCandidate finish(FamilyId id, TimeMatrix A, SpatialBasis v, DensityField rho, const Json& p);

}  // namespace boussinesq::detail
