#pragma once

// The time factor A(t) of a separated map, together with the running
// integrals y_i of its last row.
//
// Every source (closed form, dense ODE output, quadrature accumulator) is
// reduced to a generator returning Taylor series of all entries at t, so A',
// A'' and higher derivatives are exact for all of them.

#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "boussinesq/jet.hpp"
#include "boussinesq/types.hpp"

namespace boussinesq {

enum class TimeSource { ClosedForm, OdeBacked, QuadratureBacked };

std::string_view to_string(TimeSource s);

struct TimeJets {
  int rows = 0;
  int cols = 0;
  std::vector<Jet> a;  // row-major rows x cols
  std::vector<Jet> y;  // cols

  TimeJets() = default;
  TimeJets(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c)), y(static_cast<std::size_t>(c)) {}

  Jet& at(int i, int j) { return a[static_cast<std::size_t>(i * cols + j)]; }
  const Jet& at(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
};

struct TimeSample {
  Mat a;
  Mat da;
  Mat dda;
  Vec y;
};

class TimeMatrix {
 public:
  using Generator = std::function<TimeJets(double t)>;

  static constexpr Window kUnbounded{-std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity()};

  TimeMatrix(int n, int m, TimeSource source, Generator generator, Window validity = kUnbounded);

  int n() const { return n_; }
  int m() const { return m_; }
  TimeSource source() const { return source_; }
  /// Times at which the matrix is defined.
  const Window& validity() const { return validity_; }

  TimeJets jets(double t) const;
  TimeSample sample(double t) const;
  Mat eval(double t) const;
  Mat deriv(double t) const;
  Mat deriv2(double t) const;
  /// y with y_i' = a_{n i}.
  Vec antider_row_n(double t) const;

  /// A H^{-1}, y H^{-1}.
  TimeMatrix right_multiplied(const Mat& h_inverse) const;
  /// y + delta.
  TimeMatrix with_gauge_shift(const Vec& delta) const;

 private:
  int n_;
  int m_;
  TimeSource source_;
  Generator generator_;
  Window validity_;
};

}  // namespace boussinesq
