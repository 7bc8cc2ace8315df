#include "boussinesq/time_matrix.hpp"

#include <cmath>
#include <sstream>

#include "boussinesq/errors.hpp"

namespace boussinesq {

std::string_view to_string(TimeSource s) {
  switch (s) {
    case TimeSource::ClosedForm: return "closed-form";
    case TimeSource::OdeBacked: return "ode-backed";
    case TimeSource::QuadratureBacked: return "quadrature-backed";
  }
  return "unknown";
}

TimeMatrix::TimeMatrix(int n, int m, TimeSource source, Generator generator, Window validity)
    : n_(n), m_(m), source_(source), generator_(std::move(generator)), validity_(validity) {
  if (n_ < 1 || m_ < n_) throw Error(ErrorKind::InvalidParams, "time matrix needs 1 <= n <= m");
}

TimeJets TimeMatrix::jets(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (!(t >= validity_.lo - slack && t <= validity_.hi + slack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "t=" << t << " outside validity window [" << validity_.lo << ", " << validity_.hi << "]";
    throw Error(ErrorKind::IntegrationWindowExceeded, msg.str());
  }
  TimeJets j = generator_(t);
  if (j.rows != n_ || j.cols != m_) throw Error(ErrorKind::InvalidParams, "time matrix generator has wrong shape");
  return j;
}

TimeSample TimeMatrix::sample(double t) const {
  const TimeJets j = jets(t);
  TimeSample s{Mat(n_, m_), Mat(n_, m_), Mat(n_, m_), Vec(m_)};
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < m_; ++c) {
      const Jet& e = j.at(r, c);
      s.a(r, c) = e.value();
      s.da(r, c) = e.derivative(1);
      s.dda(r, c) = e.derivative(2);
    }
  }
  for (int c = 0; c < m_; ++c) s.y[c] = j.y[static_cast<std::size_t>(c)].value();
  return s;
}

Mat TimeMatrix::eval(double t) const { return sample(t).a; }
Mat TimeMatrix::deriv(double t) const { return sample(t).da; }
Mat TimeMatrix::deriv2(double t) const { return sample(t).dda; }
Vec TimeMatrix::antider_row_n(double t) const { return sample(t).y; }

TimeMatrix TimeMatrix::right_multiplied(const Mat& h_inverse) const {
  if (h_inverse.rows() != m_ || h_inverse.cols() != m_) {
    throw Error(ErrorKind::InvalidParams, "transform has wrong size");
  }
  const Generator base = generator_;
  const int n = n_;
  const int m = m_;
  return TimeMatrix(
      n, m, source_,
      [base, h_inverse, n, m](double t) {
        const TimeJets src = base(t);
        TimeJets out(n, m);
        for (int c = 0; c < m; ++c) {
          for (int k = 0; k < m; ++k) {
            const double w = h_inverse(k, c);
            if (w == 0.0) continue;
            for (int r = 0; r < n; ++r) out.at(r, c) += w * src.at(r, k);
            out.y[static_cast<std::size_t>(c)] += w * src.y[static_cast<std::size_t>(k)];
          }
        }
        return out;
      },
      validity_);
}

TimeMatrix TimeMatrix::with_gauge_shift(const Vec& delta) const {
  if (delta.size() != m_) throw Error(ErrorKind::InvalidParams, "gauge shift has wrong size");
  const Generator base = generator_;
  return TimeMatrix(
      n_, m_, source_,
      [base, delta](double t) {
        TimeJets j = base(t);
        for (Eigen::Index c = 0; c < delta.size(); ++c) j.y[static_cast<std::size_t>(c)] += delta[c];
        return j;
      },
      validity_);
}

}  // namespace boussinesq
