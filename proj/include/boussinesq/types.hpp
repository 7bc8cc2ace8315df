#pragma once

#include <Eigen/Dense>

namespace boussinesq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Closed time interval [lo, hi].
struct Window {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

/// Axis-aligned box in label (z) space.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& z, double slack = 1e-12) const {
    if (z.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (z[i] < lo[i] - slack || z[i] > hi[i] + slack) return false;
    }
    return true;
  }
};

}  // namespace boussinesq
