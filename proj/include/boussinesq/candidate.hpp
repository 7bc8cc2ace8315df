#pragma once

// A separated flow map phi(z, t) = A(t) v(z) with its density field.

#include <memory>
#include <optional>
#include <string>

#include "boussinesq/spatial.hpp"
#include "boussinesq/time_matrix.hpp"
#include "boussinesq/types.hpp"
#include "json.hpp"

namespace boussinesq {

struct FlowCandidate {
  std::string family_id;
  int n = 0;
  std::shared_ptr<const TimeMatrix> A;
  std::shared_ptr<const SpatialBasis> v;
  std::shared_ptr<const DensityField> rho;
  /// Label box on which det(d phi) is claimed to be nonzero.
  Box domain_hint;
  /// Times covered by the default verification grid.
  Window t_window;
  nlohmann::json params = nlohmann::json::object();
  /// Integration constants added to y.
  Vec gauge;
  /// Accumulated H of applied transforms.
  std::optional<Mat> transform;
  std::optional<double> blowup_time;

  int m() const { return A ? A->m() : 0; }
  /// Throws InvalidParams if the parts do not fit together.
  void validate() const;
};

FlowCandidate make_candidate(std::string family_id, TimeMatrix A, SpatialBasis v, DensityField rho, Box domain_hint,
                             Window t_window, nlohmann::json params = nlohmann::json::object());

Vec evaluate_map(const FlowCandidate& c, const Vec& z, double t);
/// d phi = A grad v, n x n.
Mat map_jacobian(const FlowCandidate& c, const Vec& z, double t);
Vec map_velocity(const FlowCandidate& c, const Vec& z, double t);
Vec map_acceleration(const FlowCandidate& c, const Vec& z, double t);

/// A H^{-1}, H v. Throws SingularTransform when cond(H) >= 1e12.
FlowCandidate apply_H_transform(const FlowCandidate& c, const Mat& H);
FlowCandidate with_gauge_shift(const FlowCandidate& c, const Vec& delta);

nlohmann::json to_json(const FlowCandidate& c);

/// Identity map in n dimensions with zero density.
FlowCandidate identity_candidate(int n);

}  // namespace boussinesq
