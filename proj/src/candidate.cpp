#include "boussinesq/candidate.hpp"

#include <Eigen/SVD>

#include "boussinesq/errors.hpp"

namespace boussinesq {

namespace {

nlohmann::json to_array(const Vec& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

void FlowCandidate::validate() const {
  if (!A || !v || !rho) throw Error(ErrorKind::InvalidParams, family_id + ": incomplete candidate");
  if (n != 2 && n != 3) throw Error(ErrorKind::InvalidParams, family_id + ": dimension must be 2 or 3");
  if (A->n() != n || v->n() != n) throw Error(ErrorKind::InvalidParams, family_id + ": dimension mismatch");
  if (A->m() != v->m()) throw Error(ErrorKind::InvalidParams, family_id + ": column count mismatch");
  if (domain_hint.dim() != n || domain_hint.hi.size() != n) {
    throw Error(ErrorKind::InvalidParams, family_id + ": domain hint has wrong dimension");
  }
  if (gauge.size() != A->m()) throw Error(ErrorKind::InvalidParams, family_id + ": gauge has wrong size");
}

FlowCandidate make_candidate(std::string family_id, TimeMatrix A, SpatialBasis v, DensityField rho, Box domain_hint,
                             Window t_window, nlohmann::json params) {
  FlowCandidate c;
  c.family_id = std::move(family_id);
  c.n = v.n();
  c.gauge = Vec::Zero(A.m());
  c.A = std::make_shared<const TimeMatrix>(std::move(A));
  c.v = std::make_shared<const SpatialBasis>(std::move(v));
  c.rho = std::make_shared<const DensityField>(std::move(rho));
  c.domain_hint = std::move(domain_hint);
  c.t_window = t_window;
  c.params = std::move(params);
  c.validate();
  return c;
}

Vec evaluate_map(const FlowCandidate& c, const Vec& z, double t) { return c.A->eval(t) * c.v->eval(z); }

Mat map_jacobian(const FlowCandidate& c, const Vec& z, double t) { return c.A->eval(t) * c.v->grad(z); }

Vec map_velocity(const FlowCandidate& c, const Vec& z, double t) { return c.A->deriv(t) * c.v->eval(z); }

Vec map_acceleration(const FlowCandidate& c, const Vec& z, double t) { return c.A->deriv2(t) * c.v->eval(z); }

FlowCandidate apply_H_transform(const FlowCandidate& c, const Mat& H) {
  const int m = c.m();
  if (H.rows() != m || H.cols() != m) throw Error(ErrorKind::InvalidParams, "transform must be m x m");
  const Eigen::JacobiSVD<Mat> svd(H);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (!(smin > 0.0) || s[0] / smin >= 1e12) {
    throw Error(ErrorKind::SingularTransform, "transform is singular or ill-conditioned");
  }
  const Mat h_inverse = H.inverse();
  FlowCandidate out = c;
  out.A = std::make_shared<const TimeMatrix>(c.A->right_multiplied(h_inverse));
  out.v = std::make_shared<const SpatialBasis>(c.v->transformed(H));
  out.gauge = (c.gauge.transpose() * h_inverse).transpose();
  out.transform = c.transform ? Mat(H * *c.transform) : H;
  return out;
}

FlowCandidate with_gauge_shift(const FlowCandidate& c, const Vec& delta) {
  FlowCandidate out = c;
  out.A = std::make_shared<const TimeMatrix>(c.A->with_gauge_shift(delta));
  out.gauge = c.gauge + delta;
  return out;
}

nlohmann::json to_json(const FlowCandidate& c) {
  nlohmann::json j = {
      {"family_id", c.family_id},
      {"n", c.n},
      {"m", c.m()},
      {"params", c.params},
      {"domain_hint", {{"lo", to_array(c.domain_hint.lo)}, {"hi", to_array(c.domain_hint.hi)}}},
      {"t_window", {c.t_window.lo, c.t_window.hi}},
      {"gauge_constants", to_array(c.gauge)},
      {"time_source", std::string(to_string(c.A->source()))},
      {"constraint_class", std::string(to_string(c.v->constraint_class()))},
      {"density_interpretation", std::string(to_string(c.rho->interpretation()))},
  };
  if (c.transform) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.transform->rows(); ++i) rows.push_back(to_array(c.transform->row(i).transpose()));
    j["transform"] = rows;
  }
  if (c.blowup_time) j["blowup_time"] = *c.blowup_time;
  return j;
}

FlowCandidate identity_candidate(int n) {
  std::vector<SpatialFunction> comps;
  for (int i = 0; i < n; ++i) comps.push_back(SpatialFunction::coordinate(i));
  TimeMatrix A(n, n, TimeSource::ClosedForm, [n](double) {
    TimeJets j(n, n);
    for (int i = 0; i < n; ++i) j.at(i, i) = 1.0;
    return j;
  });
  SpatialBasis v(n, std::move(comps), ConstraintClass::Identity);
  DensityField rho(SpatialFunction::zero());
  Box box{Vec::Constant(n, -1.0), Vec::Constant(n, 1.0)};
  return make_candidate("Identity", std::move(A), std::move(v), std::move(rho), box, {0.0, 1.0});
}

}  // namespace boussinesq
