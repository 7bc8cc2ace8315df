#pragma once

// Every separated solution family as a parametrized FlowCandidate.
//
// Parameters are JSON objects. Each family has a complete default object;
// user overrides may only replace existing keys. Time-dependent free
// functions use the TimeFunction registry, label-space ones the
// SpatialFunction / Profile registries, so all derivatives stay exact.
//
// Shared keys: "t_window" [lo, hi], "domain" {"lo": [...], "hi": [...]},
// "gauge" (null or m numbers added to the running integrals y).

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boussinesq/candidate.hpp"
#include "boussinesq/ode.hpp"
#include "json.hpp"

namespace boussinesq {

enum class FamilyId {
  Columnar2D,
  Columnar3DExt,
  M2Triangular,
  M2Rotational,
  M4Case1General,
  M4Case1Gerstner,
  M4Case2Explicit,
  M4Case3Explicit,
  M4Case4Quadrature,
  M3QRShearLinearRho,
  M3QRShearVerticalRho,
  M3Columnar,
  M5Elliptic,
  M5Hyperbolic,
  M5Parabolic,
  M5EllipticExtended,
  M6Case1,
  M6Case1Example,
  M6Case2Quadrature,
  M6Case2Explicit,
};

struct FamilyInfo {
  FamilyId id;
  std::string name;
  /// Grouping label, e.g. "4.2.1".
  std::string section;
  int n;
  std::string summary;
  nlohmann::json defaults;
};

const std::vector<FamilyInfo>& family_catalog();
/// Throws InvalidParams for unknown names.
const FamilyInfo& family_info(std::string_view name);
const FamilyInfo& family_info(FamilyId id);
std::string_view to_string(FamilyId id);

/// JSON-schema-style description of the parameter object.
nlohmann::json family_schema(const FamilyInfo& info);
/// Empty when params fit the schema, otherwise the first problem found.
std::string schema_problem(const nlohmann::json& schema, const nlohmann::json& params);

/// Defaults overlaid with overrides; unknown keys are rejected.
nlohmann::json family_params(std::string_view name, const nlohmann::json& overrides = nlohmann::json::object());

FlowCandidate build_family(std::string_view name, const nlohmann::json& overrides = nlohmann::json::object());
/// {"family": name, "params": {...}}.
FlowCandidate candidate_from_json(const nlohmann::json& doc);

// Group builders; params must already be complete (see family_params).
FlowCandidate build_columnar(FamilyId id, const nlohmann::json& params);
FlowCandidate build_2d_m2(FamilyId id, const nlohmann::json& params);
FlowCandidate build_2d_m4(FamilyId id, const nlohmann::json& params);
FlowCandidate build_3d_m3(FamilyId id, const nlohmann::json& params);
FlowCandidate build_3d_m5(FamilyId id, const nlohmann::json& params);
FlowCandidate build_3d_m6(FamilyId id, const nlohmann::json& params);

/// Smaller positive root of y^8 - 12 y^4 + 3.
double stability_alpha();

/// c0 c1 / (c1^4 - 1); the equilibrium rotation rate is its square root.
double gerstner_mu0_squared(double c0, double c1);

/// Right-hand side of the m=4 case 1 system in (b11, b12, s, theta0, theta).
template <class S>
void case1_general_rhs(double c0, std::span<const S> y, std::span<S> dy) {
  using std::cos;
  using std::sin;
  const S& b11 = y[0];
  const S& b12 = y[1];
  const S& s = y[2];
  const S& T0 = y[3];
  const S C = cos(y[4]);
  const S Sn = sin(y[4]);
  const S b2 = b11 * b11;
  const S b3 = b2 * b11;
  const S b4 = b2 * b2;
  const S s2 = s * s;
  dy[0] = -(c0 * b11 * b12 * C + 2.0 * b12 * s2 + c0 * Sn) / (4.0 * s);
  dy[1] = (c0 * b2 * b12 * Sn - c0 * b3 * b12 * b12 * C - 2.0 * c0 * b11 * C + 2.0 * (b4 - 1.0) * s2) / (4.0 * b3 * s);
  dy[2] = c0 * (b11 * b12 * C - Sn) / (2.0 * b11);
  dy[3] = (2.0 * c0 * c0 * b2 * b12 * Sn * Sn + c0 * c0 * b2 * b12 - 8.0 * b12 * s2 * s2 +
           (4.0 * c0 * b3 * b12 * s * T0 - 10.0 * c0 * b11 * b12 * s2) * C +
           (4.0 * c0 * b2 * s * T0 + 2.0 * (3.0 * c0 * b4 - c0) * s2 - (3.0 * c0 * c0 * b3 * b12 * b12 + 5.0 * c0 * c0 * b11) * C) *
               Sn) /
          (16.0 * b3 * s2);
  dy[4] = T0;
}

/// (b11, b12, s, theta0, theta) at the window start from complete
/// M4Case1General params; s defaults to sqrt(mu0^2) + delta.
std::array<double, 5> case1_general_initial(const nlohmann::json& params);

/// Trajectory of the five-state system with blow-up events |b11| < 1e-6 or
/// |s| < 1e-6.
DenseSolution integrate_case1_general(double c0, const std::array<double, 5>& initial, Window window,
                                      const OdeTolerance& tol = OdeTolerance::of(1e-11, 1e-12));

}  // namespace boussinesq
