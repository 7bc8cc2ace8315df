#pragma once

// Label-space ingredients of a separated flow map: scalar fields with exact
// gradients, the component vector v(z) and the density field.
//
// Fields are written once as functions of Jet coordinates. Evaluating with
// one coordinate promoted to a Jet variable yields the partial derivatives
// along that axis, so gradients never rely on finite differences.
//
// Registered field names (JSON):
//   coord {axis}                linear {coeffs, offset}       zero
//   poly {var, coeffs}          sin/cos {var, amp, freq, phase}
//   exp {var, amp, rate}        exp_cos/exp_sin {amp, scale, lin}
//   sin_cos {amp, k1, k2}       gauss {amp, width, center}     sum {terms}

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boussinesq/jet.hpp"
#include "boussinesq/types.hpp"
#include "json.hpp"

namespace boussinesq {

/// Closed-form function of one variable with derivatives of any order.
class Profile {
 public:
  using Series = std::function<Jet(const Jet& x, int order)>;

  Profile();
  Profile(nlohmann::json desc, Series fn);
  static Profile from_json(const nlohmann::json& desc);

  Jet operator()(const Jet& x, int order = 0) const { return fn_(x, order); }
  double operator()(double x, int order = 0) const { return fn_(Jet(x), order).value(); }
  const nlohmann::json& desc() const { return desc_; }

 private:
  nlohmann::json desc_;
  Series fn_;
};

class SpatialFunction {
 public:
  using Field = std::function<Jet(std::span<const Jet> z)>;

  SpatialFunction();
  SpatialFunction(nlohmann::json desc, Field fn);

  static SpatialFunction from_json(const nlohmann::json& desc);
  static SpatialFunction coordinate(int axis);
  static SpatialFunction zero();
  /// profile(z[var]).
  static SpatialFunction of_profile(const Profile& profile, int var);
  /// offset + sum of weight * term.
  static SpatialFunction combination(const std::vector<std::pair<double, SpatialFunction>>& terms, double offset = 0.0);

  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  /// Series of the field along coordinate `axis` through z.
  Jet along(const Vec& z, int axis) const;

  const Field& field() const { return fn_; }
  const nlohmann::json& desc() const { return desc_; }

 private:
  nlohmann::json desc_;
  Field fn_;
};

enum class ConstraintClass {
  Identity,
  AntiCR2D,
  Separated2D,
  Parabolic2D,
  Columnar,
  AntiCR3D,
  Separated3D,
  Parabolic3D,
  Mixed3D,
};

std::string_view to_string(ConstraintClass c);

struct NamedFunction {
  std::string name;
  SpatialFunction function;
};

class SpatialBasis {
 public:
  SpatialBasis(int n, std::vector<SpatialFunction> components, ConstraintClass cls,
               std::optional<std::array<int, 2>> anti_cr_pair = std::nullopt,
               std::vector<NamedFunction> free_functions = {});

  int n() const { return n_; }
  int m() const { return static_cast<int>(components_.size()); }
  Vec eval(const Vec& z) const;
  /// m x n matrix whose rows are the gradients of the components.
  Mat grad(const Vec& z) const;

  const SpatialFunction& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }
  ConstraintClass constraint_class() const { return class_; }
  /// Component indices forming an anti-CR pair in (z1, z2), if any.
  const std::optional<std::array<int, 2>>& anti_cr_pair() const { return anti_cr_; }
  const std::vector<NamedFunction>& free_functions() const { return free_; }

  /// Basis H v. The constraint class is kept; the anti-CR pair is dropped
  /// because its components are mixed.
  SpatialBasis transformed(const Mat& H) const;

 private:
  int n_;
  std::vector<SpatialFunction> components_;
  ConstraintClass class_;
  std::optional<std::array<int, 2>> anti_cr_;
  std::vector<NamedFunction> free_;
};

/// How the scalar rho relates to the physical density.
enum class DensityInterpretation {
  LogDensity,         ///< rho = g ln(density)
  LinearizedDensity,  ///< rho = g density / mean density
};

std::string_view to_string(DensityInterpretation d);

class DensityField {
 public:
  DensityField(SpatialFunction field, nlohmann::json coefficients = nlohmann::json::object(),
               DensityInterpretation interpretation = DensityInterpretation::LogDensity);
  /// rho = sum coeffs[i] z_i.
  static DensityField linear(const std::vector<double>& coeffs);

  double eval(const Vec& z) const { return field_.value(z); }
  Vec grad(const Vec& z) const { return field_.gradient(z); }

  const SpatialFunction& field() const { return field_; }
  const nlohmann::json& coefficients() const { return coefficients_; }
  DensityInterpretation interpretation() const { return interpretation_; }
  DensityField with_interpretation(DensityInterpretation d) const;
  /// Physical density recovered from rho.
  double physical_density(double rho, double gravity, double mean_density) const;

 private:
  SpatialFunction field_;
  nlohmann::json coefficients_;
  DensityInterpretation interpretation_;
};

}  // namespace boussinesq
