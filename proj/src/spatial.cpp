#include "boussinesq/spatial.hpp"

#include <cmath>
#include <numbers>

#include "boussinesq/errors.hpp"
#include "boussinesq/params.hpp"

namespace boussinesq {

namespace {

constexpr int kMaxDim = 3;

void need_axis(std::span<const Jet> z, int axis) {
  if (axis < 0 || axis >= static_cast<int>(z.size())) {
    throw Error(ErrorKind::InvalidParams, "field uses coordinate " + std::to_string(axis + 1) + " in dimension " +
                                              std::to_string(z.size()));
  }
}

double falling(int top, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= top - i;
  return f;
}

template <class Fn>
auto with_jets(const Vec& z, int axis, Fn&& fn) {
  if (z.size() > kMaxDim) throw Error(ErrorKind::InvalidParams, "label dimension above 3");
  std::array<Jet, kMaxDim> buf;
  for (Eigen::Index i = 0; i < z.size(); ++i) buf[i] = Jet(z[i]);
  if (axis >= 0) buf[axis] = Jet::variable(z[axis]);
  return fn(std::span<const Jet>(buf.data(), static_cast<std::size_t>(z.size())));
}

}  // namespace

// ---------------------------------------------------------------- Profile

Profile::Profile() : Profile({{"name", "zero"}}, [](const Jet&, int) { return Jet(0.0); }) {}

Profile::Profile(nlohmann::json desc, Series fn) : desc_(std::move(desc)), fn_(std::move(fn)) {}

Profile Profile::from_json(const nlohmann::json& desc) {
  if (!desc.is_object()) throw Error(ErrorKind::InvalidParams, "profile must be an object");
  const std::string name = params::text(desc, "name", "");
  if (name == "zero") return Profile(desc, [](const Jet&, int) { return Jet(0.0); });
  if (name == "poly") {
    const auto c = params::numbers(desc, "coeffs", {0.0});
    return Profile(desc, [c](const Jet& x, int k) {
      Jet acc(0.0);
      for (int i = static_cast<int>(c.size()) - 1; i >= k; --i) acc = acc * x + c[i] * falling(i, k);
      return acc;
    });
  }
  if (name == "sin" || name == "cos") {
    const double amp = params::number(desc, "amp", 1.0);
    const double freq = params::number(desc, "freq", 1.0);
    const double phase = params::number(desc, "phase", 0.0) + (name == "cos" ? std::numbers::pi / 2 : 0.0);
    return Profile(desc, [=](const Jet& x, int k) {
      return amp * std::pow(freq, k) * sin(freq * x + (phase + k * std::numbers::pi / 2));
    });
  }
  if (name == "exp") {
    const double amp = params::number(desc, "amp", 1.0);
    const double rate = params::number(desc, "rate", 1.0);
    return Profile(desc, [=](const Jet& x, int k) { return amp * std::pow(rate, k) * exp(rate * x); });
  }
  if (name == "sum") {
    if (!desc.contains("terms") || !desc.at("terms").is_array()) {
      throw Error(ErrorKind::InvalidParams, "profile 'sum' needs an array 'terms'");
    }
    std::vector<Profile> terms;
    for (const auto& s : desc.at("terms")) terms.push_back(from_json(s));
    return Profile(desc, [terms](const Jet& x, int k) {
      Jet acc(0.0);
      for (const auto& p : terms) acc += p(x, k);
      return acc;
    });
  }
  throw Error(ErrorKind::InvalidParams, "unknown profile '" + name + "'");
}

// -------------------------------------------------------- SpatialFunction

SpatialFunction::SpatialFunction() : SpatialFunction(zero()) {}

SpatialFunction::SpatialFunction(nlohmann::json desc, Field fn) : desc_(std::move(desc)), fn_(std::move(fn)) {}

SpatialFunction SpatialFunction::coordinate(int axis) {
  return {{{"name", "coord"}, {"axis", axis}}, [axis](std::span<const Jet> z) {
            need_axis(z, axis);
            return z[static_cast<std::size_t>(axis)];
          }};
}

SpatialFunction SpatialFunction::zero() {
  return {{{"name", "zero"}}, [](std::span<const Jet>) { return Jet(0.0); }};
}

SpatialFunction SpatialFunction::of_profile(const Profile& profile, int var) {
  nlohmann::json desc = profile.desc();
  desc["var"] = var;
  return {desc, [profile, var](std::span<const Jet> z) {
            need_axis(z, var);
            return profile(z[static_cast<std::size_t>(var)]);
          }};
}

SpatialFunction SpatialFunction::combination(const std::vector<std::pair<double, SpatialFunction>>& terms,
                                             double offset) {
  nlohmann::json desc = {{"name", "sum"}, {"offset", offset}, {"terms", nlohmann::json::array()}};
  for (const auto& [w, f] : terms) desc["terms"].push_back({{"weight", w}, {"field", f.desc()}});
  return {desc, [terms, offset](std::span<const Jet> z) {
            Jet acc(offset);
            for (const auto& [w, f] : terms) {
              if (w != 0.0) acc += w * f.field()(z);
            }
            return acc;
          }};
}

SpatialFunction SpatialFunction::from_json(const nlohmann::json& desc) {
  if (!desc.is_object()) throw Error(ErrorKind::InvalidParams, "spatial function must be an object");
  const std::string name = params::text(desc, "name", "");
  if (name == "coord") return coordinate(params::integer(desc, "axis", 0));
  if (name == "zero") return zero();
  if (name == "linear") {
    const auto c = params::numbers(desc, "coeffs", {});
    const double offset = params::number(desc, "offset", 0.0);
    return {desc, [c, offset](std::span<const Jet> z) {
              Jet acc(offset);
              for (std::size_t i = 0; i < c.size() && i < z.size(); ++i) acc += c[i] * z[i];
              return acc;
            }};
  }
  if (name == "poly" || name == "sin" || name == "cos" || name == "exp") {
    return of_profile(Profile::from_json(desc), params::integer(desc, "var", 0));
  }
  if (name == "exp_cos" || name == "exp_sin") {
    const double amp = params::number(desc, "amp", 1.0);
    const double k = params::number(desc, "scale", 1.0);
    const double lin = params::number(desc, "lin", 0.0);
    const bool cosine = name == "exp_cos";
    return {desc, [=](std::span<const Jet> z) {
              need_axis(z, 1);
              Jet s, c;
              sincos(k * z[0], s, c);
              const Jet e = amp * exp(k * z[1]);
              return cosine ? e * c + lin * z[0] : e * s - lin * z[1];
            }};
  }
  if (name == "sin_cos") {
    const double amp = params::number(desc, "amp", 1.0);
    const double k1 = params::number(desc, "k1", 1.0);
    const double k2 = params::number(desc, "k2", 1.0);
    return {desc, [=](std::span<const Jet> z) {
              need_axis(z, 1);
              return amp * sin(k1 * z[0]) * cos(k2 * z[1]);
            }};
  }
  if (name == "gauss") {
    const double amp = params::number(desc, "amp", 1.0);
    const double width = params::number(desc, "width", 1.0);
    const auto center = params::numbers(desc, "center", {0.0, 0.0});
    if (width == 0.0) throw Error(ErrorKind::InvalidParams, "gauss width must be nonzero");
    return {desc, [=](std::span<const Jet> z) {
              Jet r2(0.0);
              for (std::size_t i = 0; i < center.size() && i < z.size(); ++i) {
                const Jet d = z[i] - center[i];
                r2 += d * d;
              }
              return amp * exp(-r2 / (width * width));
            }};
  }
  if (name == "sum") {
    if (!desc.contains("terms") || !desc.at("terms").is_array()) {
      throw Error(ErrorKind::InvalidParams, "field 'sum' needs an array 'terms'");
    }
    std::vector<std::pair<double, SpatialFunction>> terms;
    for (const auto& t : desc.at("terms")) {
      if (t.contains("field")) {
        terms.emplace_back(params::number(t, "weight", 1.0), from_json(t.at("field")));
      } else {
        terms.emplace_back(1.0, from_json(t));
      }
    }
    SpatialFunction out = combination(terms, params::number(desc, "offset", 0.0));
    out.desc_ = desc;
    return out;
  }
  throw Error(ErrorKind::InvalidParams, "unknown spatial function '" + name + "'");
}

double SpatialFunction::value(const Vec& z) const {
  return with_jets(z, -1, [this](std::span<const Jet> s) { return fn_(s).value(); });
}

Jet SpatialFunction::along(const Vec& z, int axis) const {
  return with_jets(z, axis, [this](std::span<const Jet> s) { return fn_(s); });
}

Vec SpatialFunction::gradient(const Vec& z) const {
  Vec g(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) g[k] = along(z, static_cast<int>(k)).coefficient(1);
  return g;
}

// ----------------------------------------------------------- SpatialBasis

std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::Identity: return "Identity";
    case ConstraintClass::AntiCR2D: return "AntiCR2D";
    case ConstraintClass::Separated2D: return "Separated2D";
    case ConstraintClass::Parabolic2D: return "Parabolic2D";
    case ConstraintClass::Columnar: return "Columnar";
    case ConstraintClass::AntiCR3D: return "AntiCR3D";
    case ConstraintClass::Separated3D: return "Separated3D";
    case ConstraintClass::Parabolic3D: return "Parabolic3D";
    case ConstraintClass::Mixed3D: return "Mixed3D";
  }
  return "Unknown";
}

SpatialBasis::SpatialBasis(int n, std::vector<SpatialFunction> components, ConstraintClass cls,
                           std::optional<std::array<int, 2>> anti_cr_pair, std::vector<NamedFunction> free_functions)
    : n_(n), components_(std::move(components)), class_(cls), anti_cr_(anti_cr_pair), free_(std::move(free_functions)) {
  if (n_ != 2 && n_ != 3) throw Error(ErrorKind::InvalidParams, "label dimension must be 2 or 3");
  if (components_.empty()) throw Error(ErrorKind::InvalidParams, "spatial basis has no components");
}

Vec SpatialBasis::eval(const Vec& z) const {
  Vec out(m());
  for (int i = 0; i < m(); ++i) out[i] = components_[static_cast<std::size_t>(i)].value(z);
  return out;
}

Mat SpatialBasis::grad(const Vec& z) const {
  Mat g(m(), n_);
  for (int i = 0; i < m(); ++i) g.row(i) = components_[static_cast<std::size_t>(i)].gradient(z).transpose();
  return g;
}

SpatialBasis SpatialBasis::transformed(const Mat& H) const {
  std::vector<SpatialFunction> mixed;
  for (Eigen::Index j = 0; j < H.rows(); ++j) {
    std::vector<std::pair<double, SpatialFunction>> terms;
    for (Eigen::Index i = 0; i < H.cols(); ++i) {
      if (H(j, i) != 0.0) terms.emplace_back(H(j, i), components_[static_cast<std::size_t>(i)]);
    }
    mixed.push_back(SpatialFunction::combination(terms));
  }
  return SpatialBasis(n_, std::move(mixed), class_, std::nullopt, free_);
}

// ----------------------------------------------------------- DensityField

std::string_view to_string(DensityInterpretation d) {
  return d == DensityInterpretation::LogDensity ? "LogDensity" : "LinearizedDensity";
}

DensityField::DensityField(SpatialFunction field, nlohmann::json coefficients, DensityInterpretation interpretation)
    : field_(std::move(field)), coefficients_(std::move(coefficients)), interpretation_(interpretation) {}

DensityField DensityField::linear(const std::vector<double>& coeffs) {
  SpatialFunction f = SpatialFunction::from_json({{"name", "linear"}, {"coeffs", coeffs}});
  return DensityField(f, {{"linear", coeffs}});
}

DensityField DensityField::with_interpretation(DensityInterpretation d) const {
  DensityField out = *this;
  out.interpretation_ = d;
  return out;
}

double DensityField::physical_density(double rho, double gravity, double mean_density) const {
  if (interpretation_ == DensityInterpretation::LogDensity) return std::exp(rho / gravity);
  return mean_density * rho / gravity;
}

}  // namespace boussinesq
