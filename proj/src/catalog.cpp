#include "boussinesq/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "family_support.hpp"

namespace boussinesq {

namespace {

using Json = nlohmann::json;

Json trig(double offset, double slope, double amp, double freq = 1.0, double phase = 0.0) {
  return {{"name", "trig"}, {"offset", offset}, {"slope", slope}, {"amp", amp}, {"freq", freq}, {"phase", phase}};
}
Json sine(double amp, double freq = 1.0) { return {{"name", "sin"}, {"amp", amp}, {"freq", freq}}; }
Json cosine(double amp, double freq = 1.0) { return {{"name", "cos"}, {"amp", amp}, {"freq", freq}}; }
Json poly(std::vector<double> c) { return {{"name", "poly"}, {"coeffs", c}}; }
Json poly_of(int var, std::vector<double> c) { return {{"name", "poly"}, {"var", var}, {"coeffs", c}}; }
Json exp_cos() { return {{"name", "exp_cos"}, {"amp", 1.0}, {"scale", 1.0}}; }
Json exp_sin() { return {{"name", "exp_sin"}, {"amp", 1.0}, {"scale", 1.0}}; }
Json sin_cos() { return {{"name", "sin_cos"}, {"amp", 1.0}, {"k1", 1.0}, {"k2", 1.0}}; }
Json box(std::vector<double> lo, std::vector<double> hi) { return {{"lo", lo}, {"hi", hi}}; }

Json with_common(Json p, std::vector<double> window, Json domain) {
  p["t_window"] = window;
  p["domain"] = std::move(domain);
  p["gauge"] = nullptr;
  return p;
}

std::vector<FamilyInfo> make_catalog() {
  const double pi = std::numbers::pi;
  const Json gerstner_box = box({-pi, -2.0}, {pi, -0.1});
  const Json unit2 = box({-1, -1}, {1, 1});
  const Json unit3 = box({-1, -1, -1}, {1, 1, 1});
  const Json pair3 = box({-1, -2, -1}, {1, -0.1, 1});
  const Json m6box = box({-1.4, -1, -1}, {-0.2, 0, 1});
  const Json recip_stretch = {{"name", "pow"}, {"base", trig(1, 0, 0.2)}, {"exponent", -1.0}};
  const Json shear_b22 = {{"name", "product"}, {"factors", {{{"name", "exp"}, {"amp", 1.0}, {"rate", -0.1}}, recip_stretch}}};
  const Json wavy_line = {{"name", "sum"}, {"terms", {poly({0, 1}), sine(0.2)}}};

  std::vector<FamilyInfo> c;
  auto add = [&](FamilyId id, std::string name, std::string section, int n, std::string summary, Json defaults) {
    c.push_back({id, std::move(name), std::move(section), n, std::move(summary), std::move(defaults)});
  };
  add(FamilyId::Columnar2D, "Columnar2D", "3", 2, "phi = (z1/a, a z2 + a1 f1(z1) + a2 f2(z1)), rho = c0 z2",
      with_common({{"a", trig(1, 0, 0.1)}, {"c0", -1.0}, {"f1", sine(1.0)}, {"f2", poly({0, 0, 1})}}, {0, 4}, unit2));
  add(FamilyId::Columnar3DExt, "Columnar3DExt", "3", 3,
      "columnar Euler base (strain or Gerstner) with a1 f1 + a2 f2 added to phi3, rho = c0 z3",
      with_common({{"base", "strain"},
                   {"a", trig(1, 0, 0.1)},
                   {"c0", -1.0},
                   {"mu", 1.3},
                   {"f1", sin_cos()},
                   {"f2", poly_of(0, {0, 0, 1})},
                   {"g1", exp_cos()},
                   {"g2", exp_sin()}},
                  {0, 4}, box({-1, -1.5, -1}, {1, -0.1, 1})));
  add(FamilyId::M2Triangular, "M2Triangular", "4.1", 2, "m=2, a21 = 0, rho = c0 z1 + f(z2)",
      with_common({{"a22", trig(1, 0, 0.2)}, {"c0", 0.5}, {"c", 0.3}, {"f", sine(1.0)}, {"k12", 0.0}}, {0, 4}, unit2));
  add(FamilyId::M2Rotational, "M2Rotational", "4.1", 2, "m=2, A = R(theta) [[b, l b], [0, 1/b]], rho = c0 z2",
      with_common({{"b", trig(1, 0, 0.2)}, {"theta", trig(0, 1, 0.3)}, {"c0", -1.0}, {"c", 0.5}, {"k_ell", 0.0}}, {0, 4},
                  unit2));
  add(FamilyId::M4Case1General, "M4Case1General", "4.2.1", 2,
      "m=4 anti-CR case, five-state ODE in (b11, b12, s, theta0, theta), rho = c0 z2",
      with_common({{"c0", -1.0},
                   {"b11", 0.8},
                   {"b12", 0.0},
                   {"s", nullptr},
                   {"delta", 0.01},
                   {"theta0", 0.0},
                   {"theta", 0.0},
                   {"mu", 0.0},
                   {"f1", exp_cos()},
                   {"f2", exp_sin()}},
                  {0, 10}, gerstner_box));
  add(FamilyId::M4Case1Gerstner, "M4Case1Gerstner", "4.2.1", 2,
      "stretched Gerstner wave at the equilibrium (c1, 0, mu0, 0, 0), rho = c0 z2",
      with_common({{"c0", -1.0}, {"c1", 0.8}, {"mu0", nullptr}, {"mu0_scale", 1.0}, {"f1", exp_cos()}, {"f2", exp_sin()}},
                  {0, 6}, gerstner_box));
  add(FamilyId::M4Case2Explicit, "M4Case2Explicit", "4.2.2", 2,
      "m=4, v = (z1, z2, f1(z1), f2(z2)), explicit power-law A, rho = c0 z2",
      with_common({{"c0", 1.0}, {"f1", sine(0.3)}, {"f2", poly({0, 0, 0.2})}}, {1, 4}, unit2));
  add(FamilyId::M4Case3Explicit, "M4Case3Explicit", "4.2.3", 2,
      "m=4 parabolic case, explicit A with fractional powers, rho = c1 z1",
      with_common({{"c1", 0.5}, {"f1", sine(0.3)}, {"f2", poly({0, 1})}}, {1, 4}, unit2));
  add(FamilyId::M4Case4Quadrature, "M4Case4Quadrature", "4.2.4", 2,
      "m=4, v = (z1, z2, f1(z2), f2(z2)), b2..b4 by quadrature, rho = c0 f2(z2)",
      with_common({{"b1", trig(1, 0, 0.2)},
                   {"theta", trig(0, 1, 0.3)},
                   {"c0", -1.0},
                   {"c12", 0.0},
                   {"c13", 0.3},
                   {"c14", 0.2},
                   {"k2", 0.0},
                   {"k3", 0.0},
                   {"k4", 0.0},
                   {"f1", sine(0.3)},
                   {"f2", wavy_line}},
                  {0, 4}, unit2));
  add(FamilyId::M3QRShearLinearRho, "M3QRShearLinearRho", "5.1", 3,
      "m=3, A = R B with arbitrary rotation R, shears by quadrature, rho = c0 z3",
      with_common({{"b11", trig(1, 0, 0.2)},
                   {"b22", trig(1, 0, 0.1, 1.0, pi / 2)},
                   {"theta", trig(0, 0.5, 0.2)},
                   {"psi", trig(0, 0, 0.3)},
                   {"c0", -1.0},
                   {"c13", 0.3},
                   {"c23", 0.2},
                   {"k12", 0.0},
                   {"k23", 0.0},
                   {"k13", 0.0}},
                  {0, 4}, unit3));
  add(FamilyId::M3QRShearVerticalRho, "M3QRShearVerticalRho", "5.1", 3,
      "m=3, A = Rz(theta) B, shears by quadrature, rho = f(z3) + c0 z2",
      with_common({{"b11", trig(1, 0, 0.2)},
                   {"b22", trig(1, 0, 0.1, 1.0, pi / 2)},
                   {"theta", trig(0, 0.5, 0.2)},
                   {"c0", -0.7},
                   {"c13", 0.3},
                   {"c23", 0.2},
                   {"f", cosine(0.5)},
                   {"k12", 0.0},
                   {"k23", 0.0},
                   {"k13", 0.0}},
                  {0, 4}, unit3));
  add(FamilyId::M3Columnar, "M3Columnar", "5.1", 3,
      "m=3 columnar branch extended by a1 f1 + a2 f2 with a = 1/(b11 b22), rho = c0 z3",
      with_common({{"b11", trig(1, 0, 0.2)},
                   {"b22", shear_b22},
                   {"theta", trig(0, 0.5, 0.0)},
                   {"c0", -1.0},
                   {"k12", 0.0},
                   {"f1", sin_cos()},
                   {"f2", poly_of(0, {0, 0, 1})}},
                  {0, 4}, unit3));
  add(FamilyId::M5Elliptic, "M5Elliptic", "5.2", 3, "m=5 elliptic (anti-CR) family, phi3 = theta' z3, rho = rho(z3)",
      with_common({{"theta", trig(0, 1, 0.2)},
                   {"k1", 1.0},
                   {"k2", -1.0},
                   {"f1", exp_cos()},
                   {"f2", exp_sin()},
                   {"rho", poly_of(2, {0, 0, 1})}},
                  {0, 4}, pair3));
  add(FamilyId::M5Hyperbolic, "M5Hyperbolic", "5.2", 3, "m=5 hyperbolic family, v = (z, f1(z1), f2(z2)), rho = rho(z3)",
      with_common({{"theta", trig(0, 1, 0.2)}, {"f1", sine(0.3)}, {"f2", cosine(0.2)}, {"rho", poly_of(2, {0, 0, 1})}},
                  {0, 3}, unit3));
  add(FamilyId::M5Parabolic, "M5Parabolic", "5.2", 3,
      "m=5 parabolic family, v = (z, f1(z1) + z2 f2'(z1), f2(z1)), rho = rho(z3)",
      with_common({{"theta", trig(0, 1, 0.2)},
                   {"f1", {{"name", "sum"}, {"terms", {poly({0, 1}), sine(0.1)}}}},
                   {"f2", cosine(0.2)},
                   {"rho", poly_of(2, {0, 0, 1})}},
                  {0, 3}, unit3));
  add(FamilyId::M5EllipticExtended, "M5EllipticExtended", "5.2", 3,
      "elliptic m=5 family extended by a1 f3 + a2 f4 with a = theta', rho = c0 z3",
      with_common({{"theta", trig(0, 1, 0.2)},
                   {"k1", 1.0},
                   {"k2", -1.0},
                   {"c0", -1.0},
                   {"f1", exp_cos()},
                   {"f2", exp_sin()},
                   {"f3", sin_cos()},
                   {"f4", poly_of(0, {0, 0, 1})}},
                  {0, 4}, pair3));
  add(FamilyId::M6Case1, "M6Case1", "5.3", 3, "m=6 case 1, mu from k2^2 mu'^3 = k2 c5 cos mu - k2 c6 sin mu + c56",
      with_common({{"c12", -1.2},
                   {"c13", 0.3},
                   {"c23", 0.2},
                   {"c5", 0.1},
                   {"c6", 0.05},
                   {"c56", 2.0},
                   {"mu0", 0.2},
                   {"theta0", 0.0},
                   {"f1", sine(0.3)},
                   {"f2", exp_cos()},
                   {"f3", exp_sin()}},
                  {0, 4}, m6box));
  add(FamilyId::M6Case1Example, "M6Case1Example", "5.3", 3,
      "m=6 case 1 periodic example, 8 theta'^3 + c5 cos 2theta + c6 sin 2theta + c56 = 0",
      with_common({{"c5", 0.1},
                   {"c6", 0.0},
                   {"c56", 2.0},
                   {"theta0", 0.0},
                   {"f1", sine(0.3)},
                   {"f2", exp_cos()},
                   {"f3", exp_sin()}},
                  {0, 25}, m6box));
  add(FamilyId::M6Case2Quadrature, "M6Case2Quadrature", "5.4", 3,
      "m=6 case 2 from an arbitrary monotone l3 by quadrature, rho = c1 z3 + c2 f2(z2)",
      with_common({{"l3", trig(1, 0.5, 0.1)},
                   {"c1", -0.5},
                   {"c2", 0.3},
                   {"c16", 1.0},
                   {"c24", -1.0},
                   {"k0", 5.0},
                   {"k1", 1.0},
                   {"f1", sine(0.3)},
                   {"f2", wavy_line},
                   {"f3", sine(0.25)}},
                  {0, 3}, unit3));
  add(FamilyId::M6Case2Explicit, "M6Case2Explicit", "5.4", 3,
      "m=6 case 2 with a3 = 1, l3 = -c2/N^2 + k2 cos Nt + k3 sin Nt, rho = -N^2 z3 + c2 f2(z2)",
      with_common({{"N", 1.0},
                   {"c2", -1.0},
                   {"k2", 0.5},
                   {"k3", 0.0},
                   {"c16", 1.0},
                   {"c24", -1.0},
                   {"k1", 1.0},
                   {"f1", sine(0.3)},
                   {"f2", wavy_line},
                   {"f3", sine(0.25)}},
                  {0, 6}, unit3));
  return c;
}

std::string json_type(const Json& v) {
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  if (v.is_boolean()) return "boolean";
  return "null";
}

}  // namespace

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> catalog = make_catalog();
  return catalog;
}

const FamilyInfo& family_info(std::string_view name) {
  for (const auto& f : family_catalog()) {
    if (f.name == name) return f;
  }
  throw Error(ErrorKind::InvalidParams, "unknown family '" + std::string(name) + "'");
}

const FamilyInfo& family_info(FamilyId id) {
  for (const auto& f : family_catalog()) {
    if (f.id == id) return f;
  }
  throw Error(ErrorKind::InvalidParams, "unknown family id");
}

std::string_view to_string(FamilyId id) { return family_info(id).name; }

Json family_schema(const FamilyInfo& info) {
  Json props = Json::object();
  for (auto it = info.defaults.begin(); it != info.defaults.end(); ++it) {
    const Json& v = it.value();
    Json entry;
    if (it.key() == "gauge") {
      entry = {{"type", {"null", "array"}}, {"items", {{"type", "number"}}}};
    } else if (it.key() == "t_window") {
      entry = {{"type", "array"}, {"items", {{"type", "number"}}}, {"minItems", 2}, {"maxItems", 2}};
    } else if (it.key() == "domain") {
      entry = {{"type", "object"}, {"required", {"lo", "hi"}}};
    } else if (v.is_null()) {
      entry = {{"type", {"null", "number"}}};
    } else if (v.is_object() && v.contains("name")) {
      // Time functions may also be given as bare numbers.
      entry = {{"type", {"object", "number"}}, {"required", {"name"}}};
    } else {
      entry = {{"type", json_type(v)}};
    }
    entry["default"] = v;
    props[it.key()] = entry;
  }
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", info.name},
          {"type", "object"},
          {"additionalProperties", false},
          {"properties", props}};
}

std::string schema_problem(const Json& schema, const Json& params) {
  if (!params.is_object()) return "parameters must be an object";
  const Json& props = schema.at("properties");
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (!props.contains(it.key())) return "unknown parameter '" + it.key() + "'";
    const Json& rule = props.at(it.key());
    const std::string type = json_type(it.value());
    const Json& allowed = rule.at("type");
    const bool ok = allowed.is_string() ? allowed.get<std::string>() == type
                                        : std::find(allowed.begin(), allowed.end(), Json(type)) != allowed.end();
    if (!ok) return "parameter '" + it.key() + "' has type " + type;
    if (it.value().is_object() && rule.contains("required")) {
      for (const auto& r : rule.at("required")) {
        if (!it.value().contains(r.get<std::string>())) {
          return "parameter '" + it.key() + "' lacks '" + r.get<std::string>() + "'";
        }
      }
    }
    if (rule.contains("items") && it.value().is_array()) {
      for (const auto& x : it.value()) {
        if (!x.is_number()) return "parameter '" + it.key() + "' must hold numbers";
      }
      if (rule.contains("minItems") && it.value().size() < rule.at("minItems").get<std::size_t>()) {
        return "parameter '" + it.key() + "' is too short";
      }
      if (rule.contains("maxItems") && it.value().size() > rule.at("maxItems").get<std::size_t>()) {
        return "parameter '" + it.key() + "' is too long";
      }
    }
  }
  return {};
}

Json family_params(std::string_view name, const Json& overrides) {
  const FamilyInfo& info = family_info(name);
  Json p = params::overlay(info.defaults, overrides, info.name);
  const std::string problem = schema_problem(family_schema(info), p);
  if (!problem.empty()) throw Error(ErrorKind::InvalidParams, info.name + ": " + problem);
  return p;
}

FlowCandidate build_family(std::string_view name, const Json& overrides) {
  const FamilyInfo& info = family_info(name);
  const Json p = family_params(name, overrides);
  switch (info.id) {
    case FamilyId::Columnar2D:
    case FamilyId::Columnar3DExt:
      return build_columnar(info.id, p);
    case FamilyId::M2Triangular:
    case FamilyId::M2Rotational:
      return build_2d_m2(info.id, p);
    case FamilyId::M4Case1General:
    case FamilyId::M4Case1Gerstner:
    case FamilyId::M4Case2Explicit:
    case FamilyId::M4Case3Explicit:
    case FamilyId::M4Case4Quadrature:
      return build_2d_m4(info.id, p);
    case FamilyId::M3QRShearLinearRho:
    case FamilyId::M3QRShearVerticalRho:
    case FamilyId::M3Columnar:
      return build_3d_m3(info.id, p);
    case FamilyId::M5Elliptic:
    case FamilyId::M5Hyperbolic:
    case FamilyId::M5Parabolic:
    case FamilyId::M5EllipticExtended:
      return build_3d_m5(info.id, p);
    case FamilyId::M6Case1:
    case FamilyId::M6Case1Example:
    case FamilyId::M6Case2Quadrature:
    case FamilyId::M6Case2Explicit:
      return build_3d_m6(info.id, p);
  }
  throw Error(ErrorKind::InvalidParams, "unhandled family");
}

FlowCandidate candidate_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidParams, "candidate document must be an object");
  const std::string name = params::text(doc, "family", params::text(doc, "family_id", ""));
  if (name.empty()) throw Error(ErrorKind::InvalidParams, "candidate document needs 'family'");
  const Json overrides = doc.contains("params") ? doc.at("params") : Json::object();
  return build_family(name, overrides);
}

double stability_alpha() {
  // y^4 solves u^2 - 12 u + 3 = 0; the smaller root gives the smaller y.
  const double u = (12.0 - std::sqrt(132.0)) / 2.0;
  return std::pow(u, 0.25);
}

double gerstner_mu0_squared(double c0, double c1) { return c0 * c1 / (std::pow(c1, 4) - 1.0); }

DenseSolution integrate_case1_general(double c0, const std::array<double, 5>& initial, Window window,
                                      const OdeTolerance& tol) {
  const OdeRhs rhs = [c0](double, std::span<const double> y, std::span<double> dy) {
    case1_general_rhs<double>(c0, y, dy);
  };
  const std::vector<EventRule> events = {{EventKind::BlowUp, 0, 1e-6}, {EventKind::BlowUp, 2, 1e-6}};
  return integrate_ivp(rhs, initial, window, tol, events);
}

// ------------------------------------------------------------------ support

namespace detail {

Window window_of(const Json& p) {
  const auto w = params::numbers(p, "t_window", {});
  if (w.size() != 2 || !(w[0] < w[1])) throw Error(ErrorKind::InvalidParams, "t_window must be [lo, hi] with lo < hi");
  return {w[0], w[1]};
}

TimeFunction time_fn(const Json& p, const char* key) {
  if (!params::has(p, key)) throw Error(ErrorKind::InvalidParams, std::string("parameter '") + key + "' is required");
  return TimeFunction::from_json(p.at(key));
}

SpatialFunction field(const Json& p, const char* key) { return SpatialFunction::from_json(params::object(p, key)); }

Profile profile(const Json& p, const char* key) { return Profile::from_json(params::object(p, key)); }

SpatialFunction profile_field(const Json& p, const char* key, int var) {
  return SpatialFunction::of_profile(profile(p, key), var);
}

std::vector<double> scan_times(Window w, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(w.lo + w.length() * k / (count - 1));
  return out;
}

void require_nonvanishing(const ScalarSeries& f, Window w, ErrorKind kind, const std::string& what, bool positive) {
  double first = 0.0;
  bool have = false;
  for (double t : scan_times(w)) {
    const double v = f(Jet::variable(t)).value();
    if (!std::isfinite(v) || std::abs(v) < 1e-10 || (positive && v < 0.0) || (have && (v > 0) != (first > 0))) {
      throw Error(kind, what + " vanishes or changes sign near t=" + std::to_string(t));
    }
    if (!have) first = v;
    have = true;
  }
}

std::shared_ptr<const Antiderivative> accumulate(Antiderivative::Integrand f, Window w, double k) {
  return std::make_shared<const Antiderivative>(std::move(f), w.lo, w, k);
}

Running running(ScalarSeries f, Window w, double k) {
  auto F = accumulate([f](double t) { return f(Jet::variable(t)).value(); }, w, k);
  return {std::move(F), std::move(f)};
}

void rotate_xy(const Jet& theta, TimeJets& j) {
  Jet s, c;
  sincos(theta, s, c);
  for (int col = 0; col < j.cols; ++col) {
    const Jet r0 = j.at(0, col);
    const Jet r1 = j.at(1, col);
    j.at(0, col) = c * r0 - s * r1;
    j.at(1, col) = s * r0 + c * r1;
  }
}

ColumnarColumns::ColumnarColumns(ScalarSeries a, double c0, Window w) : window_(w) {
  require_nonvanishing(a, w, ErrorKind::DegenerateStretch, "stretch a(t)");
  ScalarSeries q = [a, c0](const Jet& t) {
    const Jet av = a(t);
    return -(av.differentiate().differentiate() + c0) / av;
  };
  q0_ = q(Jet::variable(w.lo)).value();
  bool constant = true;
  for (double t : scan_times(w, 65)) {
    const double qt = q(Jet::variable(t)).value();
    if (!std::isfinite(qt)) throw Error(ErrorKind::DegenerateStretch, "q is undefined at t=" + std::to_string(t));
    if (std::abs(qt - q0_) > 1e-12 * std::max(1.0, std::abs(q0_))) constant = false;
  }
  if (!constant) {
    auto pair = std::make_shared<const FundamentalPair>(solve_sl(q, w));
    window_ = pair->window();
    if (window_.hi < w.hi - 1e-9 * w.length()) {
      throw Error(ErrorKind::IntegrationWindowExceeded, "Sturm-Liouville solutions stop early at t=" +
                                                            std::to_string(window_.hi));
    }
    pair_ = std::move(pair);
  }
}

std::array<Jet, 4> ColumnarColumns::jets(double t) const {
  if (pair_) return {pair_->solution(0, t), pair_->solution(1, t), pair_->integral(0, t), pair_->integral(1, t)};
  const Jet T = Jet::variable(t);
  const double t0 = window_.lo;
  if (q0_ > 0.0) {
    const double w = std::sqrt(q0_);
    return {cos(w * T), sin(w * T), (sin(w * T) - std::sin(w * t0)) / w, (std::cos(w * t0) - cos(w * T)) / w};
  }
  if (q0_ < 0.0) {
    const double k = std::sqrt(-q0_);
    return {cosh(k * T), sinh(k * T), (sinh(k * T) - std::sinh(k * t0)) / k, (cosh(k * T) - std::cosh(k * t0)) / k};
  }
  return {Jet(1.0), T, T - t0, (T * T - t0 * t0) * 0.5};
}

FlowCandidate finish(FamilyId id, TimeMatrix A, SpatialBasis v, DensityField rho, const Json& p) {
  const FamilyInfo& info = family_info(id);
  const Json& d = params::object(p, "domain");
  const auto lo = params::numbers(d, "lo", {});
  const auto hi = params::numbers(d, "hi", {});
  if (static_cast<int>(lo.size()) != info.n || lo.size() != hi.size()) {
    throw Error(ErrorKind::InvalidParams, info.name + ": domain must have " + std::to_string(info.n) + " bounds");
  }
  Box box{Eigen::Map<const Vec>(lo.data(), info.n), Eigen::Map<const Vec>(hi.data(), info.n)};
  for (int i = 0; i < info.n; ++i) {
    if (!(box.lo[i] < box.hi[i])) throw Error(ErrorKind::InvalidParams, info.name + ": empty domain");
  }
  Window w = window_of(p);
  const Window valid = A.validity();
  w.hi = std::min(w.hi, valid.hi);
  w.lo = std::max(w.lo, valid.lo);
  FlowCandidate c = make_candidate(info.name, std::move(A), std::move(v), std::move(rho), box, w, p);
  if (params::has(p, "gauge")) {
    const auto g = params::numbers(p, "gauge", {});
    if (static_cast<int>(g.size()) != c.m()) {
      throw Error(ErrorKind::InvalidParams, info.name + ": gauge needs " + std::to_string(c.m()) + " numbers");
    }
    c = with_gauge_shift(c, Eigen::Map<const Vec>(g.data(), c.m()));
  }
  return c;
}

}  // namespace detail

}  // namespace boussinesq
