#include "boussinesq/time_function.hpp"

#include <vector>

#include "boussinesq/errors.hpp"
#include "boussinesq/params.hpp"

namespace boussinesq {

TimeFunction::TimeFunction() : TimeFunction(constant(0.0)) {}

TimeFunction::TimeFunction(nlohmann::json desc, Series fn, std::optional<double> constant)
    : desc_(std::move(desc)), fn_(std::move(fn)), constant_(constant) {}

TimeFunction TimeFunction::constant(double value) {
  return TimeFunction({{"name", "const"}, {"value", value}}, [value](const Jet&) { return Jet(value); }, value);
}

TimeFunction TimeFunction::from_json(const nlohmann::json& desc) {
  if (desc.is_number()) return constant(desc.get<double>());
  if (!desc.is_object()) throw Error(ErrorKind::InvalidParams, "time function must be an object or a number");
  const std::string name = params::text(desc, "name", "");
  if (name == "const") return constant(params::number(desc, "value"));
  if (name == "trig") {
    const double a = params::number(desc, "offset", 0.0);
    const double b = params::number(desc, "slope", 0.0);
    const double c = params::number(desc, "amp", 0.0);
    const double w = params::number(desc, "freq", 1.0);
    const double p = params::number(desc, "phase", 0.0);
    return {desc, [=](const Jet& t) { return a + b * t + c * sin(w * t + p); }};
  }
  if (name == "exp") {
    const double a = params::number(desc, "offset", 0.0);
    const double c = params::number(desc, "amp", 1.0);
    const double r = params::number(desc, "rate", 1.0);
    return {desc, [=](const Jet& t) { return a + c * exp(r * t); }};
  }
  if (name == "poly") {
    const auto coeffs = params::numbers(desc, "coeffs", {0.0});
    return {desc, [coeffs](const Jet& t) {
              Jet acc(0.0);
              for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
              return acc;
            }};
  }
  if (name == "power") {
    const double c = params::number(desc, "coef", 1.0);
    const double p = params::number(desc, "exponent");
    const double s = params::number(desc, "shift", 0.0);
    return {desc, [=](const Jet& t) { return c * pow(t + s, p); }};
  }
  if (name == "pow") {
    const TimeFunction base = from_json(params::object(desc, "base"));
    const double p = params::number(desc, "exponent");
    return {desc, [base, p](const Jet& t) { return pow(base(t), p); }};
  }
  if (name == "rescaled") {
    const TimeFunction base = from_json(params::object(desc, "base"));
    const double sigma = params::number(desc, "sigma");
    if (sigma == 0.0) throw Error(ErrorKind::InvalidParams, "rescaled time function needs sigma != 0");
    return {desc, [base, sigma](const Jet& t) { return base(sigma * t) / sigma; }};
  }
  if (name == "sum" || name == "product") {
    const bool sum = name == "sum";
    const char* key = sum ? "terms" : "factors";
    if (!desc.contains(key) || !desc.at(key).is_array()) {
      throw Error(ErrorKind::InvalidParams, std::string("time function '") + name + "' needs an array '" + key + "'");
    }
    std::vector<TimeFunction> parts;
    for (const auto& s : desc.at(key)) parts.push_back(from_json(s));
    return {desc, [parts, sum](const Jet& t) {
              Jet acc(sum ? 0.0 : 1.0);
              for (const auto& f : parts) acc = sum ? acc + f(t) : acc * f(t);
              return acc;
            }};
  }
  throw Error(ErrorKind::InvalidParams, "unknown time function '" + name + "'");
}

}  // namespace boussinesq
