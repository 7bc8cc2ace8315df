#include "boussinesq/params.hpp"

#include "boussinesq/errors.hpp"

namespace boussinesq::params {

namespace {

[[noreturn]] void bad(std::string_view key, const std::string& what) {
  throw Error(ErrorKind::InvalidParams, "parameter '" + std::string(key) + "' " + what);
}

}  // namespace

bool has(const Json& p, std::string_view key) {
  return p.is_object() && p.contains(std::string(key)) && !p.at(std::string(key)).is_null();
}

double number(const Json& p, std::string_view key, double fallback) {
  if (!has(p, key)) return fallback;
  return number(p, key);
}

double number(const Json& p, std::string_view key) {
  if (!has(p, key)) bad(key, "is required");
  const Json& v = p.at(std::string(key));
  if (!v.is_number()) bad(key, "must be a number");
  return v.get<double>();
}

int integer(const Json& p, std::string_view key, int fallback) {
  if (!has(p, key)) return fallback;
  const Json& v = p.at(std::string(key));
  if (!v.is_number_integer()) bad(key, "must be an integer");
  return v.get<int>();
}

std::string text(const Json& p, std::string_view key, const std::string& fallback) {
  if (!has(p, key)) return fallback;
  const Json& v = p.at(std::string(key));
  if (!v.is_string()) bad(key, "must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& p, std::string_view key, const std::vector<double>& fallback) {
  if (!has(p, key)) return fallback;
  const Json& v = p.at(std::string(key));
  if (!v.is_array()) bad(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(key, "must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const Json& object(const Json& p, std::string_view key) {
  if (!has(p, key)) bad(key, "is required");
  const Json& v = p.at(std::string(key));
  if (!v.is_object()) bad(key, "must be an object");
  return v;
}

Json overlay(const Json& defaults, const Json& overrides, std::string_view context) {
  if (overrides.is_null()) return defaults;
  if (!overrides.is_object()) {
    throw Error(ErrorKind::InvalidParams, std::string(context) + ": parameters must be a JSON object");
  }
  Json out = defaults;
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (!defaults.contains(it.key())) {
      throw Error(ErrorKind::InvalidParams, std::string(context) + ": unknown parameter '" + it.key() + "'");
    }
    out[it.key()] = it.value();
  }
  return out;
}

}  // namespace boussinesq::params
