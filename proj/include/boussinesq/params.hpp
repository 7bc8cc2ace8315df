#pragma once

// Typed access to JSON parameter documents. Every accessor reports a wrong
// type or a missing required key as ErrorKind::InvalidParams.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace boussinesq::params {

using Json = nlohmann::json;

double number(const Json& p, std::string_view key, double fallback);
double number(const Json& p, std::string_view key);
int integer(const Json& p, std::string_view key, int fallback);
std::string text(const Json& p, std::string_view key, const std::string& fallback);
std::vector<double> numbers(const Json& p, std::string_view key, const std::vector<double>& fallback);
const Json& object(const Json& p, std::string_view key);
bool has(const Json& p, std::string_view key);

/// defaults overlaid with overrides; keys absent from defaults are rejected.
Json overlay(const Json& defaults, const Json& overrides, std::string_view context);

}  // namespace boussinesq::params
