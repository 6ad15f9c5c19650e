#pragma once

// Internal helpers for reading nlohmann::json documents with engine errors.

#include <cmath>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vigil/errors.hpp"

namespace vigil::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann counts bytes from 1; report the 0-based offset of the bad byte.
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw ParseError("parse error at byte " + std::to_string(offset) + ": " + e.what(),
                     offset);
  } catch (const json::out_of_range& e) {
    // Number literals outside binary64 range (e.g. 1e999).
    throw ValidationError(std::string("non-finite number: ") + e.what());
  }
}

inline const json& require(const json& obj, const char* key,
                           std::string_view context) {
  if (!obj.is_object()) {
    throw SchemaError(std::string(context) + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(std::string(context) + ": missing key '" + key + "'");
  }
  return *it;
}

inline double as_number(const json& v, std::string_view context) {
  if (!v.is_number()) {
    throw SchemaError(std::string(context) + ": expected a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ValidationError(std::string(context) + ": non-finite value");
  }
  return d;
}

inline std::int64_t as_integer(const json& v, std::string_view context) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw SchemaError(std::string(context) + ": expected an integer");
}

inline const json& as_array(const json& v, std::string_view context) {
  if (!v.is_array()) {
    throw SchemaError(std::string(context) + ": expected an array");
  }
  return v;
}

}  // namespace vigil::detail
