#pragma once
// Strict readers for campaign documents; every violation is a ConfigError.

#include "dre/core/error.hpp"
#include "dre/core/rational.hpp"

#include "json.hpp"
#include <initializer_list>
#include <string>

namespace dre::dispatch::detail {

inline void allow_only(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ConfigError("unknown field '" + k + "' in " + what);
  }
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j[key];
}

inline std::string string_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw ConfigError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

/// Integer, decimal number or "p/q" string.
inline Rational rational_value(const nlohmann::json& v, const std::string& key) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number()) return parse_rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const std::exception&) {
  }
  throw ConfigError("field '" + key + "' must be a rational number");
}

inline Rational rational_field(const nlohmann::json& j, const char* key) { return rational_value(field(j, key), key); }

inline long long integer_field(const nlohmann::json& j, const char* key, long long min) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < min)
    throw ConfigError(std::string("field '") + key + "' must be an integer >= " + std::to_string(min));
  return v.get<long long>();
}

}  // namespace dre::dispatch::detail
