#pragma once

// Schema helpers shared by the JSON loaders. Every failure names the JSON
// path of the offending field.

#include <string>

#include <json.hpp>

#include "bmfix/error.hpp"

namespace bmfix::detail {

inline std::string child_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] inline void schema_error(const std::string& path, const std::string& msg) {
  throw InvalidInput("schema error at '" + path + "': " + msg);
}

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key,
                                     const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(child_path(path, key), "missing field '" + key + "'");
  return *it;
}

inline double get_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

inline long long get_integer(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long long>();
}

inline std::size_t get_count(const nlohmann::json& j, const std::string& path) {
  auto v = get_integer(j, path);
  if (v < 0) schema_error(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline const nlohmann::json& get_array(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

}  // namespace bmfix::detail
