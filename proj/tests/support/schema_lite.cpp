#include "schema_lite.hpp"

#include <cmath>

namespace spherecode::testing {
namespace {

using nlohmann::json;

bool matches_type(const json& instance, const std::string& type) {
  if (type == "object") return instance.is_object();
  if (type == "array") return instance.is_array();
  if (type == "string") return instance.is_string();
  if (type == "boolean") return instance.is_boolean();
  if (type == "null") return instance.is_null();
  if (type == "number") return instance.is_number();
  if (type == "integer") {
    if (instance.is_number_integer()) return true;
    if (instance.is_number_float()) {
      const double value = instance.get<double>();
      return std::nearbyint(value) == value;
    }
    return false;
  }
  return false;
}

void validate_node(const json& node, const json& instance,
                   const std::string& path, std::vector<std::string>& out) {
  if (node.contains("type")) {
    const json& type = node["type"];
    bool ok = false;
    if (type.is_string()) {
      ok = matches_type(instance, type.get<std::string>());
    } else if (type.is_array()) {
      for (const auto& option : type) {
        ok = ok || matches_type(instance, option.get<std::string>());
      }
    }
    if (!ok) {
      out.push_back(path + ": type mismatch, got " +
                    std::string(instance.type_name()));
      return;
    }
  }
  if (node.contains("enum")) {
    bool ok = false;
    for (const auto& option : node["enum"]) {
      ok = ok || option == instance;
    }
    if (!ok) {
      out.push_back(path + ": value not in enum");
    }
  }
  if (instance.is_object()) {
    if (node.contains("required")) {
      for (const auto& name : node["required"]) {
        if (!instance.contains(name.get<std::string>())) {
          out.push_back(path + ": missing required property '" +
                        name.get<std::string>() + "'");
        }
      }
    }
    const json props =
        node.contains("properties") ? node["properties"] : json::object();
    for (auto it = instance.begin(); it != instance.end(); ++it) {
      if (props.contains(it.key())) {
        validate_node(props[it.key()], it.value(), path + "." + it.key(), out);
      } else if (node.contains("additionalProperties") &&
                 node["additionalProperties"].is_boolean() &&
                 !node["additionalProperties"].get<bool>()) {
        out.push_back(path + ": unexpected property '" + it.key() + "'");
      }
    }
  }
  if (instance.is_array() && node.contains("items")) {
    for (std::size_t i = 0; i < instance.size(); ++i) {
      validate_node(node["items"], instance[i],
                    path + "[" + std::to_string(i) + "]", out);
    }
  }
}

}  // namespace

std::vector<std::string> schema_violations(const json& schema,
                                           const std::string& def,
                                           const json& instance) {
  std::vector<std::string> out;
  if (!schema.contains("$defs") || !schema["$defs"].contains(def)) {
    out.push_back("schema has no $defs entry named '" + def + "'");
    return out;
  }
  validate_node(schema["$defs"][def], instance, "$", out);
  return out;
}

}  // namespace spherecode::testing
