#pragma once

// nlohmann/json conversions for the store schema. Private to the library.

#include "contextcov/constraint.hpp"

#include <json.hpp>

namespace contextcov::codec {

nlohmann::json descriptor_to_json(const CheckDescriptor& check);

/// Throws StoreError(malformed) describing the first schema violation; `where`
/// prefixes the message.
CheckDescriptor descriptor_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const ConstraintId& id, const nlohmann::json& j);

std::string require_string(const nlohmann::json& j, const char* key, const std::string& where);
std::vector<std::string> require_strings(const nlohmann::json& j, const char* key, const std::string& where);

} // namespace contextcov::codec
