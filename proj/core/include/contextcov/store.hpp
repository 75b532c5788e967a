#pragma once

#include "contextcov/constraint.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace contextcov {

/// Pretty-printed JSON with constraint ids in lexicographic order.
std::string serialize_store(const CheckStore& store);

/// Throws StoreError(malformed | unsupported_version).
CheckStore parse_store(std::string_view json_text);

/// Refuses (StoreError::invalid_descriptor) to write a store containing a
/// descriptor that fails validate_descriptor. Writes atomically.
void save_store(const CheckStore& store, const std::filesystem::path& path);

/// Throws StoreError(missing_file | malformed | unsupported_version).
CheckStore load_store(const std::filesystem::path& path);

} // namespace contextcov
