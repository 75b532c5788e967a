#pragma once

#include <span>
#include <string>
#include <string_view>

namespace contextcov {

/// Path glob over '/'-separated repo-relative paths: `**` spans directories,
/// `*` and `?` stay within one segment. A pattern ending in '/' matches the
/// directory and everything below it.
bool glob_match(std::string_view pattern, std::string_view path);

/// Argument-vector pattern: P matches A iff |P| <= |A| and each P[i] matches
/// A[i], where `*` matches any one token and a trailing `**` matches any
/// remainder. An empty pattern matches every invocation.
bool argv_matches(std::span<const std::string> pattern, std::span<const std::string> argv);

/// `**` may only appear as the final token; tokens must be non-empty.
bool valid_argv_pattern(std::span<const std::string> pattern, std::string* diagnostic = nullptr);

} // namespace contextcov
