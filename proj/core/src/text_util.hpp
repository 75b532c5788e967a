#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

std::string_view trim(std::string_view s);
std::string_view trim_right(std::string_view s);
std::string to_lower(std::string_view s);

/// Replaces every run of whitespace with one space and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string join(const std::vector<std::string_view>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

/// Case-insensitive search for `word` delimited by non-word characters.
bool contains_word(std::string_view haystack, std::string_view word);

/// Spans enclosed in single backticks, in order of appearance.
std::vector<std::string> backtick_spans(std::string_view s);

std::string escape_regex(std::string_view literal);

} // namespace contextcov
