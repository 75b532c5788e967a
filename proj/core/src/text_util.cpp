#include "text_util.hpp"

#include <cctype>

namespace contextcov {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

} // namespace

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    return trim_right(s);
}

std::string_view trim_right(std::string_view s) {
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (char c : s) {
        if (is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) out += ' ';
        pending = false;
        out += c;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string join(const std::vector<std::string_view>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

bool contains_word(std::string_view haystack, std::string_view word) {
    if (word.empty()) return false;
    const std::string h = to_lower(haystack);
    const std::string w = to_lower(word);
    std::size_t pos = 0;
    while ((pos = h.find(w, pos)) != std::string::npos) {
        const bool left = pos == 0 || !is_word(h[pos - 1]);
        const std::size_t end = pos + w.size();
        const bool right = end >= h.size() || !is_word(h[end]);
        if (left && right) return true;
        ++pos;
    }
    return false;
}

std::vector<std::string> backtick_spans(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t open = s.find('`', pos);
        if (open == std::string_view::npos) break;
        std::size_t run = open;
        while (run < s.size() && s[run] == '`') ++run;
        const std::string_view fence = s.substr(open, run - open);
        std::size_t close = s.find(fence, run);
        if (close == std::string_view::npos) break;
        out.emplace_back(trim(s.substr(run, close - run)));
        pos = close + fence.size();
    }
    return out;
}

std::string escape_regex(std::string_view literal) {
    static constexpr std::string_view special = R"(\^$.|?*+()[]{}/)";
    std::string out;
    for (char c : literal) {
        if (special.find(c) != std::string_view::npos) out += '\\';
        out += c;
    }
    return out;
}

} // namespace contextcov
