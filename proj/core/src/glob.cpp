#include "contextcov/glob.hpp"

#include <vector>

namespace contextcov {

namespace {

class GlobMatcher {
public:
    GlobMatcher(std::string_view pattern, std::string_view path)
        : p_(pattern), s_(path), memo_((pattern.size() + 1) * (path.size() + 1), -1) {}

    bool run() { return match(0, 0); }

private:
    bool match(std::size_t pi, std::size_t si) {
        signed char& cell = memo_[pi * (s_.size() + 1) + si];
        if (cell < 0) cell = compute(pi, si) ? 1 : 0;
        return cell == 1;
    }

    bool compute(std::size_t pi, std::size_t si) {
        if (pi == p_.size()) return si == s_.size();
        if (p_[pi] == '*') {
            if (pi + 1 < p_.size() && p_[pi + 1] == '*') {
                const std::size_t rest = pi + 2;
                // `**/` also matches zero directories.
                if (rest < p_.size() && p_[rest] == '/' && match(rest + 1, si)) return true;
                for (std::size_t k = si; k <= s_.size(); ++k) {
                    if (match(rest, k)) return true;
                }
                return false;
            }
            for (std::size_t k = si; k <= s_.size(); ++k) {
                if (match(pi + 1, k)) return true;
                if (k == s_.size() || s_[k] == '/') break;
            }
            return false;
        }
        if (si == s_.size()) return false;
        if (p_[pi] == '?') return s_[si] != '/' && match(pi + 1, si + 1);
        return p_[pi] == s_[si] && match(pi + 1, si + 1);
    }

    std::string_view p_;
    std::string_view s_;
    std::vector<signed char> memo_;
};

} // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    if (!pattern.empty() && pattern.back() == '/') {
        return path.substr(0, pattern.size()) == pattern || path == pattern.substr(0, pattern.size() - 1);
    }
    return GlobMatcher(pattern, path).run();
}

bool argv_matches(std::span<const std::string> pattern, std::span<const std::string> argv) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] == "**" && i + 1 == pattern.size()) return true;
        if (i >= argv.size()) return false;
        if (pattern[i] != "*" && pattern[i] != argv[i]) return false;
    }
    return true;
}

bool valid_argv_pattern(std::span<const std::string> pattern, std::string* diagnostic) {
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i].empty()) {
            if (diagnostic) *diagnostic = "argv_pattern token " + std::to_string(i) + " is empty";
            return false;
        }
        if (pattern[i] == "**" && i + 1 != pattern.size()) {
            if (diagnostic) *diagnostic = "'**' is only allowed as the last argv_pattern token";
            return false;
        }
    }
    return true;
}

} // namespace contextcov
