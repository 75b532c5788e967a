#pragma once

#include "contextcov/constraint.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

enum class ScopeKind { repo, diff, unstaged };

struct ScanScope {
    ScopeKind kind = ScopeKind::repo;
    std::string base = "HEAD"; // DIFF only

    static ScanScope repo() { return {}; }
    static ScanScope diff(std::string base) { return {ScopeKind::diff, std::move(base)}; }
    static ScanScope unstaged() { return {ScopeKind::unstaged, {}}; }
};

std::string_view to_string(ScopeKind kind);

/// Directories never scanned, whatever the ignore rules say.
bool is_skipped_path(std::string_view repo_relative);

/// Repo-relative source files (known extensions only), sorted. REPO uses the
/// git ignore rules when `root` is a work tree and a plain walk otherwise;
/// DIFF and UNSTAGED add untracked files and throw ScopeError outside git.
std::vector<std::string> resolve_scope(const std::filesystem::path& root, const ScanScope& scope);

struct Violation {
    ConstraintId rule_id;
    std::string file;
    int line = 1;
    int column = 1;
    EnforcementLevel severity = EnforcementLevel::warn;
    std::string message;
    std::optional<std::string> suggestion;
    std::string found; // abbreviated text of the offending node

    bool operator==(const Violation&) const = default;
};

struct LintResult {
    std::vector<Violation> violations; // sorted by (file, line, rule_id, column)
    std::vector<std::string> diagnostics;
    std::size_t files_scanned = 0;
};

/// Runs every enabled source check over `files` (repo-relative).
LintResult lint_files(const std::filesystem::path& root, const CheckStore& store,
                      const std::vector<std::string>& files, int workers = 4);

LintResult lint(const std::filesystem::path& root, const CheckStore& store, const ScanScope& scope,
                int workers = 4);

/// First line of a node's text; a block body collapses to "{...}".
std::string abbreviate_code(std::string_view text);

} // namespace contextcov
