#pragma once

#include "contextcov/arch.hpp"
#include "contextcov/constraint.hpp"
#include "contextcov/judge.hpp"
#include "contextcov/linter.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace contextcov {

// Text templates. Each returns complete lines, newline-terminated.

std::string render_blocked(const std::string& original_text, const std::string& suggestion);
std::string render_process_warning(const std::string& original_text, const std::string& suggestion);
std::string render_source_violation(const Violation& v, const std::string& original_text);
std::string render_arch_violation(const ArchViolation& v, const std::string& original_text);
std::string render_semantic_warning(const std::string& principle, const std::string& file,
                                    const std::string& explanation, const std::string& suggestion);

struct SemanticFinding {
    ConstraintId rule_id;
    std::string file;
    std::string principle;
    std::string explanation;
    std::string suggestion;
    std::optional<std::string> confidence;

    bool operator==(const SemanticFinding&) const = default;
};

struct DomainCounts {
    std::size_t checks_total = 0;
    std::size_t checks_triggered = 0;
    std::size_t violations = 0;

    bool operator==(const DomainCounts&) const = default;
};

/// Everything `check` found. Carries no timing so that the JSON form is
/// byte-stable over an unchanged tree.
struct RunReport {
    std::string scope = "repo";
    std::map<Domain, DomainCounts> counts; // all four domains
    std::vector<Violation> source;
    std::vector<ArchViolation> arch;
    std::vector<SemanticFinding> semantic;
    std::vector<std::string> diagnostics;
    std::size_t files_scanned = 0;

    std::size_t blocking() const;
    std::size_t total() const;
    /// 1 when anything blocks (or, under strict, when anything was found).
    int exit_code(bool strict) const;

    bool operator==(const RunReport&) const = default;
};

/// Assembles counts from the store and the findings.
RunReport make_run_report(const CheckStore& store, std::string scope, LintResult lint,
                          std::vector<ArchViolation> arch, const std::vector<JudgedRequest>& judged,
                          std::vector<std::string> diagnostics);

std::string run_report_to_json(const RunReport& report);
/// Throws Error on malformed input.
RunReport run_report_from_json(const std::string& text);

/// Findings in the text templates followed by a one-line summary.
std::string render_run_report_text(const RunReport& report, const CheckStore& store);

} // namespace contextcov
