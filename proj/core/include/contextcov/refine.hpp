#pragma once

#include "contextcov/constraint.hpp"
#include "contextcov/markdown.hpp"
#include "contextcov/provider.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace contextcov {

struct RefinedSlice {
    Slice slice;
    std::string refined_text;
    bool is_constraint = false;
    std::string diagnostic; // set when the provider failed and the fallback ran
};

struct ProcessMeta {
    std::vector<std::string> binaries;
    EnforcementLevel level = EnforcementLevel::warn;
    std::string scope = "global";
};

struct SourceMeta {
    std::vector<Language> languages;
    std::string pattern_kind;
    EnforcementLevel severity = EnforcementLevel::warn;
};

enum class ArchRuleKind { dependency_direction, cycle_detection, boundary_enforcement };

std::string_view to_string(ArchRuleKind kind);

struct ArchDetMeta {
    ArchRuleKind rule_kind = ArchRuleKind::boundary_enforcement;
};

struct ArchSemMeta {
    std::string principle_text;
};

using RoutingMeta = std::variant<ProcessMeta, SourceMeta, ArchDetMeta, ArchSemMeta>;

struct RoutingDecision {
    Domain domain = Domain::arch_semantic;
    RoutingMeta metadata = ArchSemMeta{};
    std::string diagnostic;
};

/// Command-line tools the router recognises, plus groups of interchangeable
/// tools: preferring one member blocks the others.
struct BinaryTables {
    std::vector<std::string> known;
    std::vector<std::vector<std::string>> alternatives;

    static const BinaryTables& defaults();

    bool is_known(std::string_view name) const;
    const std::vector<std::string>* group_of(std::string_view name) const;
};

struct ProcessTarget {
    std::string binary;
    std::vector<std::string> argv_pattern;

    bool operator==(const ProcessTarget&) const = default;
};

/// Binaries a process constraint forbids. Negated mentions are targets as
/// written; sanctioned mentions expand to their alternatives.
struct ProcessAnalysis {
    std::vector<ProcessTarget> targets;
    std::vector<std::string> preferred;
    std::string instead; // "instead" phrasing lifted from the text, if any
};

ProcessAnalysis analyze_process(std::string_view text, const BinaryTables& tables);

/// Word-boundary, case-insensitive scan for imperative or modal markers.
bool has_constraint_marker(std::string_view text);

/// `path/` - description, under a heading mentioning architecture or structure.
bool is_architecture_listing(const Slice& slice);

/// The leading path of an architecture listing item, e.g. "src/vs/base/".
std::string listing_path(std::string_view content_text);

/// BLOCK when the text contains MANDATORY, NEVER or MUST NOT (any case).
EnforcementLevel level_for(std::string_view original_text);

std::string deterministic_refinement(const Slice& slice);

/// Canonical source-pattern shape recognised in the text. `kind` is one of
/// promise_then, paren_arrow_param, prefer_arrow_function, forbidden_type,
/// forbidden_keyword, forbidden_call, forbidden_identifier or unknown; `token`
/// is the forbidden name for the forbidden_* kinds.
struct SourceShape {
    std::string kind = "unknown";
    std::string token;
};

SourceShape classify_source_shape(std::string_view text);

RefinedSlice refine(const Slice& slice, const ProviderConfig& cfg);

RoutingDecision deterministic_route(const RefinedSlice& refined, const BinaryTables& tables);

/// Remote mode validates the provider reply against the routing schema and
/// falls back to the deterministic cascade on any deviation.
RoutingDecision route(const RefinedSlice& refined, const ProviderConfig& cfg,
                      const BinaryTables& tables = BinaryTables::defaults());

} // namespace contextcov
