#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace contextcov {

enum class Domain { process, source, arch_deterministic, arch_semantic };
enum class EnforcementLevel { block, warn };
enum class Language { python, typescript, javascript, go, rust };

std::string_view to_string(Domain domain);            // "PROCESS", "SOURCE", ...
std::string_view to_string(EnforcementLevel level);   // "block" | "warn"
std::string_view to_string(Language language);       // "python", "typescript", ...
std::optional<Domain> parse_domain(std::string_view text);
std::optional<EnforcementLevel> parse_level(std::string_view text);
std::optional<Language> parse_language(std::string_view text);

inline constexpr Domain kAllDomains[] = {Domain::process, Domain::source, Domain::arch_deterministic,
                                         Domain::arch_semantic};
inline constexpr Language kAllLanguages[] = {Language::python, Language::typescript, Language::javascript,
                                             Language::go, Language::rust};

/// 16 lowercase hex characters: the leading 64 bits of a SHA-256 digest.
class ConstraintId {
public:
    ConstraintId() = default;

    /// Accepts exactly 16 lowercase hex characters.
    static std::optional<ConstraintId> parse(std::string_view hex);

    const std::string& str() const { return hex_; }
    bool empty() const { return hex_.empty(); }

    auto operator<=>(const ConstraintId&) const = default;

private:
    explicit ConstraintId(std::string hex) : hex_(std::move(hex)) {}
    std::string hex_;
};

/// SHA-256 over `join(header_path, 0x1F) || 0x1E || content_text`, first 16 hex chars.
ConstraintId compute_constraint_id(const std::vector<std::string>& header_path, std::string_view content_text);

/// Identifier of the k-th (k >= 1) additional check synthesized from one
/// constraint; a pure function of the base identifier and k.
ConstraintId derived_constraint_id(const ConstraintId& base, int k);

// ── Check descriptors ─────────────────────────────────────────────────────

/// Command interception rule. `argv_pattern` tokens are literals, `*` (any
/// single token) or a trailing `**` (any remainder, including none).
struct ProcessRule {
    std::vector<std::string> binaries;
    std::vector<std::string> argv_pattern;
    EnforcementLevel action = EnforcementLevel::block;
    std::string message;
    std::string suggestion;
    std::string scope = "global";

    bool operator==(const ProcessRule&) const = default;
};

struct CapturePredicate {
    std::string capture;
    std::string regex;

    bool operator==(const CapturePredicate&) const = default;
};

/// Tree-sitter query run against every listed language. The reported
/// location is the `@violation` capture when present, else the first capture.
struct SourceRule {
    std::vector<Language> languages;
    std::string query;
    std::vector<CapturePredicate> capture_predicates;
    std::string message;
    EnforcementLevel severity = EnforcementLevel::warn;
    std::string suggestion; // may reference captures as {name}

    bool operator==(const SourceRule&) const = default;
};

/// Later layers may depend on earlier (or the same) layers, never the reverse.
struct LayerOrder {
    std::vector<std::string> layers;

    bool operator==(const LayerOrder&) const = default;
};

struct AllowedSubdirs {
    std::string parent_prefix;
    std::vector<std::string> allowed;

    bool operator==(const AllowedSubdirs&) const = default;
};

struct ForbiddenEdge {
    std::string from_glob;
    std::string to_glob;

    bool operator==(const ForbiddenEdge&) const = default;
};

struct NoCycles {
    std::string scope_glob = "**";

    bool operator==(const NoCycles&) const = default;
};

using ArchRule = std::variant<LayerOrder, AllowedSubdirs, ForbiddenEdge, NoCycles>;

struct SemanticRule {
    std::string principle_text;
    std::vector<std::string> context_hints;

    bool operator==(const SemanticRule&) const = default;
};

using CheckDescriptor = std::variant<ProcessRule, SourceRule, ArchRule, SemanticRule>;

Domain domain_of(const CheckDescriptor& check);
std::string_view descriptor_kind(const CheckDescriptor& check); // store "kind" discriminator

// ── Constraints and the store ─────────────────────────────────────────────

struct Constraint {
    ConstraintId id;
    Domain domain = Domain::arch_semantic;
    std::string original_text;
    std::string refined_text;
    std::string source_file;
    std::vector<std::string> header_path;
    EnforcementLevel enforcement_level = EnforcementLevel::warn;
    CheckDescriptor check = SemanticRule{};
    bool disabled = false; // developer-marked exception; skipped at enforcement

    bool operator==(const Constraint&) const = default;
};

inline constexpr int kStoreFormatVersion = 1;

struct CheckStore {
    int version = kStoreFormatVersion;
    std::map<ConstraintId, Constraint> constraints;

    bool operator==(const CheckStore&) const = default;
};

struct ChangeReport {
    std::vector<ConstraintId> added;
    std::vector<ConstraintId> removed;
    std::vector<ConstraintId> retained;
};

struct MergeResult {
    CheckStore store;
    ChangeReport changes;
};

/// The result holds exactly the fresh identifiers; constraints already present
/// in `old` are kept verbatim, including their synthesized checks. Throws
/// ExtractionCollision when `fresh` repeats an identifier.
MergeResult merge_incremental(const CheckStore& old, std::vector<Constraint> fresh);

} // namespace contextcov
