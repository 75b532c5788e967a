#pragma once

#include "contextcov/constraint.hpp"
#include "contextcov/markdown.hpp"
#include "contextcov/provider.hpp"
#include "contextcov/refine.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace contextcov {

struct ValidationResult {
    bool ok = true;
    std::vector<std::string> diagnostics;

    std::string summary() const;
};

ValidationResult validate_descriptor(const CheckDescriptor& check);

/// One rule per distinct argument pattern. Mentions the text negates are
/// blocked as written; sanctioned tools block their alternatives outright.
std::vector<ProcessRule> synthesize_process(const Constraint& constraint, const ProcessMeta& meta,
                                            const BinaryTables& tables = BinaryTables::defaults());

struct SourceSynthesis {
    std::vector<SourceRule> rules; // empty: reroute to a semantic judgment
    std::string diagnostic;
};

/// Deterministic mode uses the bundled pattern library. Remote mode asks the
/// provider for a query, allows one repair round with the compiler diagnostic,
/// then falls back to the library.
SourceSynthesis synthesize_source(const Constraint& constraint, const SourceMeta& meta, const ProviderConfig& cfg);

/// Queries from the bundled library, keyed by canonical shape.
std::vector<SourceRule> library_source_rules(const SourceShape& shape, const std::vector<Language>& languages,
                                             EnforcementLevel severity);

struct OwnedArchRule {
    std::size_t owner = 0; // index into the group the rule was synthesized from
    ArchRule rule;
};

/// `group` is a run of related listing items (or a single slice); `context`
/// is every slice of the same instruction file, used to resolve names such as
/// "the database layer" to directories.
std::vector<OwnedArchRule> synthesize_arch(const ArchDetMeta& meta, const std::vector<Slice>& group,
                                           const std::vector<Slice>& context);

SemanticRule synthesize_semantic(const Constraint& constraint, const ArchSemMeta& meta);

} // namespace contextcov
