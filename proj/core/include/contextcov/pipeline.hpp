#pragma once

#include "contextcov/constraint.hpp"
#include "contextcov/provider.hpp"
#include "contextcov/refine.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

/// Instruction files in discovery order: AGENTS.md, CLAUDE.md,
/// .github/copilot-instructions.md (those that exist under `root`).
std::vector<std::filesystem::path> discover_instructions(const std::filesystem::path& root);

struct InstructionFile {
    std::string path; // as recorded in Constraint::source_file
    std::string text;
};

enum class GenerationOutcome {
    stored,    // new checks synthesized and admitted
    retained,  // identifier already present; previous checks kept
    rerouted,  // could not be synthesized in its domain; stored as a semantic judgment
    grouped,   // folded into a rule owned by another item of the same listing
    rejected,  // no valid descriptor could be produced
    filtered,  // not a constraint
    duplicate, // same header path and text as an earlier slice
};

std::string_view to_string(GenerationOutcome outcome);

struct GenerationEntry {
    std::string source_file;
    std::vector<std::string> header_path;
    std::string content_text;
    GenerationOutcome outcome = GenerationOutcome::filtered;
    Domain domain = Domain::arch_semantic; // final domain of the stored checks
    std::vector<ConstraintId> ids;
    std::string note;
};

struct GenerationReport {
    std::vector<GenerationEntry> entries; // document order
    ChangeReport changes;
    std::vector<std::string> warnings;

    std::size_t count(GenerationOutcome outcome) const;
};

struct GenerationOptions {
    ProviderConfig provider;
    BinaryTables tables = BinaryTables::defaults();
};

struct GenerationResult {
    CheckStore store;
    GenerationReport report;
};

/// parse -> slice -> refine -> route -> synthesize -> validate -> merge.
/// Slices whose identifier is already in `previous` keep their stored checks
/// without consulting the provider again. Throws EncodingError for invalid
/// UTF-8 input.
GenerationResult generate_store(const std::vector<InstructionFile>& files, const CheckStore& previous,
                                const GenerationOptions& options);

/// Defaults extended by `.contextcov/config.json` under `root`, if present:
/// {"binaries": [...], "alternatives": [[...], ...]}. Throws Error when the
/// file exists but does not parse.
BinaryTables load_binary_tables(const std::filesystem::path& root);

} // namespace contextcov
