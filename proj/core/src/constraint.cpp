#include "contextcov/constraint.hpp"

#include "contextcov/error.hpp"
#include "digest.hpp"

#include <algorithm>
#include <set>

namespace contextcov {

std::string_view to_string(Domain domain) {
    switch (domain) {
    case Domain::process: return "PROCESS";
    case Domain::source: return "SOURCE";
    case Domain::arch_deterministic: return "ARCH_DETERMINISTIC";
    case Domain::arch_semantic: return "ARCH_SEMANTIC";
    }
    return "ARCH_SEMANTIC";
}

std::string_view to_string(EnforcementLevel level) { return level == EnforcementLevel::block ? "block" : "warn"; }

std::string_view to_string(Language language) {
    switch (language) {
    case Language::python: return "python";
    case Language::typescript: return "typescript";
    case Language::javascript: return "javascript";
    case Language::go: return "go";
    case Language::rust: return "rust";
    }
    return "python";
}

std::optional<Domain> parse_domain(std::string_view text) {
    for (Domain d : kAllDomains) {
        if (to_string(d) == text) return d;
    }
    return std::nullopt;
}

std::optional<EnforcementLevel> parse_level(std::string_view text) {
    if (text == "block") return EnforcementLevel::block;
    if (text == "warn") return EnforcementLevel::warn;
    return std::nullopt;
}

std::optional<Language> parse_language(std::string_view text) {
    for (Language l : kAllLanguages) {
        if (to_string(l) == text) return l;
    }
    return std::nullopt;
}

std::optional<ConstraintId> ConstraintId::parse(std::string_view hex) {
    if (hex.size() != 16) return std::nullopt;
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
    }
    return ConstraintId(std::string(hex));
}

ConstraintId compute_constraint_id(const std::vector<std::string>& header_path, std::string_view content_text) {
    std::string material;
    for (std::size_t i = 0; i < header_path.size(); ++i) {
        if (i) material += '\x1F';
        material += header_path[i];
    }
    material += '\x1E';
    material += content_text;
    return *ConstraintId::parse(sha256_hex(material).substr(0, 16));
}

ConstraintId derived_constraint_id(const ConstraintId& base, int k) {
    return *ConstraintId::parse(sha256_hex(base.str() + '\x1D' + std::to_string(k)).substr(0, 16));
}

Domain domain_of(const CheckDescriptor& check) {
    switch (check.index()) {
    case 0: return Domain::process;
    case 1: return Domain::source;
    case 2: return Domain::arch_deterministic;
    default: return Domain::arch_semantic;
    }
}

std::string_view descriptor_kind(const CheckDescriptor& check) {
    struct Visitor {
        std::string_view operator()(const ProcessRule&) const { return "process"; }
        std::string_view operator()(const SourceRule&) const { return "source"; }
        std::string_view operator()(const SemanticRule&) const { return "semantic"; }
        std::string_view operator()(const ArchRule& rule) const {
            switch (rule.index()) {
            case 0: return "arch_layer_order";
            case 1: return "arch_allowed_subdirs";
            case 2: return "arch_forbidden_edge";
            default: return "arch_no_cycles";
            }
        }
    };
    return std::visit(Visitor{}, check);
}

MergeResult merge_incremental(const CheckStore& old, std::vector<Constraint> fresh) {
    std::set<ConstraintId> seen;
    for (const auto& c : fresh) {
        if (!seen.insert(c.id).second) throw ExtractionCollision(c.id.str());
    }

    MergeResult result;
    result.store.version = kStoreFormatVersion;
    for (auto& c : fresh) {
        auto it = old.constraints.find(c.id);
        if (it != old.constraints.end()) {
            result.store.constraints.emplace(c.id, it->second);
            result.changes.retained.push_back(c.id);
        } else {
            result.changes.added.push_back(c.id);
            result.store.constraints.emplace(c.id, std::move(c));
        }
    }
    for (const auto& [id, _] : old.constraints) {
        if (!seen.count(id)) result.changes.removed.push_back(id);
    }
    std::sort(result.changes.added.begin(), result.changes.added.end());
    std::sort(result.changes.retained.begin(), result.changes.retained.end());
    return result;
}

} // namespace contextcov
