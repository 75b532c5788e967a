#pragma once

#include "contextcov/constraint.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace contextcov {

struct DependencyEdge {
    std::string from;
    std::string to;
    std::string import_text;
    int line = 1;

    bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
    std::set<std::string> nodes;
    std::vector<DependencyEdge> edges; // one per (from, to), sorted, earliest import kept
    std::vector<std::string> diagnostics;

    std::map<std::string, std::vector<std::string>> adjacency() const;
};

/// Graph over `files` (repo-relative). Python, JavaScript and TypeScript
/// imports come from syntax-tree queries, Go from import blocks and go.mod,
/// Rust from `mod` and `use crate::`/`super::` paths. Edges whose target does
/// not resolve to a node are dropped and counted in the diagnostics.
DependencyGraph build_graph(const std::filesystem::path& root, const std::vector<std::string>& files);

/// Whole repository (REPO scope file list).
DependencyGraph build_graph(const std::filesystem::path& root);

struct ArchViolation {
    ConstraintId rule_id;
    std::string source;
    std::optional<std::string> target;
    std::string message;
    std::optional<std::vector<std::string>> cycle_members;
    EnforcementLevel severity = EnforcementLevel::warn;
    std::string suggestion;

    bool operator==(const ArchViolation&) const = default;
};

/// Sorted by (rule_id, source, target).
std::vector<ArchViolation> check_arch(const DependencyGraph& graph, const CheckStore& store);

/// Strongly connected components (iterative Tarjan), each sorted, listed in
/// order of their smallest node.
std::vector<std::vector<std::string>> strongly_connected_components(
    const std::set<std::string>& nodes, const std::map<std::string, std::vector<std::string>>& adjacency);

/// A closed walk starting at the smallest node that visits every node of a
/// strongly connected component; the closing edge back to the start is implied.
std::vector<std::string> cycle_witness(const std::vector<std::string>& component,
                                       const std::map<std::string, std::vector<std::string>>& adjacency);

/// {"nodes":[...],"edges":[{"from","to","import","line"}]}
std::string graph_to_json(const DependencyGraph& graph);

} // namespace contextcov
