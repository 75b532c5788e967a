#include "contextcov/arch.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

using namespace contextcov;

namespace {

DependencyGraph graph_of(std::set<std::string> nodes, std::vector<std::pair<std::string, std::string>> edges) {
    DependencyGraph g;
    g.nodes = std::move(nodes);
    for (auto& [a, b] : edges) g.edges.push_back({a, b, "import " + b, 1});
    std::sort(g.edges.begin(), g.edges.end(), [](const auto& x, const auto& y) {
        return std::tie(x.from, x.to) < std::tie(y.from, y.to);
    });
    return g;
}

CheckStore store_of(std::vector<ArchRule> rules) {
    CheckStore s;
    int i = 0;
    for (auto& r : rules) {
        Constraint c;
        c.id = compute_constraint_id({"Arch"}, "rule " + std::to_string(i++));
        c.domain = Domain::arch_deterministic;
        c.original_text = "rule";
        c.refined_text = "rule";
        c.source_file = "AGENTS.md";
        c.check = r;
        s.constraints[c.id] = c;
    }
    return s;
}

const ArchRule kSampleLayers = LayerOrder{{"src/vs/base/", "src/vs/platform/", "src/vs/editor/", "src/vs/workbench/"}};
const ArchRule kSampleSubdirs = AllowedSubdirs{"src/vs/workbench/", {"browser", "services", "contrib", "api"}};

std::set<std::pair<std::string, std::string>> edge_set(const DependencyGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : g.edges) out.insert({e.from, e.to});
    return out;
}

// Nodes lying on some simple cycle, by exhaustive path enumeration.
std::set<int> brute_cycle_nodes(int n, const std::vector<std::vector<int>>& adj) {
    std::set<int> out;
    std::vector<bool> on(static_cast<std::size_t>(n), false);
    std::vector<int> path;
    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (w == start && path.size() >= 2) out.insert(path.begin(), path.end());
            if (w > start && !on[static_cast<std::size_t>(w)]) {
                on[static_cast<std::size_t>(w)] = true;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
                on[static_cast<std::size_t>(w)] = false;
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on.assign(static_cast<std::size_t>(n), false);
        on[static_cast<std::size_t>(s)] = true;
        dfs(s, s);
    }
    return out;
}

std::string node_name(int i) { return "n" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".py"; }

} // namespace

TEST_CASE("python imports") {
    testing::TempDir dir;
    testing::write_file(dir / "a.py", "import os\nfrom b import f\nimport pkg.sub as s\n");
    testing::write_file(dir / "b.py", "def f(): pass\n");
    testing::write_file(dir / "pkg/__init__.py", "from . import sub\n");
    testing::write_file(dir / "pkg/sub.py", "from ..b import f\n");
    testing::write_file(dir / "std_only.py", "import json\nfrom collections import OrderedDict\n");
    auto g = build_graph(dir.path());
    CHECK(g.nodes.count("std_only.py"));
    CHECK(edge_set(g) == std::set<std::pair<std::string, std::string>>{{"a.py", "b.py"},
                                                                       {"a.py", "pkg/sub.py"},
                                                                       {"pkg/__init__.py", "pkg/sub.py"},
                                                                       {"pkg/sub.py", "b.py"}});
    for (const auto& e : g.edges) {
        if (e.from == "a.py" && e.to == "b.py") {
            CHECK(e.line == 2);
            CHECK(e.import_text == "from b import f");
        }
    }
}

TEST_CASE("typescript and javascript imports") {
    testing::TempDir dir;
    testing::write_file(dir / "src/ui/x.ts", "import {q} from \"../db/y\";\nimport React from 'react';\n"
                                             "export * from './z';\nconst m = require('../db/y');\n"
                                             "const lazy = import('./w');\n");
    testing::write_file(dir / "src/db/y.ts", "export const q = 1;\n");
    testing::write_file(dir / "src/ui/z/index.ts", "export {}\n");
    testing::write_file(dir / "src/ui/w.js", "module.exports = 1;\n");
    testing::write_file(dir / "src/ui/esm.ts", "import {q} from '../db/y.js';\n");
    auto g = build_graph(dir.path());
    CHECK(edge_set(g) == std::set<std::pair<std::string, std::string>>{{"src/ui/esm.ts", "src/db/y.ts"},
                                                                       {"src/ui/x.ts", "src/db/y.ts"},
                                                                       {"src/ui/x.ts", "src/ui/w.js"},
                                                                       {"src/ui/x.ts", "src/ui/z/index.ts"}});
    CHECK(g.edges.front().line == 1);
}

TEST_CASE("go imports through go.mod") {
    testing::TempDir dir;
    testing::write_file(dir / "go.mod", "module example.com/app\n\ngo 1.21\n");
    testing::write_file(dir / "main.go", "package main\n\nimport (\n\t\"fmt\"\n\t\"example.com/app/internal/db\"\n)\n");
    testing::write_file(dir / "internal/db/db.go", "package db\n");
    testing::write_file(dir / "internal/db/db_test.go", "package db\n");
    auto g = build_graph(dir.path());
    CHECK(edge_set(g) == std::set<std::pair<std::string, std::string>>{{"main.go", "internal/db/db.go"}});
}

TEST_CASE("rust modules and use paths") {
    testing::TempDir dir;
    testing::write_file(dir / "src/main.rs", "mod net;\nmod util;\nuse crate::net::client::Client;\nfn main() {}\n");
    testing::write_file(dir / "src/net/mod.rs", "pub mod client;\n");
    testing::write_file(dir / "src/net/client.rs", "use super::super::util::{helper, other};\npub struct Client;\n");
    testing::write_file(dir / "src/util.rs", "use std::fmt;\npub fn helper() {}\n");
    auto g = build_graph(dir.path());
    CHECK(edge_set(g) == std::set<std::pair<std::string, std::string>>{{"src/main.rs", "src/net/client.rs"},
                                                                       {"src/main.rs", "src/net/mod.rs"},
                                                                       {"src/main.rs", "src/util.rs"},
                                                                       {"src/net/client.rs", "src/util.rs"},
                                                                       {"src/net/mod.rs", "src/net/client.rs"}});
}

TEST_CASE("allowed subdirectories: exactly one violation with the listing message") {
    auto g = graph_of({"src/vs/workbench/myNewUtility.ts", "src/vs/workbench/browser/a.ts",
                       "src/vs/workbench/api/b.ts", "src/vs/base/c.ts"},
                      {});
    auto v = check_arch(g, store_of({kSampleSubdirs}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].source == "src/vs/workbench/myNewUtility.ts");
    CHECK(v[0].message == "workbench/ only allows subdirectories: browser, services, contrib, api");
    CHECK(v[0].suggestion == "Move to one of src/vs/workbench/{browser,services,contrib,api}/ or to a lower layer");
}

TEST_CASE("layer order: upward imports only") {
    auto g = graph_of({"src/vs/base/x.ts", "src/vs/workbench/y.ts", "src/vs/editor/e.ts"},
                      {{"src/vs/base/x.ts", "src/vs/workbench/y.ts"},
                       {"src/vs/workbench/y.ts", "src/vs/editor/e.ts"},
                       {"src/vs/editor/e.ts", "src/vs/base/x.ts"}});
    auto v = check_arch(g, store_of({kSampleLayers}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].source == "src/vs/base/x.ts");
    CHECK(v[0].target == "src/vs/workbench/y.ts");
    CHECK(v[0].message.rfind("src/vs/base/ must not depend on src/vs/workbench/", 0) == 0);
}

TEST_CASE("forbidden edges") {
    auto g = graph_of({"ui/a.py", "db/b.py", "core/c.py"}, {{"ui/a.py", "db/b.py"}, {"core/c.py", "db/b.py"}});
    auto v = check_arch(g, store_of({ForbiddenEdge{"ui/**", "db/**"}}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].source == "ui/a.py");
}

TEST_CASE("three-file cycle") {
    auto g = graph_of({"a.py", "b.py", "c.py", "d.py"}, {{"a.py", "b.py"}, {"b.py", "c.py"}, {"c.py", "a.py"}, {"d.py", "a.py"}});
    auto v = check_arch(g, store_of({NoCycles{"**"}}));
    REQUIRE(v.size() == 1);
    REQUIRE(v[0].cycle_members);
    CHECK(*v[0].cycle_members == std::vector<std::string>{"a.py", "b.py", "c.py"});
    CHECK(v[0].message == "dependency cycle: a.py -> b.py -> c.py -> a.py");
    CHECK(check_arch(DependencyGraph{}, store_of({NoCycles{"**"}, kSampleLayers})).empty());
}

TEST_CASE("property: strongly connected components match brute-force cycle membership") {
    std::mt19937 rng(1234);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const double p = std::uniform_real_distribution<double>(0.05, 0.4)(rng);
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        std::set<std::string> nodes;
        std::vector<std::pair<std::string, std::string>> edges;
        for (int i = 0; i < n; ++i) nodes.insert(node_name(i));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j && std::uniform_real_distribution<double>(0, 1)(rng) < p) {
                    adj[static_cast<std::size_t>(i)].push_back(j);
                    edges.emplace_back(node_name(i), node_name(j));
                }
            }
        }
        std::set<std::string> expected;
        for (int i : brute_cycle_nodes(n, adj)) expected.insert(node_name(i));

        auto g = graph_of(nodes, edges);
        const auto adjacency = g.adjacency();
        std::set<std::string> flagged;
        for (const auto& v : check_arch(g, store_of({NoCycles{"**"}}))) {
            REQUIRE(v.cycle_members);
            const auto& walk = *v.cycle_members;
            // The witness is a closed walk along real edges.
            for (std::size_t k = 0; k < walk.size(); ++k) {
                const auto& from = walk[k];
                const auto& to = walk[(k + 1) % walk.size()];
                const auto& out = adjacency.at(from);
                CHECK(std::find(out.begin(), out.end(), to) != out.end());
            }
            flagged.insert(walk.begin(), walk.end());
        }
        CHECK(flagged == expected);
    }
}

TEST_CASE("property: layer soundness") {
    // Every reported edge goes upward; every upward edge is reported.
    std::mt19937 rng(8);
    const std::vector<std::string> dirs{"src/vs/base/", "src/vs/platform/", "src/vs/editor/", "src/vs/workbench/", "lib/"};
    for (int round = 0; round < 100; ++round) {
        std::set<std::string> nodes;
        std::vector<std::pair<std::string, std::string>> edges;
        std::vector<std::string> list;
        for (int i = 0; i < 8; ++i) list.push_back(dirs[rng() % dirs.size()] + "f" + std::to_string(i) + ".ts");
        nodes.insert(list.begin(), list.end());
        for (int k = 0; k < 12; ++k) {
            const auto& a = list[rng() % list.size()];
            const auto& b = list[rng() % list.size()];
            if (a != b) edges.emplace_back(a, b);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        auto rank = [&](const std::string& p) {
            for (int i = 0; i < 4; ++i) {
                if (p.rfind(dirs[static_cast<std::size_t>(i)], 0) == 0) return i;
            }
            return -1;
        };
        std::size_t upward = 0;
        for (const auto& [a, b] : edges) upward += rank(a) >= 0 && rank(b) > rank(a);
        auto v = check_arch(graph_of(nodes, edges), store_of({kSampleLayers}));
        CHECK(v.size() == upward);
        for (const auto& x : v) CHECK(rank(*x.target) > rank(x.source));
    }
}

TEST_CASE("determinism and graph export") {
    testing::TempDir dir;
    testing::write_file(dir / "a.py", "import b\n");
    testing::write_file(dir / "b.py", "import a\nimport requests\n");
    const auto g1 = build_graph(dir.path());
    const auto g2 = build_graph(dir.path());
    CHECK(graph_to_json(g1) == graph_to_json(g2));
    CHECK(graph_to_json(g1).find("\"import\": \"import b\"") != std::string::npos);
    REQUIRE(g1.diagnostics.size() == 1);
    CHECK(g1.diagnostics[0].rfind("1 import(s) did not resolve", 0) == 0);
}

TEST_CASE("disabled arch rules are skipped") {
    auto s = store_of({NoCycles{"**"}});
    s.constraints.begin()->second.disabled = true;
    auto g = graph_of({"a.py", "b.py"}, {{"a.py", "b.py"}, {"b.py", "a.py"}});
    CHECK(check_arch(g, s).empty());
}
