// End-to-end acceptance run. One PASS/FAIL line per criterion; non-zero exit
// when any criterion fails.

#include "contextcov/arch.hpp"
#include "contextcov/glob.hpp"
#include "contextcov/pipeline.hpp"
#include "contextcov/store.hpp"
#include "contextcov/vcs.hpp"

#include "support.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace contextcov;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure {
    std::string why;
};

void expect(bool ok, const std::string& why) {
    if (!ok) throw Failure{why};
}

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

ProcessResult contextcov(std::vector<std::string> args, std::vector<std::string> env = {}) {
    std::vector<std::string> argv{"/usr/bin/env"};
    argv.insert(argv.end(), env.begin(), env.end());
    argv.push_back(CONTEXTCOV_EXE);
    argv.insert(argv.end(), args.begin(), args.end());
    return run_process(argv);
}

ProcessResult with_path(const std::string& path, std::vector<std::string> cmd, std::vector<std::string> env = {}) {
    std::vector<std::string> argv{"/usr/bin/env", "PATH=" + path};
    argv.insert(argv.end(), env.begin(), env.end());
    argv.insert(argv.end(), cmd.begin(), cmd.end());
    return run_process(argv);
}

void generate(const fs::path& root) {
    auto r = contextcov({"generate", "--root", root.string()});
    expect(r.exit_code == 0, "generate exited " + std::to_string(r.exit_code) + ": " + r.err);
}

CheckStore stored(const fs::path& root) {
    return load_store(root / ".contextcov/checks.json");
}

void fake_npm(const fs::path& dir) {
    testing::write_file(dir / "npm", "#!/bin/sh\necho \"real npm: $*\"\necho \"to stderr\" >&2\nexit 7\n");
    ::chmod((dir / "npm").c_str(), 0755);
}

// Nodes that reach themselves through at least one edge, via transitive closure.
std::set<int> closure_cycle_nodes(int n, const std::vector<std::vector<bool>>& edge) {
    auto reach = edge;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    std::set<int> out;
    for (int i = 0; i < n; ++i)
        if (reach[i][i]) out.insert(i);
    return out;
}

template <class Rule>
std::size_t count_kind(const std::vector<ArchViolation>& vs, const CheckStore& store) {
    return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [&](const ArchViolation& v) {
        const auto& check = store.constraints.at(v.rule_id).check;
        return std::holds_alternative<ArchRule>(check) && std::holds_alternative<Rule>(std::get<ArchRule>(check));
    }));
}

const std::string kNpmRule = "NEVER use `npm run compile` to compile TypeScript files";

// ── criteria ──

void sample_generate() {
    testing::TempDir repo;
    testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
    const auto t0 = Clock::now();
    generate(repo.path());
    const double elapsed = seconds_since(t0);
    expect(elapsed < 5.0, "generate took " + std::to_string(elapsed) + " s");

    std::set<Domain> domains;
    for (const auto& [id, c] : stored(repo.path()).constraints) domains.insert(c.domain);
    expect(domains.size() == 4, "only " + std::to_string(domains.size()) + " domains populated");

    auto v = contextcov({"validate", "--root", repo.path().string()});
    expect(v.exit_code == 0, "validate exited " + std::to_string(v.exit_code));
    expect(v.out.find("(100.0%)") != std::string::npos, "validation below 100%: " + v.out);
}

void shim_blocks_and_forwards() {
    testing::TempDir repo;
    testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
    generate(repo.path());
    fake_npm(repo / "real");
    auto inst = contextcov({"shim", "install", "--root", repo.path().string(), "--dir", (repo / "shims").string()});
    expect(inst.exit_code == 0, "shim install failed: " + inst.err);
    const std::string path = (repo / "shims").string() + ":" + (repo / "real").string() + ":/usr/bin:/bin";
    const std::vector<std::string> env{"CONTEXTCOV_STORE=" + (repo / ".contextcov/checks.json").string()};

    auto t0 = Clock::now();
    auto blocked = with_path(path, {"npm", "run", "compile"}, env);
    expect(seconds_since(t0) < 2.0, "blocked invocation too slow");
    expect(blocked.exit_code == 1, "blocked exit " + std::to_string(blocked.exit_code));
    expect(blocked.out.empty(), "blocked command produced stdout");
    const std::string want = "[ContextCov] BLOCKED: Process constraint violated\n"
                             "  Rule: \"" + kNpmRule + "\"\n"
                             "  Action: Check the VS Code - Build watch task output for compilation errors before "
                             "running ANY script.\n";
    expect(blocked.err == want, "report differs:\n" + blocked.err);

    t0 = Clock::now();
    auto fwd = with_path(path, {"npm", "install"}, env);
    expect(seconds_since(t0) < 2.0, "forwarded invocation too slow");
    expect(fwd.exit_code == 7, "forwarded exit " + std::to_string(fwd.exit_code));
    expect(fwd.out == "real npm: install\n" && fwd.err == "to stderr\n", "output not forwarded verbatim");
}

void source_rule_flags_first_occurrence() {
    testing::TempDir repo;
    testing::write_file(repo / "AGENTS.md",
                        "## Style\n"
                        "- NEVER surround a single arrow function parameter with parentheses.\n"
                        "  For example, `(x) => x + x` is wrong but `x => x + x` is correct.\n");
    testing::write_file(repo / "src/util.ts", "const g = (a, b) => a + b;\n"
                                             "const h = y => y;\n"
                                             "const f = (x) => x + x;\n");
    generate(repo.path());
    auto r = contextcov({"check", "--root", repo.path().string()});
    expect(r.exit_code == 1, "check exited " + std::to_string(r.exit_code));
    expect(r.out.rfind("[ContextCov] Source violation: src/util.ts:3\n", 0) == 0, "unexpected report:\n" + r.out);
    expect(r.out.find("Suggestion: Remove parentheses: x => x + x") != std::string::npos, "suggestion missing");

    testing::write_file(repo / "src/util.ts", "const g = (a, b) => a + b;\nconst h = y => y;\n");
    auto clean = contextcov({"check", "--root", repo.path().string()});
    expect(clean.exit_code == 0, "clean file exited " + std::to_string(clean.exit_code) + ":\n" + clean.out);
}

void architecture_rules() {
    {
        testing::TempDir repo;
        testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
        testing::write_file(repo / "src/vs/base/common/strings.ts", "export const s = 1;\n");
        testing::write_file(repo / "src/vs/workbench/browser/part.ts",
                            "import { s } from '../../base/common/strings';\n");
        testing::write_file(repo / "src/vs/workbench/myNewUtility.ts", "export const u = 2;\n");
        generate(repo.path());
        const auto store = stored(repo.path());
        auto vs = check_arch(build_graph(repo.path()), store);
        expect(vs.size() == 1 && count_kind<AllowedSubdirs>(vs, store) == 1,
               "expected one AllowedSubdirs violation, got " + std::to_string(vs.size()));
        expect(vs[0].source == "src/vs/workbench/myNewUtility.ts", "wrong file flagged: " + vs[0].source);

        fs::remove(repo / "src/vs/workbench/myNewUtility.ts");
        testing::write_file(repo / "src/vs/base/common/strings.ts",
                            "import { p } from '../../workbench/browser/part';\nexport const s = 1;\n");
        vs = check_arch(build_graph(repo.path()), store);
        expect(vs.size() == 1 && count_kind<LayerOrder>(vs, store) == 1,
               "expected one LayerOrder violation, got " + std::to_string(vs.size()));
        expect(vs[0].source == "src/vs/base/common/strings.ts" &&
                   vs[0].target == std::optional<std::string>("src/vs/workbench/browser/part.ts"),
               "wrong edge flagged");
    }
    {
        testing::TempDir repo;
        testing::write_file(repo / "AGENTS.md", "## Architecture\n- No circular dependencies between modules\n");
        testing::write_file(repo / "a.py", "import b\n");
        testing::write_file(repo / "b.py", "from c import thing\n");
        testing::write_file(repo / "c.py", "import a\nthing = 1\n");
        testing::write_file(repo / "d.py", "import a\n");
        generate(repo.path());
        const auto store = stored(repo.path());
        const auto graph = build_graph(repo.path());
        auto vs = check_arch(graph, store);
        expect(vs.size() == 1 && count_kind<NoCycles>(vs, store) == 1,
               "expected one NoCycles violation, got " + std::to_string(vs.size()));
        expect(vs[0].cycle_members.has_value(), "cycle members missing");

        const std::vector<std::string> nodes(graph.nodes.begin(), graph.nodes.end());
        const int n = static_cast<int>(nodes.size());
        std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
        for (const auto& e : graph.edges) {
            const auto i = std::find(nodes.begin(), nodes.end(), e.from) - nodes.begin();
            const auto j = std::find(nodes.begin(), nodes.end(), e.to) - nodes.begin();
            edge[i][j] = true;
        }
        std::set<std::string> expected;
        for (int i : closure_cycle_nodes(n, edge)) expected.insert(nodes[static_cast<std::size_t>(i)]);
        const std::set<std::string> got(vs[0].cycle_members->begin(), vs[0].cycle_members->end());
        expect(got == expected && expected == std::set<std::string>{"a.py", "b.py", "c.py"},
               "cycle members differ from brute force");
    }
}

void section_edits_are_local() {
    const std::vector<std::string> rules{
        "NEVER use `npm run build`", "Prefer `async/await` over `Promise` and `then` calls",
        "Do not use the `any` type", "You MUST keep modules cohesive", "Always use pnpm",
        "No circular dependencies", "Never call `eval()`", "Avoid `var`",
        "Only surround arrow function parameters when necessary", "NEVER run `yarn test` directly"};
    std::mt19937 rng(2024);
    GenerationOptions options;
    auto run = [&](const std::string& text, const CheckStore& previous) {
        return generate_store({{"AGENTS.md", text}}, previous, options);
    };
    for (int round = 0; round < 120; ++round) {
        auto section = [&](const std::string& name) {
            std::string s = "## " + name + "\n";
            const int n = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < n; ++i) s += "- " + rules[rng() % rules.size()] + " (" + name + std::to_string(i) + ")\n";
            return s + "\n";
        };
        const std::string b = section("B");
        const std::string a1 = section("A"), a2 = section("A");
        auto before = run(a1 + b, {});
        auto after = run(a2 + b, before.store);
        std::size_t seen = 0;
        for (const auto& [id, c] : before.store.constraints) {
            if (c.header_path.front() != "B") continue;
            ++seen;
            const auto it = after.store.constraints.find(id);
            expect(it != after.store.constraints.end(), "round " + std::to_string(round) + ": B check dropped");
            expect(it->second.check == c.check && it->second == c,
                   "round " + std::to_string(round) + ": B check changed");
        }
        std::size_t after_b = 0;
        for (const auto& [id, c] : after.store.constraints) after_b += c.header_path.front() == "B";
        expect(after_b == seen, "round " + std::to_string(round) + ": B gained checks");
    }
}

void scc_matches_brute_force() {
    std::mt19937 rng(99);
    const auto t0 = Clock::now();
    for (int round = 0; round < 500; ++round) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const double p = std::uniform_real_distribution<double>(0.02, 0.35)(rng);
        std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
        std::set<std::string> nodes;
        std::map<std::string, std::vector<std::string>> adj;
        auto name = [](int i) { return "m" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".py"; };
        for (int i = 0; i < n; ++i) nodes.insert(name(i));
        DependencyGraph g;
        g.nodes = nodes;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && std::uniform_real_distribution<double>(0, 1)(rng) < p) {
                    edge[i][j] = true;
                    g.edges.push_back({name(i), name(j), "import " + name(j), 1});
                }
        CheckStore store;
        Constraint c;
        c.id = compute_constraint_id({"Architecture"}, "No circular dependencies");
        c.domain = Domain::arch_deterministic;
        c.original_text = c.refined_text = "No circular dependencies";
        c.source_file = "AGENTS.md";
        c.header_path = {"Architecture"};
        c.check = ArchRule{NoCycles{"**"}};
        store.constraints[c.id] = c;

        std::set<std::string> flagged;
        for (const auto& v : check_arch(g, store)) {
            expect(v.cycle_members.has_value(), "cycle violation without members");
            flagged.insert(v.cycle_members->begin(), v.cycle_members->end());
        }
        std::set<std::string> expected;
        for (int i : closure_cycle_nodes(n, edge)) expected.insert(name(i));
        expect(flagged == expected, "round " + std::to_string(round) + ": flagged set differs");
    }
    const double elapsed = seconds_since(t0);
    expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
}

void argv_matching_exhaustive() {
    using Argv = std::vector<std::string>;
    const Argv alphabet{"run", "compile", "install", "-g"};
    std::vector<Argv> argvs{{}};
    for (std::size_t len = 1, from = 0; len <= 4; ++len) {
        const std::size_t to = argvs.size();
        for (std::size_t k = from; k < to; ++k)
            for (const auto& t : alphabet) {
                Argv a = argvs[k];
                a.push_back(t);
                argvs.push_back(a);
            }
        from = to;
    }
    // Reference: a pattern matches when some prefix of argv matches it token by
    // token, with `**` at the end absorbing the rest.
    auto reference = [](const Argv& p, const Argv& a) {
        const bool tail = !p.empty() && p.back() == "**";
        const std::size_t fixed = p.size() - (tail ? 1 : 0);
        if (a.size() < fixed) return false;
        for (std::size_t i = 0; i < fixed; ++i)
            if (p[i] != "*" && p[i] != a[i]) return false;
        return true;
    };
    Argv tokens = alphabet;
    tokens.push_back("*");
    std::vector<Argv> patterns{{}};
    for (std::size_t len = 1, from = 0; len <= 3; ++len) {
        const std::size_t to = patterns.size();
        for (std::size_t k = from; k < to; ++k)
            for (const auto& t : tokens) {
                Argv p = patterns[k];
                p.push_back(t);
                patterns.push_back(p);
            }
        from = to;
    }
    const std::size_t base = patterns.size();
    for (std::size_t k = 0; k < base; ++k) {
        Argv p = patterns[k];
        p.push_back("**");
        patterns.push_back(p);
    }
    std::size_t checked = 0;
    for (const auto& p : patterns)
        for (const auto& a : argvs) {
            expect(argv_matches(p, a) == reference(p, a), "mismatch on a pattern of length " + std::to_string(p.size()));
            ++checked;
        }
    expect(checked == patterns.size() * argvs.size() && checked > 40000, "too few cases");
}

void fail_closed_and_open() {
    testing::TempDir repo;
    testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
    generate(repo.path());
    fake_npm(repo / "real");
    auto inst = contextcov({"shim", "install", "--root", repo.path().string(), "--dir", (repo / "shims").string()});
    expect(inst.exit_code == 0, "shim install failed");
    const std::string path = (repo / "shims").string() + ":" + (repo / "real").string() + ":/usr/bin:/bin";
    const std::string store = "CONTEXTCOV_STORE=" + (repo / ".contextcov/checks.json").string();
    testing::write_file(repo / ".contextcov/checks.json", "{ truncated");

    auto closed = with_path(path, {"npm", "install"}, {store});
    expect(closed.exit_code == 1 && closed.out.empty(), "corrupt store did not block");
    expect(closed.err.rfind("[ContextCov] BLOCKED: check store unavailable\n", 0) == 0, "wrong report:\n" + closed.err);

    auto open = with_path(path, {"npm", "install"}, {store, "CONTEXTCOV_FAIL_OPEN=1"});
    expect(open.exit_code == 7 && open.out == "real npm: install\n", "fail-open did not forward");

    fs::remove(repo / ".contextcov/checks.json");
    auto missing = with_path(path, {"npm", "install"}, {store});
    expect(missing.exit_code == 1, "missing store did not block");
}

void json_output_is_deterministic() {
    testing::TempDir repo;
    testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
    testing::write_file(repo / "src/vs/base/common/strings.ts",
                        "import { p } from '../../workbench/browser/part';\nconst f = (x) => x + x;\n");
    testing::write_file(repo / "src/vs/workbench/browser/part.ts",
                        "export const p = fetch('/x').then(r => r.json());\n");
    testing::write_file(repo / "src/vs/workbench/myNewUtility.ts", "export const u = (y) => y;\n");
    generate(repo.path());
    const std::vector<std::string> args{"check", "--root", repo.path().string(), "--format", "json"};
    auto first = contextcov(args);
    auto second = contextcov(args);
    expect(first.out.find("\"arch_violations\": [\n    {") != std::string::npos &&
               first.out.find("\"violations\": [\n    {") != std::string::npos,
           "report lacks findings");
    expect(first.out == second.out, "reports differ between runs");
    expect(first.exit_code == second.exit_code, "exit codes differ");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria{
        {"sample instructions generates four domains, all valid, under 5 s", sample_generate},
        {"wrapper blocks the rule verbatim and forwards other commands", shim_blocks_and_forwards},
        {"source rule flags the offending line and passes once removed", source_rule_flags_first_occurrence},
        {"subdirectory, layer and cycle rules each report exactly once", architecture_rules},
        {"editing one section leaves the other section's checks intact", section_edits_are_local},
        {"cycle detection matches transitive closure on 500 graphs", scc_matches_brute_force},
        {"argv matching agrees with the reference on every case", argv_matching_exhaustive},
        {"unreadable store blocks unless fail-open is set", fail_closed_and_open},
        {"json check output is byte-identical across runs", json_output_is_deterministic},
    };
    int failures = 0;
    int n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        std::string why;
        try {
            fn();
        } catch (const Failure& f) {
            why = f.why;
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        if (why.empty()) {
            std::cout << "PASS [" << n << "] " << name << "\n";
        } else {
            ++failures;
            std::cout << "FAIL [" << n << "] " << name << ": " << why << "\n";
        }
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
