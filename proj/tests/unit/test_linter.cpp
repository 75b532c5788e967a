#include "contextcov/error.hpp"
#include "contextcov/linter.hpp"
#include "contextcov/synthesis.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <regex>

using namespace contextcov;

namespace {

CheckStore store_with(const std::string& shape, const std::string& text, std::vector<Language> langs,
                      EnforcementLevel level = EnforcementLevel::block) {
    CheckStore s;
    auto rules = library_source_rules(SourceShape{shape, ""}, langs, level);
    REQUIRE(!rules.empty());
    Constraint c;
    c.id = compute_constraint_id({"Style"}, text);
    c.domain = Domain::source;
    c.original_text = text;
    c.refined_text = text;
    c.source_file = "AGENTS.md";
    c.header_path = {"Style"};
    c.enforcement_level = level;
    c.check = rules.front();
    s.constraints[c.id] = c;
    return s;
}

// Lines holding a `.then(` call, by plain text search.
std::vector<int> then_lines(const std::string& src) {
    std::vector<int> out;
    std::istringstream in(src);
    std::string line;
    static const std::regex re(R"(\.then\s*\()");
    for (int n = 1; std::getline(in, line); ++n) {
        if (std::regex_search(line, re)) out.push_back(n);
    }
    return out;
}

} // namespace

TEST_CASE("paren arrow parameter is flagged, other forms are not") {
    testing::TempDir dir;
    testing::write_file(dir / "a.ts", "const f = (x) => x + x;\nconst g = x => x + x;\nconst h = (x, y) => x + y;\n"
                                      "const k = (x: number) => x;\n");
    auto store = store_with("paren_arrow_param", "NEVER surround a single arrow parameter", {Language::typescript});
    auto r = lint(dir.path(), store, ScanScope::repo());
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].file == "a.ts");
    CHECK(r.violations[0].line == 1);
    CHECK(r.violations[0].severity == EnforcementLevel::block);
    CHECK(r.violations[0].found == "(x) => x + x");
    REQUIRE(r.violations[0].suggestion);
    CHECK(*r.violations[0].suggestion == "Remove parentheses: x => x + x");
    CHECK(r.files_scanned == 1);
}

TEST_CASE("property: .then calls agree with a line oracle") {
    testing::TempDir dir;
    auto store = store_with("promise_then", "Prefer async/await over then", {Language::javascript});
    std::mt19937 rng(5);
    const std::vector<std::string> stmts{"p.then(x => x);", "let a = 1;", "foo(bar);", "q.catch(e => e);",
                                         "api.get().then(r => r.json());", "// then later", "thenable(1);"};
    for (int round = 0; round < 60; ++round) {
        std::string src;
        const int n = static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) src += stmts[rng() % stmts.size()] + "\n";
        testing::write_file(dir / "m.js", src);
        auto r = lint_files(dir.path(), store, {"m.js"});
        std::vector<int> got;
        for (const auto& v : r.violations) got.push_back(v.line);
        CHECK_MESSAGE(got == then_lines(src), src);
    }
}

TEST_CASE("empty files and broken syntax") {
    testing::TempDir dir;
    testing::write_file(dir / "empty.ts", "");
    testing::write_file(dir / "broken.ts", "const f = (x) => x;\nfunction ( {\n");
    auto store = store_with("paren_arrow_param", "x", {Language::typescript});
    auto r = lint(dir.path(), store, ScanScope::repo());
    CHECK(r.files_scanned == 2);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].file == "broken.ts");
}

TEST_CASE("repo scope filters extensions and skipped directories") {
    testing::TempDir dir;
    testing::write_file(dir / "src/a.py", "x = 1\n");
    testing::write_file(dir / "README.md", "# hi\n");
    testing::write_file(dir / "node_modules/pkg/index.js", "x\n");
    testing::write_file(dir / "src/b.go", "package b\n");
    CHECK(resolve_scope(dir.path(), ScanScope::repo()) == std::vector<std::string>{"src/a.py", "src/b.go"});
    CHECK(is_skipped_path("a/node_modules/b.js"));
    CHECK_FALSE(is_skipped_path("src/builder.ts"));
}

TEST_CASE("git scopes") {
    testing::TempDir dir;
    CHECK_THROWS_AS(resolve_scope(dir.path(), ScanScope::unstaged()), ScopeError);

    testing::git_init(dir.path());
    testing::write_file(dir / "a.ts", "const f = (x) => x;\n");
    testing::write_file(dir / "b.ts", "const g = y => y;\n");
    testing::write_file(dir / ".gitignore", "gen/\n");
    testing::write_file(dir / "gen/c.ts", "const h = (z) => z;\n");
    testing::git_commit_all(dir.path());

    auto store = store_with("paren_arrow_param", "x", {Language::typescript});
    CHECK(resolve_scope(dir.path(), ScanScope::unstaged()).empty());
    CHECK(lint(dir.path(), store, ScanScope::unstaged()).violations.empty());
    CHECK(resolve_scope(dir.path(), ScanScope::repo()) == std::vector<std::string>{"a.ts", "b.ts"});

    testing::write_file(dir / "b.ts", "const g = (y) => y;\n");
    CHECK(resolve_scope(dir.path(), ScanScope::diff("HEAD")) == std::vector<std::string>{"b.ts"});
    auto d = lint(dir.path(), store, ScanScope::diff("HEAD"));
    REQUIRE(d.violations.size() == 1);
    CHECK(d.violations[0].file == "b.ts");

    testing::write_file(dir / "new.ts", "x\n");
    CHECK(resolve_scope(dir.path(), ScanScope::unstaged()) == std::vector<std::string>{"b.ts", "new.ts"});
    CHECK_THROWS_AS(resolve_scope(dir.path(), ScanScope::diff("no-such-ref")), ScopeError);
}

TEST_CASE("property: findings are monotone in the file set") {
    testing::TempDir dir;
    for (int i = 0; i < 6; ++i) {
        testing::write_file(dir / ("f" + std::to_string(i) + ".ts"),
                            i % 2 ? "const a = (v) => v;\n" : "const b = v => v;\n");
    }
    auto store = store_with("paren_arrow_param", "x", {Language::typescript});
    auto all = resolve_scope(dir.path(), ScanScope::repo());
    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::string> subset;
        for (const auto& f : all) {
            if (rng() % 2) subset.push_back(f);
        }
        auto small = lint_files(dir.path(), store, subset).violations;
        auto big = lint_files(dir.path(), store, all).violations;
        for (const auto& v : small) CHECK(std::find(big.begin(), big.end(), v) != big.end());
    }
}

TEST_CASE("disabled rules and bad queries") {
    testing::TempDir dir;
    testing::write_file(dir / "a.ts", "const f = (x) => x;\n");
    auto store = store_with("paren_arrow_param", "x", {Language::typescript});
    store.constraints.begin()->second.disabled = true;
    CHECK(lint(dir.path(), store, ScanScope::repo()).violations.empty());

    std::get<SourceRule>(store.constraints.begin()->second.check).query = "(no_such_node) @v";
    store.constraints.begin()->second.disabled = false;
    auto r = lint(dir.path(), store, ScanScope::repo());
    CHECK(r.violations.empty());
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("abbreviation") {
    CHECK(abbreviate_code("function f() {\n  return 1;\n}") == "function f() {...}");
    CHECK(abbreviate_code("  (x) => x  ") == "(x) => x");
    CHECK(abbreviate_code(std::string(100, 'a')).size() == 80);
}
