#include "contextcov/error.hpp"
#include "contextcov/refine.hpp"

#include <doctest.h>

#include <atomic>
#include <functional>

using namespace contextcov;

namespace {

Slice item(std::vector<std::string> path, std::string text, int depth = 0) {
    Slice s;
    s.source_file = "AGENTS.md";
    s.header_path = std::move(path);
    s.content_text = std::move(text);
    s.kind = NodeKind::list_item;
    s.list_depth = depth;
    return s;
}

class ScriptedClient : public ChatClient {
public:
    explicit ScriptedClient(std::function<std::string(std::string_view)> fn) : fn_(std::move(fn)) {}
    std::string complete(std::string_view, std::string_view payload) const override {
        ++calls;
        return fn_(payload);
    }
    mutable std::atomic<int> calls{0};

private:
    std::function<std::string(std::string_view)> fn_;
};

ProviderConfig remote_with(std::shared_ptr<const ChatClient> c) {
    ProviderConfig cfg;
    cfg.mode = ProviderMode::remote;
    cfg.client = std::move(c);
    return cfg;
}

RoutingDecision route_text(std::vector<std::string> path, std::string text) {
    return route(refine(item(std::move(path), std::move(text)), {}), {});
}

} // namespace

TEST_CASE("deterministic refinement") {
    auto r = refine(item({"Backend", "Testing"}, "Use pytest"), {});
    CHECK(r.refined_text == "In the context of 'Backend > Testing': Use pytest");
    CHECK(r.is_constraint);
    CHECK(refine(item({}, "Use pytest"), {}).refined_text == "Use pytest");
    CHECK_FALSE(refine(item({"Intro"}, "Thanks for contributing!"), {}).is_constraint);
}

TEST_CASE("architecture listings count as constraints without a modal verb") {
    auto listing = item({"Coding Guidelines", "Core Architecture (src/ folder)"},
                        "`src/vs/editor/` - Text editor implementation");
    CHECK(is_architecture_listing(listing));
    CHECK(refine(listing, {}).is_constraint);
    CHECK(listing_path(listing.content_text) == "src/vs/editor/");
    CHECK_FALSE(is_architecture_listing(item({"Tips"}, "`src/vs/editor/` - Text editor implementation")));
    CHECK_FALSE(refine(item({"Tips"}, "`src/vs/editor/` - Text editor implementation"), {}).is_constraint);
}

TEST_CASE("constraint markers are whole words") {
    CHECK(has_constraint_marker("NEVER run tests"));
    CHECK(has_constraint_marker("You must sign commits"));
    CHECK_FALSE(has_constraint_marker("Museum tours are nice"));
    CHECK_FALSE(has_constraint_marker("Thanks for contributing!"));
}

TEST_CASE("enforcement level") {
    CHECK(level_for("NEVER use npm") == EnforcementLevel::block);
    CHECK(level_for("MANDATORY: check it") == EnforcementLevel::block);
    CHECK(level_for("You must not do it") == EnforcementLevel::block);
    CHECK(level_for("Prefer async") == EnforcementLevel::warn);
    CHECK(level_for("You must do it") == EnforcementLevel::warn);
}

TEST_CASE("routing the sample instructions") {
    auto npm = route_text({"Validating TypeScript changes"}, "NEVER use `npm run compile` to compile TypeScript files");
    REQUIRE(npm.domain == Domain::process);
    const auto& pm = std::get<ProcessMeta>(npm.metadata);
    CHECK(pm.binaries == std::vector<std::string>{"npm"});
    CHECK(pm.level == EnforcementLevel::block);

    auto then = route_text({"Coding Guidelines", "Style"}, "Prefer `async/await` over `Promise` and `then` calls");
    REQUIRE(then.domain == Domain::source);
    const auto& sm = std::get<SourceMeta>(then.metadata);
    CHECK(sm.languages == std::vector<Language>{Language::typescript, Language::javascript});
    CHECK(sm.severity == EnforcementLevel::warn);
    CHECK(sm.pattern_kind == "promise_then");

    const std::string storage = "You MUST NOT use storage keys of another component only to make changes to that "
                                "component. You MUST come up with proper API to change another component.";
    auto sem = route_text({"Coding Guidelines", "Code Quality"}, storage);
    REQUIRE(sem.domain == Domain::arch_semantic);
    CHECK(std::get<ArchSemMeta>(sem.metadata).principle_text == storage);

    auto layers = route_text({"Coding Guidelines", "Core Architecture (src/ folder)"},
                             "**Layered architecture** - from `base` to `workbench`");
    REQUIRE(layers.domain == Domain::arch_deterministic);
    CHECK(std::get<ArchDetMeta>(layers.metadata).rule_kind == ArchRuleKind::dependency_direction);

    auto cycles = route_text({"Rules"}, "No circular dependencies between modules");
    REQUIRE(cycles.domain == Domain::arch_deterministic);
    CHECK(std::get<ArchDetMeta>(cycles.metadata).rule_kind == ArchRuleKind::cycle_detection);

    auto edge = route_text({"Rules"}, "The UI layer must not import from the database layer");
    REQUIRE(edge.domain == Domain::arch_deterministic);
    CHECK(std::get<ArchDetMeta>(edge.metadata).rule_kind == ArchRuleKind::boundary_enforcement);
}

TEST_CASE("process analysis: negation and fail-closed alternatives") {
    const auto& t = BinaryTables::defaults();
    auto a = analyze_process("Always use pnpm, never npm", t);
    CHECK(a.preferred == std::vector<std::string>{"pnpm"});
    std::vector<std::string> blocked;
    for (const auto& x : a.targets) blocked.push_back(x.binary);
    std::sort(blocked.begin(), blocked.end());
    CHECK(blocked == std::vector<std::string>{"bun", "npm", "yarn"});

    auto b = analyze_process("NEVER use `npm run compile`", t);
    REQUIRE(b.targets.size() == 1);
    CHECK(b.targets[0] == ProcessTarget{"npm", {"run", "compile"}});

    // Plain English words are only tools inside code spans.
    CHECK(analyze_process("Never make assumptions", t).targets.empty());
    CHECK(analyze_process("Prefer verbose test output", t).targets.empty());
}

TEST_CASE("source shapes") {
    CHECK(classify_source_shape("Prefer `async/await` over `Promise` and `then` calls").kind == "promise_then");
    CHECK(classify_source_shape("Only surround arrow function parameters when necessary").kind ==
          "paren_arrow_param");
    CHECK(classify_source_shape("Use arrow functions `=>` over anonymous function expressions").kind ==
          "prefer_arrow_function");
    auto any = classify_source_shape("Do not use the `any` type");
    CHECK(any.kind == "forbidden_type");
    CHECK(any.token == "any");
    auto call = classify_source_shape("Never call `eval()`");
    CHECK(call.kind == "forbidden_call");
    CHECK(call.token == "eval");
    CHECK(classify_source_shape("Avoid `var`").kind == "forbidden_keyword");
    CHECK(classify_source_shape("Keep functions short").kind == "unknown");
}

TEST_CASE("remote routing accepts valid replies and falls back otherwise") {
    auto slice = item({"Build"}, "Don't use yarn");
    auto good = std::make_shared<ScriptedClient>([](std::string_view) {
        return std::string(R"({"domain":"PROCESS","metadata":{"binaries":["yarn"],"level":"warn","scope":"global"}})");
    });
    auto d = route(refine(slice, {}), remote_with(good));
    CHECK(d.domain == Domain::process);
    CHECK(std::get<ProcessMeta>(d.metadata).level == EnforcementLevel::warn);
    CHECK(d.diagnostic.empty());

    for (const char* bad : {"not json", R"({"domain":"PROCESS","metadata":{"binaries":[],"level":"block"}})",
                            R"({"domain":"SOURCE","metadata":{"languages":["cobol"],"pattern_kind":"x","severity":"warn"}})",
                            R"({"domain":"ELSEWHERE","metadata":{}})"}) {
        auto client = std::make_shared<ScriptedClient>([bad](std::string_view) { return std::string(bad); });
        auto fallback = route(refine(slice, {}), remote_with(client));
        CHECK(fallback.domain == deterministic_route(refine(slice, {}), BinaryTables::defaults()).domain);
        CHECK(fallback.diagnostic.find("fell back") != std::string::npos);
    }

    auto failing = std::make_shared<ScriptedClient>([](std::string_view) -> std::string {
        throw ProviderError("connection refused");
    });
    auto r = refine(slice, remote_with(failing));
    CHECK(r.is_constraint);
    CHECK(r.diagnostic.find("connection refused") != std::string::npos);
}

TEST_CASE("remote refinement with a fenced reply") {
    auto client = std::make_shared<ScriptedClient>([](std::string_view) {
        return std::string("```json\n{\"refined_text\": \"For backend testing, use pytest\", \"is_constraint\": true}\n```");
    });
    auto r = refine(item({"Backend", "Testing"}, "Use pytest"), remote_with(client));
    CHECK(r.refined_text == "For backend testing, use pytest");
    CHECK(r.diagnostic.empty());
}

TEST_CASE("property: deterministic routing is a function of its input") {
    const std::vector<std::string> texts{"NEVER use `npm run compile`", "Prefer verbose test output",
                                         "Avoid `any`", "No circular dependencies", "Use pytest"};
    for (const auto& t : texts) {
        auto a = route_text({"H"}, t);
        auto b = route_text({"H"}, t);
        CHECK(a.domain == b.domain);
        CHECK(a.metadata.index() == b.metadata.index());
    }
}
