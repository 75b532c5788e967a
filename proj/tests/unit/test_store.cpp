#include "contextcov/error.hpp"
#include "contextcov/store.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace contextcov;

namespace {

Constraint make(const std::vector<std::string>& path, const std::string& text, CheckDescriptor check) {
    Constraint c;
    c.id = compute_constraint_id(path, text);
    c.domain = domain_of(check);
    c.original_text = text;
    c.refined_text = "refined: " + text;
    c.source_file = "AGENTS.md";
    c.header_path = path;
    c.enforcement_level = EnforcementLevel::block;
    c.check = std::move(check);
    return c;
}

CheckStore store_of(std::vector<Constraint> cs) {
    CheckStore s;
    for (auto& c : cs) s.constraints[c.id] = std::move(c);
    return s;
}

StoreErrorKind error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const StoreError& e) {
        return e.kind();
    }
    FAIL("expected StoreError");
    return StoreErrorKind::io;
}

CheckDescriptor random_descriptor(std::mt19937& rng) {
    auto word = [&] { return std::string(1, static_cast<char>('a' + rng() % 26)) + std::to_string(rng() % 100); };
    switch (rng() % 7) {
    case 0: {
        ProcessRule r;
        r.binaries = {"npm", word()};
        r.argv_pattern = {word(), "*"};
        r.action = rng() % 2 ? EnforcementLevel::block : EnforcementLevel::warn;
        r.message = "m \"quoted\" " + word();
        r.suggestion = rng() % 2 ? word() : "";
        return r;
    }
    case 1: {
        SourceRule r;
        r.languages = {Language::python, Language::go};
        r.query = "((identifier) @violation (#eq? @violation \"" + word() + "\"))";
        r.capture_predicates = {{"violation", "^x"}};
        r.message = word();
        r.severity = EnforcementLevel::warn;
        r.suggestion = "Rename {violation}";
        return r;
    }
    case 2: return ArchRule{LayerOrder{{"src/a/", "src/b/", "src/" + word() + "/"}}};
    case 3: return ArchRule{AllowedSubdirs{"src/" + word() + "/", {"x", "y"}}};
    case 4: return ArchRule{ForbiddenEdge{"ui/**", "db/**"}};
    case 5: return ArchRule{NoCycles{"src/**"}};
    default: return SemanticRule{"Keep ✓ " + word(), {word()}};
    }
}

} // namespace

TEST_CASE("single-constraint round trip") {
    testing::TempDir dir;
    ProcessRule r{{"npm"}, {"run", "compile"}, EnforcementLevel::block, "NEVER use npm run compile", "", "global"};
    auto s = store_of({make({"Validating TypeScript changes"}, "NEVER use npm run compile", r)});
    save_store(s, dir / "checks.json");
    CHECK(load_store(dir / "checks.json") == s);
}

TEST_CASE("the reviewed-file shape loads, with a check object in place of code") {
    const std::string text = R"({
  "constraints": {
    "a7f3b2c4d5e6f708": {
      "domain": "PROCESS",
      "original_text": "NEVER use npm run compile",
      "refined_text": "Block npm run compile commands",
      "source_file": "copilot-instructions.md",
      "header_path": ["Validating TypeScript changes"],
      "enforcement_level": "block",
      "check": {"kind": "process", "binaries": ["npm"], "argv_pattern": ["run", "compile"], "action": "block"}
    }
  }
})";
    auto s = parse_store(text);
    REQUIRE(s.constraints.size() == 1);
    const auto& c = s.constraints.begin()->second;
    CHECK(c.domain == Domain::process);
    CHECK(c.header_path == std::vector<std::string>{"Validating TypeScript changes"});
    CHECK(std::get<ProcessRule>(c.check).argv_pattern == std::vector<std::string>{"run", "compile"});
    CHECK(s.version == 1);
}

TEST_CASE("distinct load errors") {
    testing::TempDir dir;
    CHECK(error_kind([&] { load_store(dir / "absent.json"); }) == StoreErrorKind::missing_file);
    testing::write_file(dir / "bad.json", "{ not json");
    CHECK(error_kind([&] { load_store(dir / "bad.json"); }) == StoreErrorKind::malformed);
    testing::write_file(dir / "v.json", R"({"version": 999, "constraints": {}})");
    CHECK(error_kind([&] { load_store(dir / "v.json"); }) == StoreErrorKind::unsupported_version);
    CHECK(error_kind([&] { parse_store(R"({"version":1,"constraints":{"xyz":{}}})"); }) == StoreErrorKind::malformed);
    CHECK(error_kind([&] {
              parse_store(R"({"version":1,"constraints":{"0123456789abcdef":{"domain":"SOURCE","original_text":"x",
                 "source_file":"a","header_path":[],"enforcement_level":"warn",
                 "check":{"kind":"semantic","principle_text":"x"}}}})");
          }) == StoreErrorKind::malformed);
}

TEST_CASE("save refuses invalid descriptors") {
    testing::TempDir dir;
    ProcessRule r;
    auto s = store_of({make({"A"}, "x", r)});
    CHECK(error_kind([&] { save_store(s, dir / "checks.json"); }) == StoreErrorKind::invalid_descriptor);
    CHECK_FALSE(std::filesystem::exists(dir / "checks.json"));
}

TEST_CASE("serialization orders ids and is stable") {
    auto s = store_of({make({"B"}, "two", SemanticRule{"two", {}}), make({"A"}, "one", SemanticRule{"one", {}})});
    const std::string a = serialize_store(s);
    CHECK(a == serialize_store(parse_store(a)));
    const auto first = a.find(s.constraints.begin()->first.str());
    const auto second = a.find(std::next(s.constraints.begin())->first.str());
    CHECK(first < second);
}

TEST_CASE("disabled flag round-trips") {
    auto c = make({"A"}, "one", SemanticRule{"one", {}});
    c.disabled = true;
    auto s = store_of({c});
    const auto text = serialize_store(s);
    CHECK(text.find("\"disabled\": true") != std::string::npos);
    CHECK(parse_store(text) == s);
}

TEST_CASE("property: random valid stores round-trip") {
    std::mt19937 rng(99);
    testing::TempDir dir;
    for (int round = 0; round < 100; ++round) {
        std::vector<Constraint> cs;
        const int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) {
            auto c = make({"H" + std::to_string(rng() % 4), "Sub"}, "text " + std::to_string(round * 10 + i),
                          random_descriptor(rng));
            if (c.domain == Domain::arch_semantic) c.enforcement_level = EnforcementLevel::warn;
            c.disabled = rng() % 5 == 0;
            cs.push_back(std::move(c));
        }
        auto s = store_of(std::move(cs));
        CHECK(parse_store(serialize_store(s)) == s);
        save_store(s, dir / "s.json");
        CHECK(load_store(dir / "s.json") == s);
    }
}
