#include "contextcov/constraint.hpp"
#include "contextcov/error.hpp"

#include <doctest.h>

#include <random>

using namespace contextcov;

namespace {

Constraint semantic(const std::vector<std::string>& path, const std::string& text) {
    Constraint c;
    c.id = compute_constraint_id(path, text);
    c.domain = Domain::arch_semantic;
    c.original_text = text;
    c.refined_text = text;
    c.source_file = "AGENTS.md";
    c.header_path = path;
    c.enforcement_level = EnforcementLevel::warn;
    c.check = SemanticRule{text, {}};
    return c;
}

} // namespace

// Digests below were produced with Python's hashlib over the same byte layout.
TEST_CASE("identifiers match an independent SHA-256") {
    CHECK(compute_constraint_id({"Backend", "Testing"}, "Use pytest").str() == "b1e61704187f731e");
    CHECK(compute_constraint_id({"Backend", "Database"}, "Use pytest").str() == "b2e9a39fab6e3ba0");
    CHECK(compute_constraint_id({}, "Use pytest").str() == "3f644c843358f8e3");
    CHECK(compute_constraint_id({"Validating TypeScript changes"},
                                "NEVER use `npm run compile` to compile TypeScript files")
              .str() == "f9b866f2e56d7c74");
    CHECK(compute_constraint_id({"Coding Guidelines", "Style"}, "Prefer `async/await` over `Promise` and `then` calls")
              .str() == "7f0004834a19c413");
    CHECK(compute_constraint_id({"Ünïcode"}, "Nie używaj `npm` ✓").str() == "b20fbf5fdf17a365");
}

TEST_CASE("derived identifiers are a pure function of base and index") {
    const auto base = compute_constraint_id({"Backend", "Testing"}, "Use pytest");
    CHECK(derived_constraint_id(base, 1).str() == "9a33e8240a42308c");
    CHECK(derived_constraint_id(base, 2).str() == "1af20e159e8149c2");
    CHECK(derived_constraint_id(base, 1) == derived_constraint_id(base, 1));
}

TEST_CASE("same path and text give the same id; different paths differ") {
    CHECK(compute_constraint_id({"A"}, "x") == compute_constraint_id({"A"}, "x"));
    CHECK(compute_constraint_id({"A", "B"}, "x") != compute_constraint_id({"AB"}, "x"));
    CHECK(compute_constraint_id({"A"}, "B\x1ex") != compute_constraint_id({"A", "B"}, "x"));
}

TEST_CASE("id parsing") {
    CHECK(ConstraintId::parse("0123456789abcdef"));
    CHECK_FALSE(ConstraintId::parse("0123456789ABCDEF"));
    CHECK_FALSE(ConstraintId::parse("0123456789abcde"));
    CHECK_FALSE(ConstraintId::parse("0123456789abcdefg"));
    CHECK_FALSE(ConstraintId::parse("a7f3b2..."));
}

TEST_CASE("enum names") {
    CHECK(to_string(Domain::process) == "PROCESS");
    CHECK(to_string(Domain::arch_deterministic) == "ARCH_DETERMINISTIC");
    CHECK(parse_domain("ARCH_SEMANTIC") == Domain::arch_semantic);
    CHECK_FALSE(parse_domain("process"));
    CHECK(parse_level("block") == EnforcementLevel::block);
    CHECK(parse_language("typescript") == Language::typescript);
    CHECK_FALSE(parse_language("c++"));
}

TEST_CASE("merge: fixpoint, empty extraction and edits") {
    std::vector<Constraint> fresh{semantic({"A"}, "one"), semantic({"A"}, "two"), semantic({"B"}, "three")};
    auto first = merge_incremental({}, fresh);
    CHECK(first.changes.added.size() == 3);
    CHECK(first.store.constraints.size() == 3);

    auto again = merge_incremental(first.store, fresh);
    CHECK(again.changes.added.empty());
    CHECK(again.changes.removed.empty());
    CHECK(again.changes.retained.size() == 3);
    CHECK(again.store == first.store);

    auto emptied = merge_incremental(first.store, {});
    CHECK(emptied.store.constraints.empty());
    CHECK(emptied.changes.removed.size() == 3);

    // Old check objects survive even when the fresh copy differs.
    CheckStore edited = first.store;
    const auto id = compute_constraint_id({"B"}, "three");
    edited.constraints[id].refined_text = "hand edited";
    std::vector<Constraint> next{semantic({"A"}, "one"), semantic({"A"}, "two, edited"), semantic({"B"}, "three")};
    auto merged = merge_incremental(edited, next);
    CHECK(merged.changes.added.size() == 1);
    CHECK(merged.changes.removed.size() == 1);
    CHECK(merged.changes.retained.size() == 2);
    CHECK(merged.store.constraints.at(id).refined_text == "hand edited");
}

TEST_CASE("merge rejects duplicate fresh identifiers") {
    std::vector<Constraint> fresh{semantic({"A"}, "one"), semantic({"A"}, "one")};
    try {
        merge_incremental({}, fresh);
        FAIL("expected ExtractionCollision");
    } catch (const ExtractionCollision& e) {
        CHECK(std::string(e.what()).find(compute_constraint_id({"A"}, "one").str()) != std::string::npos);
    }
}

TEST_CASE("property: merge is idempotent") {
    std::mt19937 rng(7);
    for (int round = 0; round < 100; ++round) {
        std::vector<Constraint> old_set, fresh_set;
        for (int i = 0; i < 8; ++i) {
            auto c = semantic({"S" + std::to_string(rng() % 3)}, "rule " + std::to_string(rng() % 12));
            if (rng() % 2) {
                bool dup = false;
                for (const auto& o : old_set) dup = dup || o.id == c.id;
                if (!dup) old_set.push_back(c);
            }
            bool dup = false;
            for (const auto& o : fresh_set) dup = dup || o.id == c.id;
            if (!dup) fresh_set.push_back(c);
        }
        auto base = merge_incremental({}, old_set).store;
        auto once = merge_incremental(base, fresh_set).store;
        auto twice = merge_incremental(once, fresh_set).store;
        CHECK(once == twice);
        CHECK(once.constraints.size() == fresh_set.size());
    }
}
