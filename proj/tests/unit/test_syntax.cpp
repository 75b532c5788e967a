#include "contextcov/syntax.hpp"

#include <doctest.h>

using namespace contextcov;

TEST_CASE("language profiles and path mapping") {
    CHECK(language_for_path("a/b.py") == Language::python);
    CHECK(language_for_path("x.tsx") == Language::typescript);
    CHECK(grammar_for_path("x.tsx") == Grammar::tsx);
    CHECK(grammar_for_path("x.ts") == Grammar::typescript);
    CHECK(language_for_path("m.mjs") == Language::javascript);
    CHECK(language_for_path("main.go") == Language::go);
    CHECK(language_for_path("lib.rs") == Language::rust);
    CHECK_FALSE(language_for_path("README.md"));
    CHECK(profile(Language::typescript).grammars.size() == 2);
    for (Language l : kAllLanguages) {
        for (Grammar g : profile(l).grammars) CHECK(ts_language(g) != nullptr);
    }
}

TEST_CASE("parsing tolerates broken input") {
    auto tree = SyntaxTree::parse(Grammar::python, "def f(:\n    return\n");
    CHECK(tree.has_error());
    CHECK(std::string(ts_node_type(tree.root())) == "module");
    auto empty = SyntaxTree::parse(Grammar::typescript, "");
    CHECK_FALSE(empty.has_error());
}

TEST_CASE("query predicates") {
    auto tree = SyntaxTree::parse(Grammar::javascript, "foo(); bar(); foobar();\n");
    auto q = Query::compile(Grammar::javascript, R"(((identifier) @id (#eq? @id "bar")))");
    auto m = q.matches(tree);
    REQUIRE(m.size() == 1);
    CHECK(tree.text(m[0].captures[0].node) == "bar");

    auto re = Query::compile(Grammar::javascript, R"(((identifier) @id (#match? @id "^foo")))");
    CHECK(re.matches(tree).size() == 2);
    auto neg = Query::compile(Grammar::javascript, R"(((identifier) @id (#not-match? @id "^foo")))");
    CHECK(neg.matches(tree).size() == 1);
    auto any = Query::compile(Grammar::javascript, R"(((identifier) @id (#any-of? @id "foo" "foobar")))");
    CHECK(any.matches(tree).size() == 2);

    auto extra = Query::compile(Grammar::javascript, "(identifier) @id", {{"id", "bar$"}});
    CHECK(extra.matches(tree).size() == 2);
}

TEST_CASE("query errors are reported") {
    CHECK_THROWS_AS(Query::compile(Grammar::python, "(not_a_node) @x"), QueryError);
    CHECK_THROWS_AS(Query::compile(Grammar::python, "((identifier) @x"), QueryError);
    CHECK_THROWS_AS(Query::compile(Grammar::python, R"(((identifier) @x (#frob? @x "y")))"), QueryError);
    CHECK_THROWS_AS(Query::compile(Grammar::python, "(identifier) @x", {{"nope", "."}}), QueryError);
    CHECK_THROWS_AS(Query::compile(Grammar::python, R"(((identifier) @x (#match? @x "(")))"), QueryError);
}

TEST_CASE("byte offsets map to 1-based lines and columns") {
    const std::string s = "ab\ncd\n\nx";
    CHECK(location_of(s, 0).line == 1);
    CHECK(location_of(s, 0).column == 1);
    CHECK(location_of(s, 4).line == 2);
    CHECK(location_of(s, 4).column == 2);
    CHECK(location_of(s, 7).line == 4);
    CHECK(location_of(s, 7).column == 1);
}
