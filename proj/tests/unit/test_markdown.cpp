#include "contextcov/error.hpp"
#include "contextcov/markdown.hpp"

#include "support.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <regex>

using namespace contextcov;

namespace {

std::vector<std::pair<std::vector<std::string>, std::string>> pairs(const std::vector<Slice>& slices) {
    std::vector<std::pair<std::vector<std::string>, std::string>> out;
    for (const auto& s : slices) out.emplace_back(s.header_path, s.content_text);
    return out;
}

// Heading-stack line scanner, independent of the parser.
std::vector<std::pair<std::vector<std::string>, std::string>> oracle(const std::string& text) {
    std::vector<std::pair<int, std::string>> stack;
    std::vector<std::pair<std::vector<std::string>, std::string>> out;
    std::istringstream in(text);
    std::string line;
    static const std::regex heading(R"(^(#{1,6})\s+(.*?)\s*$)");
    static const std::regex item(R"(^- (.*)$)");
    while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_match(line, m, heading)) {
            const int level = static_cast<int>(m[1].length());
            while (!stack.empty() && stack.back().first >= level) stack.pop_back();
            stack.emplace_back(level, m[2].str());
        } else if (std::regex_match(line, m, item)) {
            std::vector<std::string> path;
            for (const auto& [l, t] : stack) path.push_back(t);
            out.emplace_back(path, m[1].str());
        }
    }
    return out;
}

} // namespace

TEST_CASE("empty document has no children") {
    auto tree = parse_document("AGENTS.md", "");
    CHECK(tree.root.children.empty());
    CHECK(enumerate_slices(tree).empty());
}

TEST_CASE("heading hierarchy nests by level") {
    auto tree = parse_document("a.md", "# A\n## B\n- x\n## C\n- y");
    REQUIRE(tree.root.children.size() == 1);
    const auto& a = tree.root.children[0];
    CHECK(a.kind == NodeKind::heading);
    CHECK(a.level == 1);
    CHECK(a.text == "A");
    REQUIRE(a.children.size() == 2);
    CHECK(a.children[0].text == "B");
    REQUIRE(a.children[0].children.size() == 1);
    CHECK(a.children[0].children[0].kind == NodeKind::list_item);
    CHECK(a.children[1].text == "C");
    REQUIRE(a.children[1].children.size() == 1);
    CHECK(a.children[1].children[0].kind == NodeKind::list_item);
}

TEST_CASE("slices carry their header path") {
    auto slices = enumerate_slices(
        parse_document("a.md", "# Backend\n## Testing\n- Use pytest\n## Database\n- Use SQLAlchemy"));
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].content_text == "Use pytest");
    CHECK(slices[0].header_path == std::vector<std::string>{"Backend", "Testing"});
    CHECK(slices[1].content_text == "Use SQLAlchemy");
    CHECK(slices[1].header_path == std::vector<std::string>{"Backend", "Database"});
    CHECK(slices[0].source_file == "a.md");
}

TEST_CASE("heading-only documents yield no slices") {
    CHECK(enumerate_slices(parse_document("a.md", "# A\n## B\n### C\n")).empty());
}

TEST_CASE("sample instructions structure") {
    const std::string text = testing::fixture("sample_agents.md");
    auto tree = parse_document("AGENTS.md", text);
    const auto& first = tree.root.children.at(0);
    CHECK(first.kind == NodeKind::heading);
    CHECK(first.level == 2);
    CHECK(first.text == "Validating TypeScript changes");
    REQUIRE(first.children.size() == 3);
    CHECK(first.children[0].kind == NodeKind::paragraph);
    CHECK(first.children[1].kind == NodeKind::list_item);
    CHECK(first.children[2].kind == NodeKind::list_item);

    auto slices = enumerate_slices(tree);
    auto find = [&](std::string_view prefix) -> const Slice* {
        for (const auto& s : slices) {
            if (s.content_text.rfind(prefix, 0) == 0) return &s;
        }
        return nullptr;
    };
    const Slice* npm = find("NEVER use `npm run compile`");
    REQUIRE(npm);
    CHECK(npm->header_path == std::vector<std::string>{"Validating TypeScript changes"});
    const Slice* then = find("Prefer `async/await`");
    REQUIRE(then);
    CHECK(then->content_text == "Prefer `async/await` over `Promise` and `then` calls");
    CHECK(then->header_path == std::vector<std::string>{"Coding Guidelines", "Style"});

    // Multi-line items keep their continuation lines and examples.
    const Slice* paren = find("Only surround arrow function parameters");
    REQUIRE(paren);
    CHECK(paren->content_text.find("(x, y) => x + y") != std::string::npos);

    // Inline code is stripped from heading titles.
    const Slice* base = find("`src/vs/base/`");
    REQUIRE(base);
    CHECK(base->header_path == std::vector<std::string>{"Coding Guidelines", "Core Architecture (src/ folder)"});

    // Nested items are not prefixed with their parent's text.
    const Slice* browser = find("`workbench/browser/`");
    REQUIRE(browser);
    CHECK(browser->list_depth == 1);
}

TEST_CASE("code blocks under a heading are their own slices; fences inside items stay") {
    const std::string text = "# Build\n```sh\nnpm ci\n```\n- Run it:\n  ```sh\n  make all\n  ```\n";
    auto slices = enumerate_slices(parse_document("a.md", text));
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].kind == NodeKind::code_block);
    CHECK(slices[0].content_text.find("npm ci") != std::string::npos);
    CHECK(slices[1].kind == NodeKind::list_item);
    CHECK(slices[1].content_text.find("make all") != std::string::npos);
}

TEST_CASE("heading normalization") {
    CHECK(normalize_heading("## `src/` layout  ") == "src/ layout");
    CHECK(normalize_heading("#   Mixed Case ##") == "Mixed Case");
}

TEST_CASE("invalid UTF-8 reports the offending offset") {
    const std::string bad = std::string("# ok\n- fine\n- bad ") + '\xC3' + '(';
    try {
        parse_document("a.md", bad);
        FAIL("expected EncodingError");
    } catch (const EncodingError& e) {
        CHECK(e.offset() == bad.size() - 2);
    }
}

TEST_CASE("spans are ordered, disjoint and inside the input") {
    const std::string text = testing::fixture("sample_agents.md");
    auto tree = parse_document("AGENTS.md", text);
    std::function<void(const DocumentNode&)> walk = [&](const DocumentNode& n) {
        std::size_t prev_end = n.span.start;
        for (const auto& c : n.children) {
            CHECK(c.span.start <= c.span.end);
            CHECK(c.span.end <= text.size());
            CHECK(c.span.start >= prev_end);
            prev_end = c.span.end;
            if (n.kind == NodeKind::heading) CHECK((c.kind != NodeKind::heading || c.level > n.level));
            walk(c);
        }
    };
    walk(tree.root);
}

TEST_CASE("property: header paths agree with a line-scanner oracle") {
    std::mt19937 rng(20240611);
    const std::vector<std::string> words{"alpha", "beta", "gamma", "delta", "use", "never", "pnpm", "api"};
    for (int round = 0; round < 300; ++round) {
        std::string doc;
        const int lines = std::uniform_int_distribution<int>(0, 25)(rng);
        for (int i = 0; i < lines; ++i) {
            const int pick = std::uniform_int_distribution<int>(0, 2)(rng);
            std::string phrase = words[rng() % words.size()] + " " + words[rng() % words.size()] + " " +
                                 std::to_string(i);
            if (pick == 0) {
                const int level = std::uniform_int_distribution<int>(1, 4)(rng);
                doc += std::string(static_cast<std::size_t>(level), '#') + " " + phrase + "\n\n";
            } else {
                doc += "- " + phrase + "\n";
                if (rng() % 3 == 0) doc += "\n";
            }
        }
        const auto got = pairs(enumerate_slices(parse_document("r.md", doc)));
        CHECK_MESSAGE(got == oracle(doc), doc);
    }
}

TEST_CASE("determinism") {
    const std::string text = testing::fixture("sample_agents.md");
    CHECK(enumerate_slices(parse_document("A.md", text)) == enumerate_slices(parse_document("A.md", text)));
}
