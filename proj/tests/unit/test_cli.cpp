#include "cli.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = contextcov::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kParenAgents = "## Style\n"
                                 "- NEVER surround a single arrow function parameter with parentheses.\n"
                                 "  For example, `(x) => x + x` is wrong but `x => x + x` is correct.\n";

} // namespace

TEST_CASE("generate on the sample instructions, then rerun and edit") {
    testing::TempDir repo;
    const std::string text = testing::fixture("sample_agents.md");
    testing::write_file(repo / "AGENTS.md", text);
    const std::string root = repo.path().string();

    auto first = cli({"generate", "--root", root});
    REQUIRE_MESSAGE(first.code == 0, first.err);
    CHECK(first.out.find("Wrote ") != std::string::npos);
    CHECK(fs::exists(repo / ".contextcov/checks.json"));
    const std::string stored = testing::read_file(repo / ".contextcov/checks.json");

    auto again = cli({"generate", "--root", root});
    REQUIRE(again.code == 0);
    CHECK(again.out.find("added 0, removed 0") != std::string::npos);
    CHECK(testing::read_file(repo / ".contextcov/checks.json") == stored);

    std::string edited = text;
    const std::string from = "NEVER run tests if there are compilation errors";
    edited.replace(edited.find(from), from.size(), "NEVER run tests while the build is failing");
    testing::write_file(repo / "AGENTS.md", edited);
    auto third = cli({"generate", "--root", root});
    REQUIRE(third.code == 0);
    CHECK(third.out.find("added 1, removed 1") != std::string::npos);

    auto v = cli({"validate", "--root", root});
    CHECK(v.code == 0);
    CHECK(v.out.find("(100.0%)") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    testing::TempDir repo;
    const std::string root = repo.path().string();
    auto g = cli({"generate", "--root", root});
    CHECK(g.code == 2);
    CHECK(g.err.find("no instruction file") != std::string::npos);

    auto c = cli({"check", "--root", root});
    CHECK(c.code == 2);
    CHECK(c.err.find("contextcov generate") != std::string::npos);

    CHECK(cli({"check", "--scope", "everything"}).code == 2);
    CHECK(cli({}).code == 2);
}

TEST_CASE("validate reports corrupt queries and malformed stores") {
    testing::TempDir repo;
    const std::string root = repo.path().string();
    testing::write_file(repo / ".contextcov/checks.json", "{\"version\": 1, \"constraints\": {}}");
    auto empty = cli({"validate", "--root", root});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("0/0 checks passed validation (100.0%)") != std::string::npos);

    testing::write_file(repo / ".contextcov/checks.json", "{ not json");
    CHECK(cli({"validate", "--root", root}).code == 2);

    testing::write_file(repo / "AGENTS.md", kParenAgents);
    REQUIRE(cli({"generate", "--root", root}).code == 2); // existing store is malformed
    fs::remove(repo / ".contextcov/checks.json");
    REQUIRE(cli({"generate", "--root", root}).code == 0);

    // Break the stored query text.
    std::string store = testing::read_file(repo / ".contextcov/checks.json");
    const auto q = store.find("\"query\": \"");
    REQUIRE(q != std::string::npos);
    store.insert(q + 10, "((( ");
    testing::write_file(repo / ".contextcov/checks.json", store);
    auto bad = cli({"validate", "--root", root});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("invalid ") != std::string::npos);
}

TEST_CASE("check exit codes and deterministic json") {
    testing::TempDir repo;
    const std::string root = repo.path().string();
    testing::write_file(repo / "AGENTS.md", kParenAgents);
    testing::write_file(repo / "src/a.ts", "const f = (x) => x + x;\nconst g = y => y;\n");
    REQUIRE(cli({"generate", "--root", root}).code == 0);

    auto text = cli({"check", "--root", root, "--strict"});
    CHECK(text.code == 1);
    CHECK(text.out.find("[ContextCov] Source violation: src/a.ts:1") != std::string::npos);

    auto j1 = cli({"check", "--root", root, "--format", "json"});
    auto j2 = cli({"check", "--root", root, "--format", "json"});
    CHECK(j1.out == j2.out);
    CHECK(j1.code == j2.code);

    testing::write_file(repo / "src/a.ts", "const f = x => x + x;\n");
    CHECK(cli({"check", "--root", root, "--strict"}).code == 0);
}

TEST_CASE("shim subcommands") {
    testing::TempDir repo;
    const std::string root = repo.path().string();
    testing::write_file(repo / "AGENTS.md", testing::fixture("sample_agents.md"));
    REQUIRE(cli({"generate", "--root", root}).code == 0);

    auto before = cli({"shim", "status", "--root", root});
    CHECK(before.code == 1);
    CHECK(before.out.find("not installed") != std::string::npos);

    auto inst = cli({"shim", "install", "--root", root});
    REQUIRE_MESSAGE(inst.code == 0, inst.err);
    CHECK(inst.out.find("installed ") != std::string::npos);
    CHECK(inst.out.find("npm") != std::string::npos);
    CHECK(inst.out.find("export PATH=") != std::string::npos);

    auto st = cli({"shim", "status", "--root", root});
    CHECK(st.code == 0);
    CHECK(st.out.rfind("ok, ", 0) == 0);

    auto un = cli({"shim", "uninstall", "--root", root});
    CHECK(un.code == 0);
    CHECK(un.out.rfind("removed ", 0) == 0);
    CHECK(cli({"shim", "uninstall", "--root", root}).out.rfind("nothing installed", 0) == 0);
}
