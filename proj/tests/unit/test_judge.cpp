#include "contextcov/error.hpp"
#include "contextcov/judge.hpp"

#include "support.hpp"

#include <doctest.h>
// Must match the core library's httplib configuration.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <functional>
#include <thread>

using namespace contextcov;

namespace {

class ScriptedClient : public ChatClient {
public:
    explicit ScriptedClient(std::function<std::string(int, std::string_view)> fn) : fn_(std::move(fn)) {}
    std::string complete(std::string_view, std::string_view payload) const override { return fn_(calls++, payload); }
    mutable std::atomic<int> calls{0};

private:
    std::function<std::string(int, std::string_view)> fn_;
};

ProviderConfig with_client(std::shared_ptr<const ChatClient> c) {
    ProviderConfig cfg;
    cfg.mode = ProviderMode::remote;
    cfg.client = std::move(c);
    return cfg;
}

const std::string kStorageRule = "You MUST NOT use storage keys of another component only to make changes to that "
                                 "component. You MUST come up with proper API to change another component.";

JudgmentRequest request(std::string file, std::string snippet) {
    return {compute_constraint_id({"Code Quality"}, kStorageRule), SemanticRule{kStorageRule, {}}, std::move(file),
            std::move(snippet), ""};
}

CheckStore semantic_store() {
    CheckStore s;
    Constraint c;
    c.id = compute_constraint_id({"Code Quality"}, kStorageRule);
    c.domain = Domain::arch_semantic;
    c.original_text = kStorageRule;
    c.refined_text = kStorageRule;
    c.source_file = "AGENTS.md";
    c.check = SemanticRule{kStorageRule, {}};
    s.constraints[c.id] = c;
    return s;
}

} // namespace

TEST_CASE("strict reply schema") {
    std::string err;
    auto ok = parse_judgment(R"({"verdict":"ok","explanation":"fine"})", err);
    REQUIRE(ok);
    CHECK(ok->verdict == Verdict::ok);
    auto warn = parse_judgment("```json\n{\"verdict\":\"warning\",\"explanation\":\"x\",\"suggestion\":\"y\","
                               "\"confidence\":\"high\"}\n```",
                               err);
    REQUIRE(warn);
    CHECK(warn->verdict == Verdict::warning);
    CHECK(warn->suggestion == "y");
    CHECK(warn->confidence == "high");

    for (const char* bad : {"nope", R"({"verdict":"block","explanation":"x"})", R"({"verdict":"warning"})",
                            R"({"verdict":"ok","explanation":"x","extra":1})", R"({"verdict":"ok","explanation":3})",
                            R"(["ok"])"}) {
        CHECK_FALSE_MESSAGE(parse_judgment(bad, err), bad);
        CHECK_FALSE(err.empty());
    }
}

TEST_CASE("empty request list") {
    CHECK(judge({}, with_client(make_keyword_stub({{"x", "y"}}))).empty());
}

TEST_CASE("keyword stub warns only on foreign keys") {
    auto stub = make_keyword_stub({{"terminal.integrated.fontSize", "terminal"}});
    std::vector<JudgmentRequest> reqs{
        request("src/vs/workbench/contrib/settings/editor.ts",
                "   12| const size = config.get('terminal.integrated.fontSize');"),
        request("src/vs/workbench/contrib/terminal/view.ts",
                "    3| const size = config.get('terminal.integrated.fontSize');"),
        request("src/vs/workbench/contrib/settings/other.ts", "    1| const x = 1;")};
    auto out = judge(reqs, with_client(stub));
    REQUIRE(out.size() == 3);
    // Sorted by file.
    CHECK(out[0].request.file == "src/vs/workbench/contrib/settings/editor.ts");
    CHECK(out[0].judgment.verdict == Verdict::warning);
    CHECK(out[0].judgment.explanation ==
          "Appears to access 'terminal.integrated.fontSize' which belongs to the terminal component.");
    CHECK(out[0].judgment.suggestion == "Define an API in the terminal component instead.");
    CHECK(out[1].request.file == "src/vs/workbench/contrib/settings/other.ts");
    CHECK(out[1].judgment.verdict == Verdict::ok);
    CHECK(out[2].judgment.verdict == Verdict::ok);
}

TEST_CASE("one retry, then degrade to OK") {
    auto recovers = std::make_shared<ScriptedClient>([](int call, std::string_view payload) -> std::string {
        if (call == 0) return "garbage";
        CHECK(payload.find("previous_reply_error") != std::string_view::npos);
        return R"({"verdict":"warning","explanation":"reads a foreign key"})";
    });
    auto a = judge({request("a.ts", "1| x")}, with_client(recovers));
    CHECK(recovers->calls == 2);
    CHECK(a.at(0).judgment.verdict == Verdict::warning);

    auto never = std::make_shared<ScriptedClient>([](int, std::string_view) { return std::string("garbage"); });
    auto b = judge({request("a.ts", "1| x")}, with_client(never));
    CHECK(never->calls == 2);
    CHECK(b.at(0).judgment.verdict == Verdict::ok);
    CHECK(b.at(0).judgment.diagnostic.rfind("judgment unavailable", 0) == 0);

    auto down = std::make_shared<ScriptedClient>([](int, std::string_view) -> std::string {
        throw ProviderError("connection refused");
    });
    auto c = judge({request("a.ts", "1| x")}, with_client(down));
    CHECK(c.at(0).judgment.verdict == Verdict::ok);
    CHECK(c.at(0).judgment.diagnostic.find("connection refused") != std::string::npos);

    auto d = judge({request("a.ts", "1| x")}, ProviderConfig{});
    CHECK(d.at(0).judgment.diagnostic.find("no provider configured") != std::string::npos);
}

TEST_CASE("HTTP client against a local chat-completions server") {
    httplib::Server server;
    std::atomic<int> hits{0};
    std::string seen_auth, seen_model;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        if (hits++ == 0) {
            res.status = 503;
            return;
        }
        seen_auth = req.get_header_value("Authorization");
        auto body = nlohmann::json::parse(req.body);
        seen_model = body.at("model").get<std::string>();
        CHECK(body.at("temperature") == 0);
        CHECK(body.at("messages").size() == 2);
        nlohmann::json reply = {
            {"choices", {{{"message", {{"role", "assistant"},
                                       {"content", R"({"verdict":"warning","explanation":"served"})"}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ProviderConfig cfg;
    cfg.mode = ProviderMode::remote;
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.model = "local-model";
    cfg.api_key = "secret";
    cfg.timeout_seconds = 5;
    auto out = judge({request("a.ts", "1| x")}, cfg);
    server.stop();
    t.join();

    REQUIRE(out.size() == 1);
    CHECK(out[0].judgment.verdict == Verdict::warning);
    CHECK(out[0].judgment.explanation == "served");
    CHECK(hits == 2);
    CHECK(seen_auth == "Bearer secret");
    CHECK(seen_model == "local-model");
}

TEST_CASE("unreachable provider degrades") {
    ProviderConfig cfg;
    cfg.mode = ProviderMode::remote;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.timeout_seconds = 1;
    cfg.max_retries = 0;
    auto out = judge({request("a.ts", "1| x")}, cfg);
    CHECK(out.at(0).judgment.verdict == Verdict::ok);
    CHECK(out.at(0).judgment.diagnostic.find("judgment unavailable") != std::string::npos);
}

TEST_CASE("requests cover changed hunks with context") {
    testing::TempDir dir;
    testing::git_init(dir.path());
    std::string body;
    for (int i = 1; i <= 100; ++i) body += "const v" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
    testing::write_file(dir / "src/a.ts", body);
    testing::write_file(dir / "src/b.ts", "export const b = 1;\n");
    testing::git_commit_all(dir.path());
    std::vector<std::string> diags;

    CHECK(build_judgment_requests(dir.path(), semantic_store(), ScanScope::diff("HEAD"), false, diags).empty());
    CHECK(build_judgment_requests(dir.path(), semantic_store(), ScanScope::repo(), false, diags).empty());
    CHECK(build_judgment_requests(dir.path(), semantic_store(), ScanScope::repo(), true, diags).size() == 2);

    std::string edited = body;
    edited.replace(edited.find("const v50 = 50;"), 15, "const v50 = 5000;");
    testing::write_file(dir / "src/a.ts", edited);
    testing::write_file(dir / "src/new.ts", "export const n = 2;\n");
    auto reqs = build_judgment_requests(dir.path(), semantic_store(), ScanScope::diff("HEAD"), false, diags);
    REQUIRE(reqs.size() == 2);
    CHECK(reqs[0].file == "src/a.ts");
    CHECK(reqs[0].snippet.find("   50| const v50 = 5000;") != std::string::npos);
    CHECK(reqs[0].snippet.find("   30| ") != std::string::npos);
    CHECK(reqs[0].snippet.find("   29| ") == std::string::npos);
    CHECK(reqs[0].snippet.find("   70| ") != std::string::npos);
    CHECK(reqs[0].snippet.find("   71| ") == std::string::npos);
    CHECK(reqs[1].file == "src/new.ts");
    CHECK(reqs[1].snippet.find("    1| export const n = 2;") != std::string::npos);

    auto disabled = semantic_store();
    disabled.constraints.begin()->second.disabled = true;
    CHECK(build_judgment_requests(dir.path(), disabled, ScanScope::diff("HEAD"), false, diags).empty());
}

TEST_CASE("neighborhood carries the enclosing declaration") {
    testing::TempDir dir;
    testing::git_init(dir.path());
    std::string body = "export function big() {\n";
    for (int i = 0; i < 60; ++i) body += "  const a" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
    body += "}\n";
    testing::write_file(dir / "f.ts", body);
    testing::git_commit_all(dir.path());
    std::string edited = body;
    edited.replace(edited.find("const a30 = 30;"), 15, "const a30 = 31;");
    testing::write_file(dir / "f.ts", edited);
    std::vector<std::string> diags;
    auto reqs = build_judgment_requests(dir.path(), semantic_store(), ScanScope::unstaged(), false, diags);
    REQUIRE(reqs.size() == 1);
    CHECK(reqs[0].neighborhood.find("export function big()") != std::string::npos);
}
