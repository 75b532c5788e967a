#include "contextcov/judge.hpp"

#include "contextcov/error.hpp"
#include "contextcov/syntax.hpp"
#include "contextcov/vcs.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

namespace contextcov {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Verdict verdict) { return verdict == Verdict::warning ? "warning" : "ok"; }

namespace {

constexpr const char* kJudgeSystemPrompt =
    "You review a code change against one architectural design principle taken from a repository's "
    "agent instructions. Decide whether the code shown plausibly violates the principle. Answer with a "
    "single JSON object and nothing else: {\"verdict\": \"ok\" | \"warning\", \"explanation\": string, "
    "\"suggestion\": string, \"confidence\": \"low\" | \"medium\" | \"high\"}. Use \"warning\" only when "
    "the code itself gives concrete evidence; name that evidence in the explanation. The explanation must "
    "be non-empty for a warning. The suggestion is a one-line remediation.";

constexpr int kMaxSnippetLines = 2000;
constexpr int kMaxNeighborhoodLines = 200;

std::string user_payload(const JudgmentRequest& r) {
    json j;
    j["principle"] = r.rule.principle_text;
    j["context_hints"] = r.rule.context_hints;
    j["file"] = r.file;
    j["snippet"] = r.snippet;
    j["neighborhood"] = r.neighborhood;
    return j.dump();
}

Judgment unavailable(std::string why) {
    Judgment j;
    j.verdict = Verdict::ok;
    j.diagnostic = "judgment unavailable: " + std::move(why);
    return j;
}

Judgment judge_one(const JudgmentRequest& r, const ChatClient& client) {
    const std::string payload = user_payload(r);
    std::string error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string reply;
        try {
            if (attempt == 0) {
                reply = client.complete(kJudgeSystemPrompt, payload);
            } else {
                json retry = json::parse(payload);
                retry["previous_reply_error"] = error;
                reply = client.complete(kJudgeSystemPrompt, retry.dump());
            }
        } catch (const std::exception& e) {
            return unavailable(std::string("provider error: ") + e.what());
        }
        if (auto parsed = parse_judgment(reply, error)) return *parsed;
    }
    return unavailable("invalid reply: " + error);
}

std::vector<std::string> read_lines(const fs::path& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    ok = static_cast<bool>(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::string numbered(const std::vector<std::string>& lines, int first, int last) {
    std::string out;
    char prefix[16];
    for (int i = first; i <= last && i <= static_cast<int>(lines.size()); ++i) {
        std::snprintf(prefix, sizeof prefix, "%5d| ", i);
        out += prefix;
        out += lines[static_cast<std::size_t>(i - 1)];
        out += '\n';
    }
    return out;
}

using Hunks = std::map<std::string, std::vector<std::pair<int, int>>>;

Hunks changed_hunks(const fs::path& root, const ScanScope& scope) {
    std::vector<std::string> args{"-c", "core.quotepath=off", "diff", "-U0", "--no-color", "--no-ext-diff", "--relative"};
    if (scope.kind == ScopeKind::diff) args.push_back(scope.base);
    args.push_back("--");
    static const std::regex hunk(R"(^@@ -\d+(?:,\d+)? \+(\d+)(?:,(\d+))? @@)");
    Hunks out;
    std::string current;
    for (const auto& line : git_lines(root, args)) {
        if (line.rfind("+++ ", 0) == 0) {
            current = line.rfind("+++ b/", 0) == 0 ? line.substr(6) : std::string();
            continue;
        }
        std::smatch m;
        if (current.empty() || !std::regex_search(line, m, hunk)) continue;
        const int start = std::stoi(m[1].str());
        const int count = m[2].matched ? std::stoi(m[2].str()) : 1;
        out[current].emplace_back(std::max(1, start), std::max(1, start + std::max(count, 1) - 1));
    }
    return out;
}

// Top-level declarations overlapping a hunk that reach outside its window.
std::string enclosing_declarations(const std::string& file, const std::vector<std::string>& lines,
                                   const std::string& text, int lo, int hi, int win_lo, int win_hi) {
    const auto grammar = grammar_for_path(file);
    if (!grammar) return {};
    const SyntaxTree tree = SyntaxTree::parse(*grammar, text);
    const TSNode root = tree.root();
    std::string out;
    for (uint32_t i = 0; i < ts_node_named_child_count(root); ++i) {
        const TSNode n = ts_node_named_child(root, i);
        const int s = static_cast<int>(ts_node_start_point(n).row) + 1;
        const int e = static_cast<int>(ts_node_end_point(n).row) + 1;
        if (e < lo || s > hi) continue;
        if (s >= win_lo && e <= win_hi) continue;
        out += numbered(lines, s, std::min(e, s + kMaxNeighborhoodLines - 1));
    }
    return out;
}

class KeywordStub : public ChatClient {
public:
    explicit KeywordStub(std::map<std::string, std::string> table) : table_(std::move(table)) {}

    std::string complete(std::string_view, std::string_view user_payload) const override {
        json req = json::parse(user_payload);
        const std::string snippet = req.value("snippet", "");
        const std::string file = "/" + req.value("file", "") ;
        std::size_t best = std::string::npos;
        const std::pair<const std::string, std::string>* hit = nullptr;
        for (const auto& entry : table_) {
            if (file.find("/" + entry.second + "/") != std::string::npos) continue;
            const auto pos = snippet.find(entry.first);
            if (pos < best) {
                best = pos;
                hit = &entry;
            }
        }
        json reply;
        if (hit) {
            reply["verdict"] = "warning";
            reply["explanation"] =
                "Appears to access '" + hit->first + "' which belongs to the " + hit->second + " component.";
            reply["suggestion"] = "Define an API in the " + hit->second + " component instead.";
            reply["confidence"] = "stub";
        } else {
            reply["verdict"] = "ok";
            reply["explanation"] = "No keyword owned by another component was found.";
        }
        return reply.dump();
    }

private:
    std::map<std::string, std::string> table_;
};

} // namespace

std::optional<Judgment> parse_judgment(std::string_view reply, std::string& error) {
    std::string_view body = trim(reply);
    if (body.rfind("```", 0) == 0) {
        body.remove_prefix(body.find('\n') == std::string_view::npos ? body.size() : body.find('\n') + 1);
        if (const auto fence = body.rfind("```"); fence != std::string_view::npos) body = body.substr(0, fence);
    }
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        error = "reply is not a JSON object";
        return std::nullopt;
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "verdict" && key != "explanation" && key != "suggestion" && key != "confidence") {
            error = "unexpected key '" + key + "'";
            return std::nullopt;
        }
        if (!value.is_string()) {
            error = "'" + key + "' must be a string";
            return std::nullopt;
        }
    }
    if (!j.contains("verdict") || !j.contains("explanation")) {
        error = "missing 'verdict' or 'explanation'";
        return std::nullopt;
    }
    Judgment out;
    const std::string verdict = j["verdict"];
    if (verdict == "ok") {
        out.verdict = Verdict::ok;
    } else if (verdict == "warning") {
        out.verdict = Verdict::warning;
    } else {
        error = "verdict must be \"ok\" or \"warning\"";
        return std::nullopt;
    }
    out.explanation = std::string(trim(j["explanation"].get<std::string>()));
    if (out.verdict == Verdict::warning && out.explanation.empty()) {
        error = "a warning needs an explanation";
        return std::nullopt;
    }
    if (j.contains("suggestion")) out.suggestion = std::string(trim(j["suggestion"].get<std::string>()));
    if (j.contains("confidence")) out.confidence = j["confidence"].get<std::string>();
    return out;
}

std::vector<JudgedRequest> judge(const std::vector<JudgmentRequest>& requests, const ProviderConfig& cfg) {
    std::vector<JudgedRequest> out(requests.size());
    if (requests.empty()) return out;
    std::shared_ptr<const ChatClient> client = cfg.client ? cfg.client : client_for(cfg);
    parallel_for(requests.size(), client ? cfg.concurrency : 1, [&](std::size_t i) {
        out[i].request = requests[i];
        out[i].judgment = client ? judge_one(requests[i], *client) : unavailable("no provider configured");
    });
    std::stable_sort(out.begin(), out.end(), [](const JudgedRequest& a, const JudgedRequest& b) {
        return std::tie(a.request.file, a.request.rule_id) < std::tie(b.request.file, b.request.rule_id);
    });
    return out;
}

std::vector<JudgmentRequest> build_judgment_requests(const fs::path& root, const CheckStore& store,
                                                     const ScanScope& scope, bool full,
                                                     std::vector<std::string>& diagnostics) {
    std::vector<std::pair<ConstraintId, const SemanticRule*>> rules;
    for (const auto& [id, c] : store.constraints) {
        if (const auto* r = std::get_if<SemanticRule>(&c.check); r && !c.disabled) rules.emplace_back(id, r);
    }
    if (rules.empty()) return {};
    if (scope.kind == ScopeKind::repo && !full) return {};

    const auto files = resolve_scope(root, scope);
    Hunks hunks;
    if (scope.kind != ScopeKind::repo && !full) hunks = changed_hunks(root, scope);

    std::vector<JudgmentRequest> out;
    for (const auto& file : files) {
        bool ok = false;
        const auto lines = read_lines(root / file, ok);
        if (!ok) {
            diagnostics.push_back("cannot read " + file + "; not judged");
            continue;
        }
        if (lines.empty()) continue;
        std::string snippet, neighborhood;
        auto h = hunks.find(file);
        if (h == hunks.end()) {
            snippet = numbered(lines, 1, std::min<int>(static_cast<int>(lines.size()), kMaxSnippetLines));
        } else {
            std::ifstream in(root / file, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            const std::string text = buf.str();
            // Merge overlapping windows so shared context is sent once.
            std::vector<std::pair<int, int>> windows;
            for (auto [lo, hi] : h->second) {
                const int a = std::max(1, lo - kJudgeContextLines);
                const int b = std::min(static_cast<int>(lines.size()), hi + kJudgeContextLines);
                if (a > b) continue;
                if (!windows.empty() && a <= windows.back().second + 1)
                    windows.back().second = std::max(windows.back().second, b);
                else
                    windows.emplace_back(a, b);
            }
            for (const auto& [a, b] : windows) {
                if (!snippet.empty()) snippet += "  ...\n";
                snippet += numbered(lines, a, b);
            }
            try {
                for (auto [lo, hi] : h->second) {
                    auto it = std::find_if(windows.begin(), windows.end(),
                                           [&](const auto& w) { return w.first <= lo && hi <= w.second + 1; });
                    if (it == windows.end()) continue;
                    neighborhood += enclosing_declarations(file, lines, text, lo, hi, it->first, it->second);
                }
            } catch (const std::exception& e) {
                diagnostics.push_back("no declaration context for " + file + ": " + e.what());
            }
        }
        if (trim(snippet).empty()) continue;
        for (const auto& [id, rule] : rules) out.push_back({id, *rule, file, snippet, neighborhood});
    }
    return out;
}

std::shared_ptr<const ChatClient> make_keyword_stub(std::map<std::string, std::string> keyword_owner) {
    return std::make_shared<KeywordStub>(std::move(keyword_owner));
}

std::shared_ptr<const ChatClient> judge_stub_from_env() {
    const char* raw = std::getenv("CONTEXTCOV_JUDGE_STUB");
    if (!raw || !*raw) return nullptr;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("CONTEXTCOV_JUDGE_STUB must be a JSON object");
    std::map<std::string, std::string> table;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) throw Error("CONTEXTCOV_JUDGE_STUB values must be strings");
        table[k] = v.get<std::string>();
    }
    return make_keyword_stub(std::move(table));
}

} // namespace contextcov
