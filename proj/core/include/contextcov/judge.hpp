#pragma once

#include "contextcov/constraint.hpp"
#include "contextcov/linter.hpp"
#include "contextcov/provider.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

struct JudgmentRequest {
    ConstraintId rule_id;
    SemanticRule rule;
    std::string file;
    std::string snippet; // changed hunks with context, or the whole file
    std::string neighborhood;
};

// There is deliberately no blocking verdict.
enum class Verdict { ok, warning };

std::string_view to_string(Verdict verdict);

struct Judgment {
    Verdict verdict = Verdict::ok;
    std::string explanation;
    std::string suggestion;
    std::optional<std::string> confidence;
    std::string diagnostic; // set when the judgment degraded to OK
};

struct JudgedRequest {
    JudgmentRequest request;
    Judgment judgment;
};

/// Lines of context kept above and below each changed hunk.
inline constexpr int kJudgeContextLines = 20;

/// One judgment per request, sorted by (file, rule_id). Replies must be
/// {"verdict":"ok"|"warning","explanation":...} with optional "suggestion"
/// and "confidence"; after one failed retry, or on transport failure, the
/// verdict is OK with a "judgment unavailable" diagnostic. Uses cfg.client
/// when set, otherwise the remote provider.
std::vector<JudgedRequest> judge(const std::vector<JudgmentRequest>& requests, const ProviderConfig& cfg);

/// Strict reply parsing; nullopt with `error` filled on schema violations.
std::optional<Judgment> parse_judgment(std::string_view reply, std::string& error);

/// Requests for every enabled semantic rule and file in scope. DIFF and
/// UNSTAGED judge the changed hunks (untracked files whole); REPO judges
/// nothing unless `full` is set.
std::vector<JudgmentRequest> build_judgment_requests(const std::filesystem::path& root, const CheckStore& store,
                                                     const ScanScope& scope, bool full,
                                                     std::vector<std::string>& diagnostics);

/// Test-only stand-in for a provider. Warns when the snippet mentions a
/// keyword owned by a component the file does not belong to. Not a judge.
std::shared_ptr<const ChatClient> make_keyword_stub(std::map<std::string, std::string> keyword_owner);

/// The keyword stub configured by CONTEXTCOV_JUDGE_STUB (a JSON object
/// keyword -> owner), or null.
std::shared_ptr<const ChatClient> judge_stub_from_env();

} // namespace contextcov
