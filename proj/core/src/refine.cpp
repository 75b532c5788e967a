#include "contextcov/refine.hpp"

#include "contextcov/error.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>
#include <set>

namespace contextcov {

namespace {

using std::regex_constants::icase;

const std::regex& constraint_marker_re() {
    static const std::regex re(
        R"(\b(must|never|always|use|prefer|avoid|do not|don't|don’t|only|mandatory|required|forbid|block)\b)",
        std::regex::ECMAScript | icase);
    return re;
}

const std::regex& negation_re() {
    static const std::regex re(
        R"(\b(never|not|no|avoid|forbid|forbidden|prohibited|disallow|disallowed|cannot)\b|n't\b|n’t\b)",
        std::regex::ECMAScript | icase);
    return re;
}

bool search(std::string_view text, const std::regex& re) {
    return std::regex_search(text.begin(), text.end(), re);
}

// Tools that are also ordinary English words are only recognised inside
// inline code.
const std::set<std::string, std::less<>>& code_only_binaries() {
    static const std::set<std::string, std::less<>> s = {"go", "make", "node", "python", "python3", "black",
                                                         "rm", "sudo", "ninja", "helm"};
    return s;
}

struct Clause {
    std::size_t start = 0;
    std::size_t end = 0;
    bool negated = false;
};

struct CodeSpan {
    std::size_t start = 0; // offset of the opening backtick
    std::size_t end = 0;   // one past the closing backtick
    std::string content;
};

std::vector<CodeSpan> code_spans(std::string_view s) {
    std::vector<CodeSpan> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = s.find('`', pos);
        if (open == std::string_view::npos) break;
        std::size_t run = open;
        while (run < s.size() && s[run] == '`') ++run;
        const std::string_view fence = s.substr(open, run - open);
        const std::size_t close = s.find(fence, run);
        if (close == std::string_view::npos) break;
        out.push_back({open, close + fence.size(), std::string(trim(s.substr(run, close - run)))});
        pos = close + fence.size();
    }
    return out;
}

// Backtick contents replaced by neutral filler so punctuation inside code
// does not split clauses.
std::string mask_code(std::string_view text, const std::vector<CodeSpan>& spans) {
    std::string mask(text);
    for (const auto& sp : spans) {
        for (std::size_t i = sp.start; i < sp.end; ++i) mask[i] = 'x';
    }
    return mask;
}

std::vector<Clause> split_clauses(const std::string& mask) {
    static const std::regex contrast(R"(\b(instead of|rather than|over)\b)", std::regex::ECMAScript | icase);
    static const std::regex plain_break(R"(\bbut\b)", std::regex::ECMAScript | icase);

    struct Cut {
        std::size_t at;
        std::size_t resume;
        bool negate_next;
    };
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const char c = mask[i];
        if (c == ';' || c == ',' || c == '!' || c == '?' || c == '\n' || c == ':' || c == '(' || c == ')') {
            cuts.push_back({i, i + 1, false});
        } else if (c == '.' && (i + 1 == mask.size() || std::isspace(static_cast<unsigned char>(mask[i + 1])))) {
            cuts.push_back({i, i + 1, false});
        }
    }
    for (auto it = std::sregex_iterator(mask.begin(), mask.end(), contrast); it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>(it->position());
        cuts.push_back({pos, pos + static_cast<std::size_t>(it->length()), true});
    }
    for (auto it = std::sregex_iterator(mask.begin(), mask.end(), plain_break); it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>(it->position());
        cuts.push_back({pos, pos + static_cast<std::size_t>(it->length()), false});
    }
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.at < b.at; });

    std::vector<Clause> clauses;
    std::size_t start = 0;
    bool forced = false;
    for (const auto& cut : cuts) {
        if (cut.at < start) continue;
        clauses.push_back({start, cut.at, forced});
        // A contrast phrase negates the clause that follows it; other breaks
        // keep an inherited contrast alive only across list commas.
        forced = cut.negate_next || (forced && mask[cut.at] == ',');
        start = cut.resume;
    }
    clauses.push_back({start, mask.size(), forced});
    for (auto& cl : clauses) {
        const std::string_view body(mask.data() + cl.start, cl.end - cl.start);
        if (search(body, negation_re())) cl.negated = true;
    }
    return clauses;
}

const Clause* clause_at(const std::vector<Clause>& clauses, std::size_t pos) {
    for (const auto& cl : clauses) {
        if (pos >= cl.start && pos < cl.end) return &cl;
    }
    return clauses.empty() ? nullptr : &clauses.back();
}

std::vector<std::string> tokens_of(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

bool is_shell_operator(std::string_view t) {
    return t == "&&" || t == "||" || t == "|" || t == ";" || t == ">" || t == ">>" || t == "<" || t == "2>&1";
}

bool looks_like_code(std::string_view span) {
    if (span.empty()) return false;
    if (span.find_first_of(" \t") == std::string_view::npos) return true;
    return span.find_first_of("()=>{}[];.") != std::string_view::npos;
}

std::vector<std::string> heading_text(const Slice& slice) { return slice.header_path; }

bool under_structure_heading(const Slice& slice) {
    for (const auto& h : heading_text(slice)) {
        const std::string lower = to_lower(h);
        if (lower.find("architecture") != std::string::npos || lower.find("structure") != std::string::npos)
            return true;
    }
    return false;
}

const std::regex& listing_re() {
    static const std::regex re(R"(^\**`?([A-Za-z0-9_.@-]+(?:/[A-Za-z0-9_.@-]+)*/)`?\**\s*[-–—:]\s*\S)");
    return re;
}

const std::regex& arch_keyword_re() {
    static const std::regex re(R"(\b(import|imports|imported|importing|circular)\b|\bdepend|\blayer|\bmodules?\b|\bdirector(y|ies)\b)",
                               std::regex::ECMAScript | icase);
    return re;
}

const std::regex& source_keyword_re() {
    static const std::regex re(R"(\b(functions?|types?|typed|typing|naming|style|python|typescript|javascript|rust|golang)\b)",
                               std::regex::ECMAScript | icase);
    return re;
}

std::vector<Language> languages_named(std::string_view text) {
    std::set<Language> found;
    if (contains_word(text, "python")) found.insert(Language::python);
    if (contains_word(text, "typescript") || contains_word(text, "tsx")) found.insert(Language::typescript);
    if (contains_word(text, "javascript") || contains_word(text, "node.js")) found.insert(Language::javascript);
    if (contains_word(text, "golang") || search(text, std::regex(R"(\bGo\b)"))) found.insert(Language::go);
    if (contains_word(text, "rust")) found.insert(Language::rust);
    std::vector<Language> out;
    for (Language l : kAllLanguages) {
        if (found.count(l)) out.push_back(l);
    }
    return out;
}

std::vector<Language> languages_for_shape(const SourceShape& shape) {
    const std::string& k = shape.kind;
    if (k == "promise_then" || k == "paren_arrow_param" || k == "prefer_arrow_function")
        return {Language::typescript, Language::javascript};
    if (k == "forbidden_type") return {Language::typescript};
    if (k == "forbidden_keyword") {
        if (shape.token == "var") return {Language::typescript, Language::javascript};
        if (shape.token == "global") return {Language::python};
        if (shape.token == "goto") return {Language::go};
        if (shape.token == "unsafe") return {Language::rust};
    }
    return {};
}

std::string json_object_reply(const std::string& reply) {
    // Some providers wrap JSON in a fenced block despite the response format.
    std::string_view t = trim(reply);
    if (t.substr(0, 3) == "```") {
        const auto nl = t.find('\n');
        const auto close = t.rfind("```");
        if (nl != std::string_view::npos && close > nl) t = trim(t.substr(nl + 1, close - nl - 1));
    }
    return std::string(t);
}

constexpr std::string_view kRefineSystemPrompt =
    "You rewrite one rule taken from an agent instruction file into a standalone, unambiguous statement. "
    "Incorporate the scope implied by its header path. Decide whether it is an enforceable constraint "
    "(as opposed to description, greeting or commentary). Reply with exactly one JSON object: "
    "{\"refined_text\": string, \"is_constraint\": boolean}.";

constexpr std::string_view kRouteSystemPrompt =
    "Classify one coding-agent constraint into exactly one enforcement domain and reply with exactly one JSON "
    "object {\"domain\": D, \"metadata\": M}. Domains and metadata:\n"
    "PROCESS (shell commands or tools to block): {\"binaries\": [string, ...] (non-empty), "
    "\"level\": \"block\"|\"warn\", \"scope\": \"global\" or a path glob}. Example: \"NEVER use npm run compile\" -> "
    "{\"domain\":\"PROCESS\",\"metadata\":{\"binaries\":[\"npm\"],\"level\":\"block\",\"scope\":\"global\"}}\n"
    "SOURCE (code patterns checkable on a syntax tree): {\"languages\": subset of [\"python\",\"typescript\","
    "\"javascript\",\"go\",\"rust\"], \"pattern_kind\": string, \"severity\": \"block\"|\"warn\"}.\n"
    "ARCH_DETERMINISTIC (import graph or file placement rules): {\"rule_kind\": \"dependency_direction\"|"
    "\"cycle_detection\"|\"boundary_enforcement\"}.\n"
    "ARCH_SEMANTIC (design principles needing judgment): {\"principle_text\": string}.";

std::optional<RoutingDecision> parse_route_reply(const std::string& reply, const RefinedSlice& refined) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_object_reply(reply));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    if (!j.is_object() || !j.contains("domain") || !j["domain"].is_string() || !j.contains("metadata") ||
        !j["metadata"].is_object())
        return std::nullopt;
    auto domain = parse_domain(j["domain"].get<std::string>());
    if (!domain) return std::nullopt;
    const auto& m = j["metadata"];
    auto level_field = [&](const char* key) -> std::optional<EnforcementLevel> {
        if (!m.contains(key) || !m[key].is_string()) return std::nullopt;
        return parse_level(m[key].get<std::string>());
    };
    RoutingDecision d;
    d.domain = *domain;
    switch (*domain) {
    case Domain::process: {
        ProcessMeta meta;
        if (!m.contains("binaries") || !m["binaries"].is_array() || m["binaries"].empty()) return std::nullopt;
        for (const auto& b : m["binaries"]) {
            if (!b.is_string() || b.get<std::string>().empty()) return std::nullopt;
            meta.binaries.push_back(b.get<std::string>());
        }
        auto level = level_field("level");
        if (!level) return std::nullopt;
        meta.level = *level;
        if (m.contains("scope")) {
            if (!m["scope"].is_string()) return std::nullopt;
            meta.scope = m["scope"].get<std::string>();
        }
        d.metadata = meta;
        break;
    }
    case Domain::source: {
        SourceMeta meta;
        if (!m.contains("languages") || !m["languages"].is_array()) return std::nullopt;
        for (const auto& l : m["languages"]) {
            if (!l.is_string()) return std::nullopt;
            auto lang = parse_language(l.get<std::string>());
            if (!lang) return std::nullopt;
            meta.languages.push_back(*lang);
        }
        if (!m.contains("pattern_kind") || !m["pattern_kind"].is_string()) return std::nullopt;
        meta.pattern_kind = m["pattern_kind"].get<std::string>();
        auto severity = level_field("severity");
        if (!severity) return std::nullopt;
        meta.severity = *severity;
        d.metadata = meta;
        break;
    }
    case Domain::arch_deterministic: {
        if (!m.contains("rule_kind") || !m["rule_kind"].is_string()) return std::nullopt;
        const std::string kind = m["rule_kind"].get<std::string>();
        ArchDetMeta meta;
        if (kind == "dependency_direction")
            meta.rule_kind = ArchRuleKind::dependency_direction;
        else if (kind == "cycle_detection")
            meta.rule_kind = ArchRuleKind::cycle_detection;
        else if (kind == "boundary_enforcement")
            meta.rule_kind = ArchRuleKind::boundary_enforcement;
        else
            return std::nullopt;
        d.metadata = meta;
        break;
    }
    case Domain::arch_semantic: {
        if (!m.contains("principle_text") || !m["principle_text"].is_string()) return std::nullopt;
        std::string principle = m["principle_text"].get<std::string>();
        if (trim(principle).empty()) principle = refined.slice.content_text;
        d.metadata = ArchSemMeta{principle};
        break;
    }
    }
    return d;
}

} // namespace

std::string_view to_string(ArchRuleKind kind) {
    switch (kind) {
    case ArchRuleKind::dependency_direction: return "dependency_direction";
    case ArchRuleKind::cycle_detection: return "cycle_detection";
    case ArchRuleKind::boundary_enforcement: return "boundary_enforcement";
    }
    return "boundary_enforcement";
}

const BinaryTables& BinaryTables::defaults() {
    static const BinaryTables tables{
        {"npm",    "pnpm",   "yarn",  "bun",   "npx",     "pnpx",   "bunx",   "pip",    "pip3",   "pipx",
         "uv",     "poetry", "conda", "pipenv", "python", "python3", "pytest", "tox",   "node",   "deno",
         "tsc",    "jest",   "vitest", "mocha", "eslint", "prettier", "ruff",  "black",  "mypy",   "flake8",
         "go",     "cargo",  "rustc", "rustup", "make",   "cmake",  "ninja",  "bazel",  "gradle", "mvn",
         "git",    "docker", "docker-compose", "kubectl", "helm", "terraform", "curl", "wget", "sudo", "rm"},
        {{"npm", "pnpm", "yarn", "bun"}, {"pip", "pip3", "uv", "poetry"}},
    };
    return tables;
}

bool BinaryTables::is_known(std::string_view name) const {
    if (std::find(known.begin(), known.end(), name) != known.end()) return true;
    return group_of(name) != nullptr;
}

const std::vector<std::string>* BinaryTables::group_of(std::string_view name) const {
    for (const auto& group : alternatives) {
        if (std::find(group.begin(), group.end(), name) != group.end()) return &group;
    }
    return nullptr;
}

ProcessAnalysis analyze_process(std::string_view text, const BinaryTables& tables) {
    struct Mention {
        std::size_t pos;
        std::string binary;
        std::vector<std::string> argv;
    };
    const auto spans = code_spans(text);
    const std::string mask = mask_code(text, spans);
    const auto clauses = split_clauses(mask);

    std::vector<Mention> mentions;
    for (const auto& sp : spans) {
        auto tokens = tokens_of(sp.content);
        if (!tokens.empty() && tokens.front() == "$") tokens.erase(tokens.begin());
        if (tokens.empty() || !tables.is_known(tokens.front())) continue;
        Mention m{sp.start, tokens.front(), {}};
        for (std::size_t i = 1; i < tokens.size() && !is_shell_operator(tokens[i]); ++i) m.argv.push_back(tokens[i]);
        mentions.push_back(std::move(m));
    }
    static const std::regex word_re(R"([A-Za-z0-9][A-Za-z0-9_+-]*)");
    for (auto it = std::sregex_iterator(mask.begin(), mask.end(), word_re); it != std::sregex_iterator(); ++it) {
        const std::string word = it->str();
        const auto pos = static_cast<std::size_t>(it->position());
        if (pos > 0 && (mask[pos - 1] == '/' || mask[pos - 1] == '.' || mask[pos - 1] == '-')) continue;
        if (code_only_binaries().count(word) || !tables.is_known(word)) continue;
        mentions.push_back({pos, word, {}});
    }
    std::sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) { return a.pos < b.pos; });

    ProcessAnalysis out;
    std::vector<ProcessTarget> negated;
    for (const auto& m : mentions) {
        const Clause* cl = clause_at(clauses, m.pos);
        if (cl && cl->negated) {
            negated.push_back({m.binary, m.argv});
        } else if (std::find(out.preferred.begin(), out.preferred.end(), m.binary) == out.preferred.end()) {
            out.preferred.push_back(m.binary);
        }
    }

    auto add_target = [&](ProcessTarget t) {
        for (auto& existing : out.targets) {
            if (existing.binary != t.binary) continue;
            if (existing.argv_pattern.empty() || existing == t) return;
            if (t.argv_pattern.empty()) {
                existing = std::move(t);
                return;
            }
        }
        out.targets.push_back(std::move(t));
    };
    for (auto& t : negated) add_target(std::move(t));
    for (const auto& p : out.preferred) {
        const auto* group = tables.group_of(p);
        if (!group) continue;
        for (const auto& alt : *group) {
            if (std::find(out.preferred.begin(), out.preferred.end(), alt) == out.preferred.end())
                add_target({alt, {}});
        }
    }
    // A tool the text sanctions outright is never blocked wholesale.
    out.targets.erase(std::remove_if(out.targets.begin(), out.targets.end(),
                                     [&](const ProcessTarget& t) {
                                         return t.argv_pattern.empty() &&
                                                std::find(out.preferred.begin(), out.preferred.end(), t.binary) !=
                                                    out.preferred.end();
                                     }),
                      out.targets.end());

    for (const auto& sentence : split(text, '.')) {
        if (contains_word(sentence, "instead")) {
            out.instead = std::string(trim(sentence));
            if (!out.instead.empty()) out.instead += '.';
            break;
        }
    }
    return out;
}

bool has_constraint_marker(std::string_view text) { return search(text, constraint_marker_re()); }

std::string listing_path(std::string_view content_text) {
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(content_text.begin(), content_text.end(), m, listing_re())) return m[1].str();
    return {};
}

bool is_architecture_listing(const Slice& slice) {
    if (slice.kind != NodeKind::list_item || !under_structure_heading(slice)) return false;
    if (!listing_path(slice.content_text).empty()) return true;
    // Direction statements inside the same listing ("Layered architecture -
    // from base to workbench") carry no modal verb either.
    return search(slice.content_text, arch_keyword_re());
}

EnforcementLevel level_for(std::string_view original_text) {
    static const std::regex re(R"(\b(mandatory|never)\b|\bmust\s+not\b)", std::regex::ECMAScript | icase);
    return search(original_text, re) ? EnforcementLevel::block : EnforcementLevel::warn;
}

std::string deterministic_refinement(const Slice& slice) {
    if (slice.header_path.empty()) return slice.content_text;
    return "In the context of '" + join(slice.header_path, " > ") + "': " + slice.content_text;
}

SourceShape classify_source_shape(std::string_view text) {
    SourceShape shape;
    const std::string lower = to_lower(text);
    auto has = [&](std::string_view needle) { return lower.find(needle) != std::string::npos; };

    if (contains_word(text, "then") && (has("promise") || has("await"))) {
        shape.kind = "promise_then";
        return shape;
    }
    if (has("arrow function") && has("parameter") && (has("parenthes") || has("surround") || has("paren"))) {
        shape.kind = "paren_arrow_param";
        return shape;
    }
    if (has("arrow function") && (has("function expression") || has("anonymous function"))) {
        shape.kind = "prefer_arrow_function";
        return shape;
    }

    const auto spans = code_spans(text);
    const std::string mask = mask_code(text, spans);
    const auto clauses = split_clauses(mask);
    const CodeSpan* forbidden = nullptr;
    for (const auto& sp : spans) {
        const Clause* cl = clause_at(clauses, sp.start);
        if (cl && cl->negated) {
            forbidden = &sp;
            break;
        }
    }
    if (!forbidden) return shape;

    std::string token = forbidden->content;
    static const std::regex ident_re(R"(^[A-Za-z_$][A-Za-z0-9_$]*$)");
    static const std::regex call_re(R"(^([A-Za-z_$][A-Za-z0-9_$]*(?:\.[A-Za-z_$][A-Za-z0-9_$]*)*)(\(\))?$)");
    static const std::set<std::string, std::less<>> keywords = {"var", "global", "goto", "unsafe"};
    std::smatch m;
    if (std::regex_match(token, ident_re) && (contains_word(text, "type") || contains_word(text, "types"))) {
        shape.kind = "forbidden_type";
        shape.token = token;
    } else if (keywords.count(token)) {
        shape.kind = "forbidden_keyword";
        shape.token = token;
    } else if (std::regex_match(token, m, call_re) &&
               (m[2].matched || token.find('.') != std::string::npos || contains_word(text, "call") ||
                contains_word(text, "calls") || contains_word(text, "function"))) {
        shape.kind = "forbidden_call";
        shape.token = m[1].str();
    } else if (std::regex_match(token, ident_re)) {
        shape.kind = "forbidden_identifier";
        shape.token = token;
    }
    return shape;
}

RefinedSlice refine(const Slice& slice, const ProviderConfig& cfg) {
    RefinedSlice out;
    out.slice = slice;
    out.refined_text = deterministic_refinement(slice);
    out.is_constraint = has_constraint_marker(slice.content_text) || is_architecture_listing(slice);
    if (!cfg.remote()) return out;

    nlohmann::json payload = {{"header_path", slice.header_path}, {"content", slice.content_text}};
    std::string failure;
    try {
        auto client = client_for(cfg);
        const std::string reply = client->complete(kRefineSystemPrompt, payload.dump());
        auto j = nlohmann::json::parse(json_object_reply(reply));
        if (j.is_object() && j.size() == 2 && j.contains("refined_text") && j["refined_text"].is_string() &&
            !trim(j["refined_text"].get<std::string>()).empty() && j.contains("is_constraint") &&
            j["is_constraint"].is_boolean()) {
            out.refined_text = j["refined_text"].get<std::string>();
            out.is_constraint = j["is_constraint"].get<bool>();
            return out;
        }
        failure = "reply does not match the refinement schema";
    } catch (const nlohmann::json::exception& e) {
        failure = std::string("reply is not JSON: ") + e.what();
    } catch (const ProviderError& e) {
        failure = e.what();
    }
    out.diagnostic = "refinement fell back to deterministic mode: " + failure;
    return out;
}

RoutingDecision deterministic_route(const RefinedSlice& refined, const BinaryTables& tables) {
    const std::string& text = refined.slice.content_text;
    const EnforcementLevel level = level_for(text);
    RoutingDecision d;

    const ProcessAnalysis process = analyze_process(text, tables);
    if (!process.targets.empty()) {
        ProcessMeta meta;
        for (const auto& t : process.targets) {
            if (std::find(meta.binaries.begin(), meta.binaries.end(), t.binary) == meta.binaries.end())
                meta.binaries.push_back(t.binary);
        }
        meta.level = level;
        d.domain = Domain::process;
        d.metadata = meta;
        return d;
    }

    if (search(text, arch_keyword_re()) || is_architecture_listing(refined.slice)) {
        ArchDetMeta meta;
        static const std::regex cycle_re(R"(\b(circular|cycles?|cyclic)\b)", std::regex::ECMAScript | icase);
        static const std::regex direction_re(R"(\blayer|\bdepend|\bfrom\s+\S+\s+to\s+\S+)", std::regex::ECMAScript | icase);
        static const std::regex import_re(R"(\bimport)", std::regex::ECMAScript | icase);
        if (search(text, cycle_re))
            meta.rule_kind = ArchRuleKind::cycle_detection;
        else if (search(text, import_re) && search(text, negation_re()))
            meta.rule_kind = ArchRuleKind::boundary_enforcement;
        else if (search(text, direction_re))
            meta.rule_kind = ArchRuleKind::dependency_direction;
        d.domain = Domain::arch_deterministic;
        d.metadata = meta;
        return d;
    }

    bool code_tokens = false;
    for (const auto& sp : backtick_spans(text)) code_tokens = code_tokens || looks_like_code(sp);
    if (code_tokens || search(text, source_keyword_re())) {
        SourceMeta meta;
        const SourceShape shape = classify_source_shape(text);
        meta.pattern_kind = shape.kind;
        meta.severity = level;
        meta.languages = languages_named(text + " " + join(refined.slice.header_path, " "));
        if (meta.languages.empty()) meta.languages = languages_for_shape(shape);
        if (meta.languages.empty()) meta.languages.assign(std::begin(kAllLanguages), std::end(kAllLanguages));
        d.domain = Domain::source;
        d.metadata = meta;
        return d;
    }

    d.domain = Domain::arch_semantic;
    d.metadata = ArchSemMeta{text};
    return d;
}

RoutingDecision route(const RefinedSlice& refined, const ProviderConfig& cfg, const BinaryTables& tables) {
    if (!cfg.remote()) return deterministic_route(refined, tables);
    nlohmann::json payload = {{"original_text", refined.slice.content_text},
                              {"refined_text", refined.refined_text},
                              {"header_path", refined.slice.header_path}};
    std::string failure;
    try {
        auto client = client_for(cfg);
        const std::string reply = client->complete(kRouteSystemPrompt, payload.dump());
        if (auto d = parse_route_reply(reply, refined)) return *d;
        failure = "reply does not match the routing schema";
    } catch (const ProviderError& e) {
        failure = e.what();
    }
    RoutingDecision d = deterministic_route(refined, tables);
    d.diagnostic = "routing fell back to deterministic mode: " + failure;
    return d;
}

} // namespace contextcov
