#include "contextcov/synthesis.hpp"

#include "contextcov/error.hpp"
#include "contextcov/glob.hpp"
#include "contextcov/syntax.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace contextcov {

std::string ValidationResult::summary() const { return ok ? "ok" : join(diagnostics, "; "); }

namespace {

using std::regex_constants::icase;

std::vector<std::string> placeholders(const std::string& text) {
    static const std::regex re(R"(\{([A-Za-z_][A-Za-z0-9_.-]*)\})");
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1].str());
    return out;
}

void validate_source(const SourceRule& rule, ValidationResult& result) {
    auto fail = [&](std::string msg) {
        result.ok = false;
        result.diagnostics.push_back(std::move(msg));
    };
    if (rule.languages.empty()) fail("source rule lists no languages");
    if (trim(rule.query).empty()) {
        fail("source rule has an empty query");
        return;
    }
    std::set<Language> seen;
    for (Language lang : rule.languages) {
        if (!seen.insert(lang).second) fail("language " + std::string(to_string(lang)) + " listed twice");
    }
    for (Language lang : seen) {
        for (Grammar g : profile(lang).grammars) {
            try {
                Query q = Query::compile(g, rule.query, rule.capture_predicates);
                for (const auto& name : placeholders(rule.suggestion)) {
                    const auto& caps = q.capture_names();
                    if (std::find(caps.begin(), caps.end(), name) == caps.end())
                        fail("suggestion references unknown capture {" + name + "}");
                }
            } catch (const QueryError& e) {
                fail(std::string(to_string(g)) + " grammar: " + e.what());
            }
        }
    }
}

void validate_arch(const ArchRule& rule, ValidationResult& result) {
    auto fail = [&](std::string msg) {
        result.ok = false;
        result.diagnostics.push_back(std::move(msg));
    };
    if (const auto* r = std::get_if<LayerOrder>(&rule)) {
        if (r->layers.size() < 2) fail("layer order needs at least two layers");
        std::set<std::string> unique;
        for (const auto& l : r->layers) {
            if (trim(l).empty()) fail("layer prefix is empty");
            if (!unique.insert(l).second) fail("layer prefix " + l + " repeated");
        }
    } else if (const auto* r = std::get_if<AllowedSubdirs>(&rule)) {
        if (trim(r->parent_prefix).empty()) fail("allowed-subdirectories rule has no parent prefix");
        if (r->allowed.empty()) fail("allowed-subdirectories rule allows nothing");
        for (const auto& a : r->allowed) {
            if (a.empty() || a.find('/') != std::string::npos) fail("invalid subdirectory name \"" + a + "\"");
        }
    } else if (const auto* r = std::get_if<ForbiddenEdge>(&rule)) {
        if (trim(r->from_glob).empty() || trim(r->to_glob).empty()) fail("forbidden edge needs both globs");
    } else if (const auto* r = std::get_if<NoCycles>(&rule)) {
        if (trim(r->scope_glob).empty()) fail("cycle rule has an empty scope");
    }
}

// ── Source pattern library ───────────────────────────────────────────────

struct FamilyQuery {
    std::vector<Language> languages;
    std::string query;
};

std::vector<Language> intersect(const std::vector<Language>& wanted, std::initializer_list<Language> family) {
    std::vector<Language> out;
    for (Language l : wanted) {
        if (std::find(family.begin(), family.end(), l) != family.end()) out.push_back(l);
    }
    return out;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::vector<FamilyQuery> call_queries(const std::string& token, const std::vector<Language>& languages) {
    std::vector<FamilyQuery> out;
    const auto dot = token.rfind('.');
    const bool member = dot != std::string::npos;
    const std::string callee = member ? token.substr(dot + 1) : token;
    const std::string object = member ? token.substr(0, dot) : std::string();
    auto object_pred = [&] { return member ? " (#eq? @object " + quoted(object) + ")" : std::string(); };

    if (auto js = intersect(languages, {Language::typescript, Language::javascript}); !js.empty()) {
        out.push_back({js, member ? "((call_expression function: (member_expression object: (_) @object property: "
                                    "(property_identifier) @callee)) @violation (#eq? @callee " +
                                        quoted(callee) + ")" + object_pred() + ")"
                                  : "((call_expression function: (identifier) @callee) @violation (#eq? @callee " +
                                        quoted(callee) + "))"});
    }
    if (auto py = intersect(languages, {Language::python}); !py.empty()) {
        out.push_back({py, member ? "((call function: (attribute object: (_) @object attribute: (identifier) "
                                    "@callee)) @violation (#eq? @callee " +
                                        quoted(callee) + ")" + object_pred() + ")"
                                  : "((call function: (identifier) @callee) @violation (#eq? @callee " +
                                        quoted(callee) + "))"});
    }
    if (auto go = intersect(languages, {Language::go}); !go.empty()) {
        out.push_back({go, member ? "((call_expression function: (selector_expression operand: (_) @object field: "
                                    "(field_identifier) @callee)) @violation (#eq? @callee " +
                                        quoted(callee) + ")" + object_pred() + ")"
                                  : "((call_expression function: (identifier) @callee) @violation (#eq? @callee " +
                                        quoted(callee) + "))"});
    }
    if (auto rs = intersect(languages, {Language::rust}); !rs.empty()) {
        out.push_back({rs, member ? "((call_expression function: (field_expression value: (_) @object field: "
                                    "(field_identifier) @callee)) @violation (#eq? @callee " +
                                        quoted(callee) + ")" + object_pred() + ")"
                                  : "((call_expression function: (identifier) @callee) @violation (#eq? @callee " +
                                        quoted(callee) + "))"});
    }
    return out;
}

std::optional<FamilyQuery> keyword_query(const std::string& keyword) {
    if (keyword == "var") return FamilyQuery{{Language::typescript, Language::javascript}, "(variable_declaration) @violation"};
    if (keyword == "global") return FamilyQuery{{Language::python}, "(global_statement) @violation"};
    if (keyword == "goto") return FamilyQuery{{Language::go}, "(goto_statement) @violation"};
    if (keyword == "unsafe") return FamilyQuery{{Language::rust}, "(unsafe_block) @violation"};
    return std::nullopt;
}

const std::set<std::string, std::less<>>& ts_predefined_types() {
    static const std::set<std::string, std::less<>> s = {"any",    "number", "boolean", "string", "symbol",
                                                         "void",   "unknown", "never",  "object", "bigint"};
    return s;
}

// ── Remote source synthesis ──────────────────────────────────────────────

constexpr std::string_view kSourceSystemPrompt =
    "You write one tree-sitter S-expression query that matches violations of a coding rule. Use named captures; "
    "capture the offending node as @violation. Reply with exactly one JSON object: {\"query\": string, "
    "\"capture_predicates\": [{\"capture\": string, \"regex\": string}], \"message\": string, \"suggestion\": "
    "string}. The suggestion may reference captures as {name}. The query must compile against every listed "
    "grammar.";

std::optional<SourceRule> parse_source_reply(const std::string& reply, const SourceMeta& meta, std::string& why) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(reply);
    } catch (const nlohmann::json::exception& e) {
        why = std::string("reply is not JSON: ") + e.what();
        return std::nullopt;
    }
    if (!j.is_object() || !j.contains("query") || !j["query"].is_string()) {
        why = "reply lacks a string \"query\"";
        return std::nullopt;
    }
    SourceRule rule;
    rule.languages = meta.languages;
    rule.severity = meta.severity;
    rule.query = j["query"].get<std::string>();
    if (j.contains("capture_predicates")) {
        if (!j["capture_predicates"].is_array()) {
            why = "capture_predicates must be an array";
            return std::nullopt;
        }
        for (const auto& p : j["capture_predicates"]) {
            if (!p.is_object() || !p.contains("capture") || !p["capture"].is_string() || !p.contains("regex") ||
                !p["regex"].is_string()) {
                why = "capture_predicates entries must be {capture, regex}";
                return std::nullopt;
            }
            std::string cap = p["capture"].get<std::string>();
            if (!cap.empty() && cap.front() == '@') cap.erase(0, 1);
            rule.capture_predicates.push_back({cap, p["regex"].get<std::string>()});
        }
    }
    if (j.contains("message") && j["message"].is_string()) rule.message = j["message"].get<std::string>();
    if (j.contains("suggestion") && j["suggestion"].is_string()) rule.suggestion = j["suggestion"].get<std::string>();
    return rule;
}

// ── Architecture helpers ─────────────────────────────────────────────────

std::vector<std::string> path_segments(std::string_view path) {
    std::vector<std::string> out;
    for (auto& s : split(path, '/')) {
        if (!s.empty()) out.push_back(s);
    }
    return out;
}

std::string last_segment(std::string_view path) {
    auto segs = path_segments(path);
    return segs.empty() ? std::string() : segs.back();
}

// "workbench/browser/" listed under "src/vs/workbench/" becomes
// "src/vs/workbench/browser/".
std::string resolve_child(const std::string& parent, const std::string& child) {
    const auto parent_segs = path_segments(parent);
    const auto child_segs = path_segments(child);
    if (child_segs.empty()) return parent;
    if (child.rfind(parent, 0) == 0) return child;
    for (std::size_t k = parent_segs.size(); k > 0; --k) {
        if (parent_segs[k - 1] == child_segs.front()) {
            std::vector<std::string> merged(parent_segs.begin(), parent_segs.begin() + static_cast<long>(k - 1));
            merged.insert(merged.end(), child_segs.begin(), child_segs.end());
            return join(merged, "/") + "/";
        }
    }
    return parent + join(child_segs, "/") + "/";
}

const std::regex& direction_re() {
    static const std::regex re(R"(\blayer|\bdepend|\bfrom\s+\S+\s+to\s+\S+)", std::regex::ECMAScript | icase);
    return re;
}

std::string strip_code(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '`' || c == '*'; }), s.end());
    return s;
}

// Resolves a layer name such as "UI" or "database" to a directory glob, using
// listing items from the same file when they name it.
std::string name_to_glob(const std::string& name, const std::vector<Slice>& context) {
    std::string bare = strip_code(name);
    while (!bare.empty() && bare.back() == '/') bare.pop_back();
    if (bare.find('/') != std::string::npos || bare.find('*') != std::string::npos)
        return bare.find('*') != std::string::npos ? bare : bare + "/**";
    for (const auto& s : context) {
        const std::string path = listing_path(s.content_text);
        if (!path.empty() && to_lower(last_segment(path)) == to_lower(bare)) return path + "**";
    }
    for (const auto& s : context) {
        const std::string path = listing_path(s.content_text);
        if (path.empty()) continue;
        const std::string description = s.content_text.substr(s.content_text.find(path) + path.size());
        if (contains_word(description, bare)) return path + "**";
    }
    std::string slug;
    for (char c : to_lower(bare)) slug += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
    return slug + "/**";
}

std::optional<ForbiddenEdge> forbidden_edge(const std::string& text, const std::vector<Slice>& context) {
    static const std::regex re(
        R"((?:the\s+)?(`[^`]+`|[A-Za-z0-9_./*-]+)(?:\s+(?:layer|module|package|component|code|directory|folder))?\s+(?:must not|must never|should not|should never|may not|cannot|can't|never|does not|do not|doesn't|don't)\s+(?:import|depend on|use)\s+(?:anything\s+)?(?:from\s+)?(?:the\s+)?(`[^`]+`|[A-Za-z0-9_./*-]+))",
        std::regex::ECMAScript | icase);
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    return ForbiddenEdge{name_to_glob(m[1].str(), context), name_to_glob(m[2].str(), context)};
}

std::string cycle_scope(const std::string& text) {
    static const std::regex re(R"(\b(?:in|within|under|inside)\s+`?([A-Za-z0-9_.-]+(?:/[A-Za-z0-9_.-]*)*/?)`?)",
                               std::regex::ECMAScript | icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) {
        std::string path = m[1].str();
        if (path.find('/') != std::string::npos) {
            if (path.back() != '/') path += '/';
            return path + "**";
        }
    }
    return "**";
}

} // namespace

ValidationResult validate_descriptor(const CheckDescriptor& check) {
    ValidationResult result;
    auto fail = [&](std::string msg) {
        result.ok = false;
        result.diagnostics.push_back(std::move(msg));
    };
    if (const auto* p = std::get_if<ProcessRule>(&check)) {
        if (p->binaries.empty()) fail("process rule names no binaries");
        for (const auto& b : p->binaries) {
            if (b.empty() || b.find_first_of("/ \t\n") != std::string::npos) fail("invalid binary name \"" + b + "\"");
        }
        std::string why;
        if (!valid_argv_pattern(p->argv_pattern, &why)) fail("argv pattern: " + why);
        if (p->scope.empty()) fail("process rule scope is empty");
    } else if (const auto* s = std::get_if<SourceRule>(&check)) {
        validate_source(*s, result);
    } else if (const auto* a = std::get_if<ArchRule>(&check)) {
        validate_arch(*a, result);
    } else if (const auto* m = std::get_if<SemanticRule>(&check)) {
        if (trim(m->principle_text).empty()) fail("semantic rule has no principle text");
    }
    return result;
}

std::vector<ProcessRule> synthesize_process(const Constraint& constraint, const ProcessMeta& meta,
                                            const BinaryTables& tables) {
    const ProcessAnalysis analysis = analyze_process(constraint.original_text, tables);

    struct Target {
        std::string binary;
        std::vector<std::string> argv;
        EnforcementLevel action;
    };
    std::vector<Target> targets;
    auto negated_mention = [&](const ProcessTarget& t) {
        // Alternatives expanded from a sanctioned tool are blocked outright,
        // whatever wording the rule used.
        for (const auto& p : analysis.preferred) {
            const auto* group = tables.group_of(p);
            if (group && t.argv_pattern.empty() && std::find(group->begin(), group->end(), t.binary) != group->end())
                return false;
        }
        return true;
    };
    for (const auto& t : analysis.targets)
        targets.push_back({t.binary, t.argv_pattern, negated_mention(t) ? meta.level : EnforcementLevel::block});
    for (const auto& b : meta.binaries) {
        const bool covered =
            std::any_of(targets.begin(), targets.end(), [&](const Target& t) { return t.binary == b; });
        if (!covered) targets.push_back({b, {}, meta.level});
    }

    std::string suggestion;
    if (!analysis.preferred.empty())
        suggestion = "Use " + analysis.preferred.front() + " instead.";
    else
        suggestion = analysis.instead;

    std::vector<ProcessRule> rules;
    for (const auto& t : targets) {
        auto it = std::find_if(rules.begin(), rules.end(), [&](const ProcessRule& r) {
            return r.argv_pattern == t.argv && r.action == t.action;
        });
        if (it != rules.end()) {
            if (std::find(it->binaries.begin(), it->binaries.end(), t.binary) == it->binaries.end())
                it->binaries.push_back(t.binary);
            continue;
        }
        ProcessRule r;
        r.binaries = {t.binary};
        r.argv_pattern = t.argv;
        r.action = t.action;
        r.message = constraint.original_text;
        r.suggestion = suggestion;
        r.scope = meta.scope.empty() ? "global" : meta.scope;
        rules.push_back(std::move(r));
    }
    return rules;
}

std::vector<SourceRule> library_source_rules(const SourceShape& shape, const std::vector<Language>& languages,
                                             EnforcementLevel severity) {
    std::vector<FamilyQuery> queries;
    std::string message;
    std::string suggestion;
    const auto js = [&] {
        auto l = intersect(languages, {Language::typescript, Language::javascript});
        return l.empty() ? std::vector<Language>{Language::typescript, Language::javascript} : l;
    };

    if (shape.kind == "promise_then") {
        queries.push_back({js(), "(call_expression\n"
                                 "  function: (member_expression\n"
                                 "    property: (property_identifier) @method)\n"
                                 "  (#match? @method \"^then$\"))"});
        message = "Use async/await instead of .then()";
        suggestion = "Use async/await instead of .then()";
    } else if (shape.kind == "paren_arrow_param") {
        queries.push_back({js(), "((arrow_function\n"
                                 "   parameters: (formal_parameters . (_) @param .)\n"
                                 "   body: (_) @body) @violation\n"
                                 "  (#match? @param \"^[A-Za-z_$][A-Za-z0-9_$]*$\"))"});
        message = "Arrow function with a single parenthesized parameter";
        suggestion = "Remove parentheses: {param} => {body}";
    } else if (shape.kind == "prefer_arrow_function") {
        queries.push_back({js(), "(function_expression) @violation"});
        message = "Anonymous function expression where an arrow function is preferred";
        suggestion = "Rewrite as an arrow function";
    } else if (shape.kind == "forbidden_type") {
        const std::string node = ts_predefined_types().count(shape.token) ? "predefined_type" : "type_identifier";
        queries.push_back({{Language::typescript},
                           "((" + node + ") @violation (#eq? @violation " + quoted(shape.token) + "))"});
        message = "Use of forbidden type " + shape.token;
        suggestion = "Replace `" + shape.token + "` with a precise type";
    } else if (shape.kind == "forbidden_keyword") {
        if (auto q = keyword_query(shape.token)) queries.push_back(*q);
        message = "Use of forbidden keyword " + shape.token;
        suggestion = "Remove `" + shape.token + "`";
    } else if (shape.kind == "forbidden_call") {
        queries = call_queries(shape.token, languages);
        message = "Call to forbidden function " + shape.token;
        suggestion = "Remove the call to " + shape.token;
    } else if (shape.kind == "forbidden_identifier") {
        std::vector<Language> langs = languages;
        if (langs.empty()) langs.assign(std::begin(kAllLanguages), std::end(kAllLanguages));
        queries.push_back({langs, "((identifier) @violation (#eq? @violation " + quoted(shape.token) + "))"});
        message = "Use of forbidden identifier " + shape.token;
        suggestion = "Avoid `" + shape.token + "`";
    }

    std::vector<SourceRule> rules;
    for (auto& q : queries) {
        if (q.languages.empty()) continue;
        SourceRule r;
        r.languages = q.languages;
        r.query = q.query;
        r.message = message;
        r.severity = severity;
        r.suggestion = suggestion;
        rules.push_back(std::move(r));
    }
    return rules;
}

SourceSynthesis synthesize_source(const Constraint& constraint, const SourceMeta& meta, const ProviderConfig& cfg) {
    SourceSynthesis out;
    SourceShape shape = classify_source_shape(constraint.original_text);
    if (shape.kind == "unknown" && !meta.pattern_kind.empty()) shape.kind = meta.pattern_kind;

    if (cfg.remote()) {
        std::string why;
        try {
            auto client = client_for(cfg);
            nlohmann::json payload = {{"rule", constraint.original_text},
                                      {"refined_text", constraint.refined_text},
                                      {"pattern_kind", meta.pattern_kind}};
            payload["languages"] = nlohmann::json::array();
            for (Language l : meta.languages) payload["languages"].push_back(std::string(to_string(l)));
            for (int round = 0; round < 2; ++round) {
                const std::string reply = client->complete(kSourceSystemPrompt, payload.dump());
                auto rule = parse_source_reply(reply, meta, why);
                if (rule) {
                    auto v = validate_descriptor(*rule);
                    if (v.ok) {
                        out.rules.push_back(std::move(*rule));
                        return out;
                    }
                    why = v.summary();
                }
                payload["previous_reply"] = reply;
                payload["compiler_diagnostic"] = why;
            }
        } catch (const ProviderError& e) {
            why = e.what();
        }
        out.diagnostic = "provider query rejected (" + why + ")";
    }

    out.rules = library_source_rules(shape, meta.languages, meta.severity);
    if (out.rules.empty()) {
        if (!out.diagnostic.empty()) out.diagnostic += "; ";
        out.diagnostic += "no bundled pattern matches this rule";
    }
    return out;
}

std::vector<OwnedArchRule> synthesize_arch(const ArchDetMeta& meta, const std::vector<Slice>& group,
                                           const std::vector<Slice>& context) {
    std::vector<OwnedArchRule> out;

    for (std::size_t i = 0; i < group.size(); ++i) {
        const std::string& text = group[i].content_text;
        if (!listing_path(text).empty()) continue;
        static const std::regex cycle_re(R"(\b(circular|cycles?|cyclic)\b)", std::regex::ECMAScript | icase);
        if (std::regex_search(text, cycle_re) || (group.size() == 1 && meta.rule_kind == ArchRuleKind::cycle_detection)) {
            out.push_back({i, NoCycles{cycle_scope(text)}});
            continue;
        }
        if (auto edge = forbidden_edge(strip_code(text), context)) out.push_back({i, *edge});
    }

    struct Entry {
        std::size_t index;
        std::string path;
        int depth;
    };
    std::vector<Entry> listed;
    for (std::size_t i = 0; i < group.size(); ++i) {
        std::string path = listing_path(group[i].content_text);
        if (!path.empty()) listed.push_back({i, path, group[i].list_depth});
    }
    if (listed.empty()) return out;

    int top_depth = listed.front().depth;
    for (const auto& e : listed) top_depth = std::min(top_depth, e.depth);
    std::vector<const Entry*> top;
    std::map<std::size_t, std::vector<std::string>> children; // top index -> child names
    std::map<std::size_t, std::string> parent_path;
    const Entry* current = nullptr;
    for (const auto& e : listed) {
        if (e.depth == top_depth) {
            top.push_back(&e);
            current = &e;
        } else if (current) {
            const std::string resolved = resolve_child(current->path, e.path);
            const std::string name = last_segment(resolved);
            auto& names = children[current->index];
            if (!name.empty() && std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            parent_path[current->index] = current->path;
        }
    }

    std::optional<std::size_t> direction;
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (listing_path(group[i].content_text).empty() &&
            std::regex_search(group[i].content_text, direction_re())) {
            direction = i;
            break;
        }
    }
    if (direction && top.size() >= 2) {
        std::vector<std::string> layers;
        for (const auto* e : top) {
            if (std::find(layers.begin(), layers.end(), e->path) == layers.end()) layers.push_back(e->path);
        }
        // "from `workbench` to `base`" lists the layers top-down.
        static const std::regex from_to(R"(\bfrom\s+`?([A-Za-z0-9_./-]+?)`?\s+to\s+`?([A-Za-z0-9_./-]+?)`?(?:\s|$|[.,;]))",
                                        std::regex::ECMAScript | icase);
        std::smatch m;
        const std::string text = group[*direction].content_text;
        if (std::regex_search(text, m, from_to)) {
            auto position = [&](std::string name) -> long {
                while (!name.empty() && name.back() == '/') name.pop_back();
                for (std::size_t k = 0; k < layers.size(); ++k) {
                    if (last_segment(layers[k]) == last_segment(name)) return static_cast<long>(k);
                }
                return -1;
            };
            const long a = position(m[1].str());
            const long b = position(m[2].str());
            if (a >= 0 && b >= 0 && a > b) std::reverse(layers.begin(), layers.end());
        }
        if (layers.size() >= 2) out.push_back({*direction, LayerOrder{layers}});
    }

    for (const auto& [index, names] : children) {
        if (!names.empty()) out.push_back({index, AllowedSubdirs{parent_path[index], names}});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const OwnedArchRule& a, const OwnedArchRule& b) { return a.owner < b.owner; });
    return out;
}

SemanticRule synthesize_semantic(const Constraint& constraint, const ArchSemMeta& meta) {
    SemanticRule rule;
    rule.principle_text = trim(meta.principle_text).empty() ? constraint.original_text : meta.principle_text;
    for (auto& span : backtick_spans(constraint.original_text)) {
        if (!span.empty() && std::find(rule.context_hints.begin(), rule.context_hints.end(), span) ==
                                 rule.context_hints.end())
            rule.context_hints.push_back(span);
    }
    static const std::regex quoted_re(R"re("([^"]{1,80})")re");
    for (auto it = std::sregex_iterator(constraint.original_text.begin(), constraint.original_text.end(), quoted_re);
         it != std::sregex_iterator(); ++it) {
        std::string hint = (*it)[1].str();
        if (std::find(rule.context_hints.begin(), rule.context_hints.end(), hint) == rule.context_hints.end())
            rule.context_hints.push_back(hint);
    }
    return rule;
}

} // namespace contextcov
