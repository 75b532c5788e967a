#include "contextcov/syntax.hpp"

#include <algorithm>

extern "C" {
const TSLanguage* tree_sitter_python();
const TSLanguage* tree_sitter_javascript();
const TSLanguage* tree_sitter_typescript();
const TSLanguage* tree_sitter_tsx();
const TSLanguage* tree_sitter_go();
const TSLanguage* tree_sitter_rust();
}

namespace contextcov {

std::string_view to_string(Grammar grammar) {
    switch (grammar) {
    case Grammar::python: return "python";
    case Grammar::javascript: return "javascript";
    case Grammar::typescript: return "typescript";
    case Grammar::tsx: return "tsx";
    case Grammar::go: return "go";
    case Grammar::rust: return "rust";
    }
    return "python";
}

const std::vector<LanguageProfile>& language_profiles() {
    static const std::vector<LanguageProfile> profiles = {
        {Language::python, {".py"}, {Grammar::python}},
        {Language::typescript, {".ts", ".tsx"}, {Grammar::typescript, Grammar::tsx}},
        {Language::javascript, {".js", ".jsx", ".mjs", ".cjs"}, {Grammar::javascript}},
        {Language::go, {".go"}, {Grammar::go}},
        {Language::rust, {".rs"}, {Grammar::rust}},
    };
    return profiles;
}

const LanguageProfile& profile(Language language) {
    for (const auto& p : language_profiles()) {
        if (p.language == language) return p;
    }
    return language_profiles().front();
}

std::optional<Language> language_for_path(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext.empty()) return std::nullopt;
    for (const auto& p : language_profiles()) {
        if (std::find(p.extensions.begin(), p.extensions.end(), ext) != p.extensions.end()) return p.language;
    }
    return std::nullopt;
}

std::optional<Grammar> grammar_for_path(const std::filesystem::path& path) {
    auto language = language_for_path(path);
    if (!language) return std::nullopt;
    if (*language == Language::typescript && path.extension() == ".tsx") return Grammar::tsx;
    return profile(*language).grammars.front();
}

const TSLanguage* ts_language(Grammar grammar) {
    switch (grammar) {
    case Grammar::python: return tree_sitter_python();
    case Grammar::javascript: return tree_sitter_javascript();
    case Grammar::typescript: return tree_sitter_typescript();
    case Grammar::tsx: return tree_sitter_tsx();
    case Grammar::go: return tree_sitter_go();
    case Grammar::rust: return tree_sitter_rust();
    }
    return nullptr;
}

SyntaxTree SyntaxTree::parse(Grammar grammar, std::string source) {
    std::unique_ptr<TSParser, void (*)(TSParser*)> parser(ts_parser_new(), ts_parser_delete);
    if (!ts_parser_set_language(parser.get(), ts_language(grammar)))
        throw Error("grammar ABI mismatch for " + std::string(to_string(grammar)));
    TSTree* tree = ts_parser_parse_string(parser.get(), nullptr, source.data(), static_cast<uint32_t>(source.size()));
    if (!tree) throw Error("parser produced no tree for " + std::string(to_string(grammar)));
    return SyntaxTree(grammar, std::move(source), tree);
}

std::string_view SyntaxTree::text(TSNode node) const {
    const uint32_t start = ts_node_start_byte(node);
    const uint32_t end = ts_node_end_byte(node);
    if (start >= source_.size()) return {};
    return std::string_view(source_).substr(start, end - start);
}

const QueryCapture* QueryMatch::find(std::string_view name) const {
    for (const auto& c : captures) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

std::string_view query_error_name(TSQueryError error) {
    switch (error) {
    case TSQueryErrorSyntax: return "syntax error";
    case TSQueryErrorNodeType: return "unknown node type";
    case TSQueryErrorField: return "unknown field";
    case TSQueryErrorCapture: return "unknown capture";
    case TSQueryErrorStructure: return "impossible pattern structure";
    case TSQueryErrorLanguage: return "incompatible language";
    default: return "error";
    }
}

std::shared_ptr<const std::regex> compile_regex(const std::string& pattern, std::uint32_t offset) {
    try {
        return std::make_shared<const std::regex>(pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw QueryError("invalid regex \"" + pattern + "\": " + e.what(), offset);
    }
}

} // namespace

Query Query::compile(Grammar grammar, std::string_view source, const std::vector<CapturePredicate>& extra) {
    uint32_t error_offset = 0;
    TSQueryError error_type = TSQueryErrorNone;
    TSQuery* raw = ts_query_new(ts_language(grammar), source.data(), static_cast<uint32_t>(source.size()),
                                &error_offset, &error_type);
    if (!raw) {
        throw QueryError("query " + std::string(query_error_name(error_type)) + " at offset " +
                             std::to_string(error_offset) + " (" + std::string(to_string(grammar)) + " grammar)",
                         error_offset);
    }
    Query q;
    q.grammar_ = grammar;
    q.query_ = std::shared_ptr<TSQuery>(raw, QueryDeleter{});

    const uint32_t captures = ts_query_capture_count(raw);
    for (uint32_t i = 0; i < captures; ++i) {
        uint32_t len = 0;
        const char* name = ts_query_capture_name_for_id(raw, i, &len);
        q.capture_names_.emplace_back(name, len);
    }

    auto string_value = [raw](uint32_t id) {
        uint32_t len = 0;
        const char* s = ts_query_string_value_for_id(raw, id, &len);
        return std::string(s, len);
    };

    const uint32_t patterns = ts_query_pattern_count(raw);
    q.pattern_predicates_.resize(patterns);
    for (uint32_t p = 0; p < patterns; ++p) {
        uint32_t step_count = 0;
        const TSQueryPredicateStep* steps = ts_query_predicates_for_pattern(raw, p, &step_count);
        const uint32_t pattern_offset = ts_query_start_byte_for_pattern(raw, p);
        std::vector<const TSQueryPredicateStep*> current;
        for (uint32_t s = 0; s < step_count; ++s) {
            if (steps[s].type != TSQueryPredicateStepTypeDone) {
                current.push_back(&steps[s]);
                continue;
            }
            if (current.empty() || current[0]->type != TSQueryPredicateStepTypeString) {
                throw QueryError("malformed predicate", pattern_offset);
            }
            const std::string op = string_value(current[0]->value_id);
            std::vector<const TSQueryPredicateStep*> args(current.begin() + 1, current.end());
            current.clear();
            if (!op.empty() && op.back() == '!') continue; // directives carry no match semantics

            TextPredicate pred{};
            std::string base = op;
            if (base.rfind("not-", 0) == 0) {
                pred.negated = true;
                base = base.substr(4);
            }
            if (base == "eq?")
                pred.op = TextPredicate::Op::eq;
            else if (base == "match?")
                pred.op = TextPredicate::Op::match;
            else if (base == "any-of?")
                pred.op = TextPredicate::Op::any_of;
            else
                throw QueryError("unsupported predicate #" + op, pattern_offset);

            if (args.empty() || args[0]->type != TSQueryPredicateStepTypeCapture)
                throw QueryError("#" + op + " expects a capture as first argument", pattern_offset);
            pred.capture = q.capture_names_[args[0]->value_id];
            if (pred.op == TextPredicate::Op::any_of) {
                if (args.size() < 2) throw QueryError("#" + op + " expects at least one value", pattern_offset);
            } else if (args.size() != 2) {
                throw QueryError("#" + op + " expects exactly two arguments", pattern_offset);
            }
            for (std::size_t a = 1; a < args.size(); ++a) {
                if (args[a]->type == TSQueryPredicateStepTypeCapture) {
                    if (pred.op != TextPredicate::Op::eq)
                        throw QueryError("#" + op + " expects string arguments", pattern_offset);
                    pred.other_capture = q.capture_names_[args[a]->value_id];
                } else {
                    pred.values.push_back(string_value(args[a]->value_id));
                }
            }
            if (pred.op == TextPredicate::Op::match) pred.regex = compile_regex(pred.values[0], pattern_offset);
            q.pattern_predicates_[p].push_back(std::move(pred));
        }
        if (!current.empty()) throw QueryError("unterminated predicate", pattern_offset);
    }

    for (const auto& cp : extra) {
        if (std::find(q.capture_names_.begin(), q.capture_names_.end(), cp.capture) == q.capture_names_.end())
            throw QueryError("capture predicate names unknown capture @" + cp.capture, 0);
        TextPredicate pred{};
        pred.op = TextPredicate::Op::match;
        pred.capture = cp.capture;
        pred.values = {cp.regex};
        pred.regex = compile_regex(cp.regex, 0);
        q.extra_predicates_.push_back(std::move(pred));
    }
    return q;
}

bool Query::accepts(const QueryMatch& match, const SyntaxTree& tree) const {
    auto holds = [&](const TextPredicate& pred) {
        for (const auto& cap : match.captures) {
            if (cap.name != pred.capture) continue;
            const std::string_view text = tree.text(cap.node);
            bool ok = false;
            switch (pred.op) {
            case TextPredicate::Op::eq:
                if (pred.other_capture) {
                    const QueryCapture* other = match.find(*pred.other_capture);
                    ok = other && tree.text(other->node) == text;
                } else {
                    ok = text == pred.values[0];
                }
                break;
            case TextPredicate::Op::match:
                ok = std::regex_search(text.begin(), text.end(), *pred.regex);
                break;
            case TextPredicate::Op::any_of:
                ok = std::find(pred.values.begin(), pred.values.end(), text) != pred.values.end();
                break;
            }
            if (ok == pred.negated) return false;
        }
        return true;
    };
    for (const auto& pred : pattern_predicates_[match.pattern_index]) {
        if (!holds(pred)) return false;
    }
    for (const auto& pred : extra_predicates_) {
        if (!holds(pred)) return false;
    }
    return true;
}

std::vector<QueryMatch> Query::matches(const SyntaxTree& tree) const {
    std::unique_ptr<TSQueryCursor, void (*)(TSQueryCursor*)> cursor(ts_query_cursor_new(), ts_query_cursor_delete);
    ts_query_cursor_exec(cursor.get(), query_.get(), tree.root());
    std::vector<QueryMatch> out;
    TSQueryMatch raw;
    while (ts_query_cursor_next_match(cursor.get(), &raw)) {
        QueryMatch m;
        m.pattern_index = raw.pattern_index;
        for (uint16_t i = 0; i < raw.capture_count; ++i) {
            m.captures.push_back({capture_names_[raw.captures[i].index], raw.captures[i].node});
        }
        if (accepts(m, tree)) out.push_back(std::move(m));
    }
    return out;
}

Location location_of(std::string_view source, std::size_t byte_offset) {
    byte_offset = std::min(byte_offset, source.size());
    const std::string_view before = source.substr(0, byte_offset);
    Location loc;
    loc.line = static_cast<int>(std::count(before.begin(), before.end(), '\n')) + 1;
    const std::size_t last_nl = before.rfind('\n');
    loc.column = static_cast<int>(last_nl == std::string_view::npos ? byte_offset : byte_offset - last_nl - 1) + 1;
    return loc;
}

} // namespace contextcov
