#pragma once

#include "contextcov/constraint.hpp"
#include "contextcov/error.hpp"

#include <tree_sitter/api.h>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

/// Concrete grammars. TypeScript is served by two: `.ts` and `.tsx`.
enum class Grammar { python, javascript, typescript, tsx, go, rust };

std::string_view to_string(Grammar grammar);

struct LanguageProfile {
    Language language;
    std::vector<std::string> extensions; // with leading dot
    std::vector<Grammar> grammars;
};

const std::vector<LanguageProfile>& language_profiles();
const LanguageProfile& profile(Language language);
std::optional<Language> language_for_path(const std::filesystem::path& path);
std::optional<Grammar> grammar_for_path(const std::filesystem::path& path);
const TSLanguage* ts_language(Grammar grammar);

/// Owns the source bytes and the tree parsed from them.
class SyntaxTree {
public:
    /// Error-tolerant: syntax errors become ERROR/MISSING nodes.
    static SyntaxTree parse(Grammar grammar, std::string source);

    TSNode root() const { return ts_tree_root_node(tree_.get()); }
    const std::string& source() const { return source_; }
    Grammar grammar() const { return grammar_; }
    std::string_view text(TSNode node) const;
    bool has_error() const { return ts_node_has_error(root()); }

private:
    struct TreeDeleter {
        void operator()(TSTree* t) const { ts_tree_delete(t); }
    };

    SyntaxTree(Grammar grammar, std::string source, TSTree* tree)
        : grammar_(grammar), source_(std::move(source)), tree_(tree) {}

    Grammar grammar_;
    std::string source_;
    std::unique_ptr<TSTree, TreeDeleter> tree_;
};

class QueryError : public Error {
public:
    QueryError(const std::string& what, std::uint32_t offset) : Error(what), offset_(offset) {}

    std::uint32_t offset() const noexcept { return offset_; }

private:
    std::uint32_t offset_;
};

struct QueryCapture {
    std::string name;
    TSNode node;
};

struct QueryMatch {
    std::uint32_t pattern_index = 0;
    std::vector<QueryCapture> captures;

    const QueryCapture* find(std::string_view name) const;
};

/// A compiled query. Built-in text predicates (#eq?, #not-eq?, #match?,
/// #not-match?, #any-of?, #not-any-of?) are evaluated here, together with
/// any extra capture predicates supplied at compile time.
class Query {
public:
    /// Throws QueryError naming the failing offset or predicate.
    static Query compile(Grammar grammar, std::string_view source,
                         const std::vector<CapturePredicate>& extra_predicates = {});

    std::vector<QueryMatch> matches(const SyntaxTree& tree) const;
    const std::vector<std::string>& capture_names() const { return capture_names_; }
    Grammar grammar() const { return grammar_; }

private:
    struct TextPredicate {
        enum class Op { eq, match, any_of };
        Op op;
        bool negated = false;
        std::string capture;
        std::optional<std::string> other_capture; // #eq? @a @b
        std::vector<std::string> values;
        std::shared_ptr<const std::regex> regex;
    };

    struct QueryDeleter {
        void operator()(TSQuery* q) const { ts_query_delete(q); }
    };

    bool accepts(const QueryMatch& match, const SyntaxTree& tree) const;

    Grammar grammar_ = Grammar::python;
    std::shared_ptr<TSQuery> query_;
    std::vector<std::string> capture_names_;
    std::vector<std::vector<TextPredicate>> pattern_predicates_;
    std::vector<TextPredicate> extra_predicates_;
};

/// Byte offset to 1-based (line, column); both count bytes.
struct Location {
    int line = 1;
    int column = 1;
};

Location location_of(std::string_view source, std::size_t byte_offset);

} // namespace contextcov
