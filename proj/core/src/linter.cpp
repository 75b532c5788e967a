#include "contextcov/linter.hpp"

#include "contextcov/error.hpp"
#include "contextcov/provider.hpp"
#include "contextcov/syntax.hpp"
#include "contextcov/vcs.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

namespace contextcov {

namespace fs = std::filesystem;

std::string_view to_string(ScopeKind kind) {
    switch (kind) {
    case ScopeKind::repo: return "repo";
    case ScopeKind::diff: return "diff";
    case ScopeKind::unstaged: return "unstaged";
    }
    return "repo";
}

bool is_skipped_path(std::string_view repo_relative) {
    static const std::set<std::string, std::less<>> skipped = {"node_modules", "target", "dist",
                                                               "build",        "vendor", ".git"};
    for (const auto& segment : split(repo_relative, '/')) {
        if (skipped.count(segment)) return true;
    }
    return false;
}

namespace {

std::vector<std::string> walk(const fs::path& root) {
    std::vector<std::string> out;
    std::error_code ec;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec), end;
    for (; !ec && it != end; it.increment(ec)) {
        const auto rel = fs::relative(it->path(), root, ec).generic_string();
        if (it->is_directory(ec)) {
            if (is_skipped_path(rel)) it.disable_recursion_pending();
            continue;
        }
        if (it->is_regular_file(ec)) out.push_back(rel);
    }
    return out;
}

std::vector<std::string> git_untracked(const fs::path& root) {
    return git_lines(root, {"-c", "core.quotepath=off", "ls-files", "--others", "--exclude-standard"});
}

std::vector<std::string> finish(const fs::path& root, std::vector<std::string> files) {
    std::vector<std::string> out;
    for (auto& f : files) {
        if (is_skipped_path(f) || !language_for_path(f)) continue;
        std::error_code ec;
        if (!fs::is_regular_file(root / f, ec)) continue;
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool read_file(const fs::path& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return !in.bad();
}

std::string substitute(const std::string& templ, const QueryMatch& match, const SyntaxTree& tree) {
    static const std::regex re(R"(\{([A-Za-z_][A-Za-z0-9_.-]*)\})");
    std::string out;
    auto begin = templ.cbegin();
    for (auto it = std::sregex_iterator(templ.begin(), templ.end(), re); it != std::sregex_iterator(); ++it) {
        out.append(begin, templ.cbegin() + it->position());
        const QueryCapture* cap = match.find((*it)[1].str());
        out += cap ? abbreviate_code(tree.text(cap->node)) : it->str();
        begin = templ.cbegin() + it->position() + it->length();
    }
    out.append(begin, templ.cend());
    return out;
}

struct CompiledRule {
    ConstraintId id;
    const SourceRule* rule;
    std::map<Grammar, Query> queries;
};

} // namespace

std::vector<std::string> resolve_scope(const fs::path& root, const ScanScope& scope) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw ScopeError("not a directory: " + root.string());
    const bool git = in_git_worktree(root);
    if (scope.kind == ScopeKind::repo) {
        if (!git) return finish(root, walk(root));
        return finish(root, git_lines(root, {"-c", "core.quotepath=off", "ls-files", "--cached", "--others",
                                             "--exclude-standard"}));
    }
    if (!git) throw ScopeError(std::string(to_string(scope.kind)) + " scope requires a git work tree: " + root.string());
    std::vector<std::string> files;
    if (scope.kind == ScopeKind::diff) {
        git_lines(root, {"rev-parse", "--verify", "--quiet", scope.base + "^{commit}"});
        files = git_lines(root, {"-c", "core.quotepath=off", "diff", "--name-only", "--relative", scope.base, "--"});
    } else {
        files = git_lines(root, {"-c", "core.quotepath=off", "diff", "--name-only", "--relative", "--"});
    }
    for (auto& f : git_untracked(root)) files.push_back(std::move(f));
    return finish(root, std::move(files));
}

std::string abbreviate_code(std::string_view text) {
    std::string_view t = trim(text);
    std::string_view first = trim_right(t.substr(0, t.find('\n')));
    std::string out(first);
    if (const auto brace = first.find('{'); brace != std::string_view::npos)
        out = std::string(first.substr(0, brace + 1)) + "...}";
    if (out.size() > 80) out = out.substr(0, 77) + "...";
    return out;
}

LintResult lint_files(const fs::path& root, const CheckStore& store, const std::vector<std::string>& files,
                      int workers) {
    LintResult result;
    std::vector<CompiledRule> rules;
    for (const auto& [id, c] : store.constraints) {
        const auto* rule = std::get_if<SourceRule>(&c.check);
        if (!rule || c.disabled) continue;
        CompiledRule compiled{id, rule, {}};
        for (Language lang : rule->languages) {
            for (Grammar g : profile(lang).grammars) {
                try {
                    compiled.queries.emplace(g, Query::compile(g, rule->query, rule->capture_predicates));
                } catch (const QueryError& e) {
                    result.diagnostics.push_back("check " + id.str() + " skipped for " + std::string(to_string(g)) +
                                                 ": " + e.what());
                }
            }
        }
        if (!compiled.queries.empty()) rules.push_back(std::move(compiled));
    }

    std::mutex mutex;
    parallel_for(files.size(), rules.empty() ? 1 : workers, [&](std::size_t i) {
        const std::string& file = files[i];
        const auto grammar = grammar_for_path(file);
        if (!grammar) return;
        std::vector<Violation> found;
        std::string source;
        if (!read_file(root / file, source)) {
            std::lock_guard lock(mutex);
            result.diagnostics.push_back("cannot read " + file + "; skipped");
            return;
        }
        bool any = false;
        for (const auto& r : rules) any = any || r.queries.count(*grammar);
        if (any) {
            const SyntaxTree tree = SyntaxTree::parse(*grammar, std::move(source));
            for (const auto& r : rules) {
                auto q = r.queries.find(*grammar);
                if (q == r.queries.end()) continue;
                std::set<std::pair<int, int>> seen;
                for (const auto& match : q->second.matches(tree)) {
                    if (match.captures.empty()) continue;
                    const QueryCapture* anchor = match.find("violation");
                    if (!anchor) anchor = &match.captures.front();
                    const Location loc = location_of(tree.source(), ts_node_start_byte(anchor->node));
                    if (!seen.insert({loc.line, loc.column}).second) continue;
                    Violation v;
                    v.rule_id = r.id;
                    v.file = file;
                    v.line = loc.line;
                    v.column = loc.column;
                    v.severity = r.rule->severity;
                    v.message = r.rule->message;
                    if (!r.rule->suggestion.empty()) v.suggestion = substitute(r.rule->suggestion, match, tree);
                    v.found = abbreviate_code(tree.text(anchor->node));
                    found.push_back(std::move(v));
                }
            }
        }
        std::lock_guard lock(mutex);
        ++result.files_scanned;
        for (auto& v : found) result.violations.push_back(std::move(v));
    });

    std::sort(result.violations.begin(), result.violations.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.file, a.line, a.rule_id, a.column) < std::tie(b.file, b.line, b.rule_id, b.column);
    });
    std::sort(result.diagnostics.begin(), result.diagnostics.end());
    return result;
}

LintResult lint(const fs::path& root, const CheckStore& store, const ScanScope& scope, int workers) {
    return lint_files(root, store, resolve_scope(root, scope), workers);
}

} // namespace contextcov
