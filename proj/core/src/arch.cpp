#include "contextcov/arch.hpp"

#include "contextcov/glob.hpp"
#include "contextcov/linter.hpp"
#include "contextcov/syntax.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <regex>
#include <sstream>

namespace contextcov {

namespace fs = std::filesystem;

std::map<std::string, std::vector<std::string>> DependencyGraph::adjacency() const {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& n : nodes) adj[n];
    for (const auto& e : edges) adj[e.from].push_back(e.to);
    for (auto& [n, out] : adj) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return adj;
}

namespace {

struct RawImport {
    std::string target; // resolved repo-relative path, empty when unresolved
    std::string text;
    int line = 1;
};

class Extractor {
public:
    Extractor(const fs::path& root, const std::set<std::string>& nodes) : root_(root), nodes_(nodes) {
        std::ifstream gomod(root / "go.mod");
        std::string line;
        while (std::getline(gomod, line)) {
            std::string_view t = trim(line);
            if (t.rfind("module ", 0) == 0) {
                go_module_ = std::string(trim(t.substr(7)));
                break;
            }
        }
    }

    std::vector<RawImport> extract(const std::string& file, const std::string& source, std::size_t& unresolved,
                                   std::vector<std::string>& diagnostics) const {
        auto language = language_for_path(file);
        if (!language) return {};
        std::vector<RawImport> raw;
        switch (*language) {
        case Language::python: python(file, source, raw); break;
        case Language::typescript:
        case Language::javascript: javascript(file, source, raw, diagnostics); break;
        case Language::go: go(file, source, raw); break;
        case Language::rust: rust(file, source, raw); break;
        }
        std::vector<RawImport> out;
        for (auto& r : raw) {
            if (r.target.empty())
                ++unresolved;
            else if (r.target != file)
                out.push_back(std::move(r));
        }
        return out;
    }

private:
    bool is_node(const std::string& p) const { return nodes_.count(p) > 0; }

    static std::string normal(const fs::path& p) {
        std::string s = p.lexically_normal().generic_string();
        if (s == "." ) return {};
        if (s.rfind("./", 0) == 0) s.erase(0, 2);
        return s;
    }

    static std::string dir_of(const std::string& file) {
        const auto slash = file.rfind('/');
        return slash == std::string::npos ? std::string() : file.substr(0, slash);
    }

    static std::string child(const std::string& dir, const std::string& name) {
        return dir.empty() ? name : dir + "/" + name;
    }

    // ── Python ──

    std::string python_module(const std::string& base, const std::vector<std::string>& parts) const {
        std::string path = base;
        for (const auto& p : parts) path = child(path, p);
        if (parts.empty()) {
            const std::string init = child(base, "__init__.py");
            return is_node(init) ? init : std::string();
        }
        if (is_node(path + ".py")) return path + ".py";
        if (is_node(child(path, "__init__.py"))) return child(path, "__init__.py");
        return {};
    }

    std::string python_absolute(const std::string& importer, const std::string& dotted) const {
        const auto parts = split(dotted, '.');
        for (const std::string& base : {dir_of(importer), std::string(), std::string("src")}) {
            auto r = python_module(base, parts);
            if (!r.empty()) return r;
        }
        return {};
    }

    // Returns the package directory a relative import refers to, or nullopt
    // when it climbs above the repository root.
    static std::optional<std::string> python_relative_base(const std::string& importer, std::size_t dots) {
        std::string dir = dir_of(importer);
        for (std::size_t i = 1; i < dots; ++i) {
            if (dir.empty()) return std::nullopt;
            dir = dir_of(dir);
        }
        return dir;
    }

    void python(const std::string& file, const std::string& source, std::vector<RawImport>& out) const {
        static const Query query = Query::compile(Grammar::python, "(import_statement) @import\n"
                                                                   "(import_from_statement) @from");
        const SyntaxTree tree = SyntaxTree::parse(Grammar::python, source);
        for (const auto& m : query.matches(tree)) {
            const TSNode stmt = m.captures.front().node;
            const int line = static_cast<int>(ts_node_start_point(stmt).row) + 1;
            const std::string text(trim(tree.text(stmt)));
            std::vector<std::string> names;
            TSTreeCursor cursor = ts_tree_cursor_new(stmt);
            if (ts_tree_cursor_goto_first_child(&cursor)) {
                do {
                    const char* field = ts_tree_cursor_current_field_name(&cursor);
                    if (!field || std::string_view(field) != "name") continue;
                    TSNode n = ts_tree_cursor_current_node(&cursor);
                    if (std::string_view(ts_node_type(n)) == "aliased_import")
                        n = ts_node_child_by_field_name(n, "name", 4);
                    names.emplace_back(tree.text(n));
                } while (ts_tree_cursor_goto_next_sibling(&cursor));
            }
            ts_tree_cursor_delete(&cursor);

            if (m.captures.front().name == "import") {
                for (const auto& n : names) out.push_back({python_absolute(file, n), text, line});
                continue;
            }
            const TSNode module = ts_node_child_by_field_name(stmt, "module_name", 11);
            const std::string spec(tree.text(module));
            std::optional<std::string> base;
            std::vector<std::string> parts;
            if (!spec.empty() && spec.front() == '.') {
                const std::size_t dots = spec.find_first_not_of('.') == std::string::npos
                                             ? spec.size()
                                             : spec.find_first_not_of('.');
                base = python_relative_base(file, dots);
                if (dots < spec.size()) parts = split(spec.substr(dots), '.');
                if (!base) {
                    out.push_back({{}, text, line});
                    continue;
                }
            } else {
                parts = split(spec, '.');
            }
            auto resolve = [&](const std::vector<std::string>& p) {
                return base ? python_module(*base, p) : python_absolute(file, join(p, "."));
            };
            bool any = false;
            const std::string pkg = resolve(parts);
            if (!pkg.empty()) {
                out.push_back({pkg, text, line});
                any = true;
            }
            for (const auto& n : names) {
                auto sub = parts;
                for (auto& seg : split(n, '.')) sub.push_back(seg);
                const std::string target = resolve(sub);
                if (!target.empty() && target != pkg) {
                    out.push_back({target, text, line});
                    any = true;
                }
            }
            if (!any) out.push_back({{}, text, line});
        }
    }

    // ── JavaScript / TypeScript ──

    std::string js_resolve(const std::string& importer, const std::string& spec) const {
        if (spec.rfind("./", 0) != 0 && spec.rfind("../", 0) != 0 && spec != "." && spec != "..") return {};
        const std::string base = normal(fs::path(dir_of(importer)) / spec);
        if (base.empty() || base.rfind("..", 0) == 0) return {};
        static const char* exts[] = {".ts", ".tsx", ".js", ".jsx", ".mjs", ".cjs"};
        if (is_node(base)) return base;
        for (const char* e : exts) {
            if (is_node(base + e)) return base + e;
        }
        // Compiled-output specifiers ("./x.js") written in TypeScript sources.
        const fs::path p(base);
        const std::string ext = p.extension().string();
        if (ext == ".js" || ext == ".jsx" || ext == ".mjs" || ext == ".cjs") {
            const std::string stem = base.substr(0, base.size() - ext.size());
            for (const char* e : {".ts", ".tsx", ".mts", ".cts"}) {
                if (is_node(stem + e)) return stem + e;
            }
        }
        for (const char* e : exts) {
            if (is_node(base + "/index" + e)) return base + "/index" + e;
        }
        return {};
    }

    void javascript(const std::string& file, const std::string& source, std::vector<RawImport>& out,
                    std::vector<std::string>& diagnostics) const {
        static constexpr const char* kQuery =
            "(import_statement source: (string) @src)\n"
            "(export_statement source: (string) @src)\n"
            "((call_expression function: (identifier) @fn arguments: (arguments . (_) @arg)) (#eq? @fn \"require\"))\n"
            "(call_expression function: (import) arguments: (arguments . (_) @arg))\n";
        const Grammar grammar = *grammar_for_path(file);
        static const std::map<Grammar, Query> queries = [] {
            std::map<Grammar, Query> q;
            for (Grammar g : {Grammar::javascript, Grammar::typescript, Grammar::tsx})
                q.emplace(g, Query::compile(g, kQuery));
            return q;
        }();
        const SyntaxTree tree = SyntaxTree::parse(grammar, source);
        for (const auto& m : queries.at(grammar).matches(tree)) {
            const QueryCapture* cap = m.find("src");
            if (!cap) cap = m.find("arg");
            if (!cap) continue;
            const int line = static_cast<int>(ts_node_start_point(cap->node).row) + 1;
            const std::string_view raw = tree.text(cap->node);
            const std::string_view type = ts_node_type(cap->node);
            TSNode stmt = cap->node;
            while (!ts_node_is_null(ts_node_parent(stmt)) &&
                   std::string_view(ts_node_type(ts_node_parent(stmt))) != "program")
                stmt = ts_node_parent(stmt);
            std::string text(trim(tree.text(stmt)));
            text = text.substr(0, text.find('\n'));
            if (type != "string") {
                diagnostics.push_back(file + ":" + std::to_string(line) + ": dynamic import not resolved");
                continue;
            }
            std::string spec(raw.substr(1, raw.size() >= 2 ? raw.size() - 2 : 0));
            out.push_back({js_resolve(file, spec), text, line});
        }
    }

    // ── Go ──

    void go(const std::string&, const std::string& source, std::vector<RawImport>& out) const {
        static const std::regex single(R"re(^\s*import\s+(?:[A-Za-z_.]\w*\s+)?"([^"]+)")re");
        static const std::regex block_open(R"(^\s*import\s*\()");
        static const std::regex block_line(R"re(^\s*(?:[A-Za-z_.]\w*\s+)?"([^"]+)")re");
        const auto lines = split(source, '\n');
        bool in_block = false;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& l = lines[i];
            std::smatch m;
            if (in_block) {
                if (trim(l).substr(0, 1) == ")") {
                    in_block = false;
                    continue;
                }
                if (std::regex_search(l, m, block_line)) go_edges(m[1].str(), std::string(trim(l)), static_cast<int>(i) + 1, out);
            } else if (std::regex_search(l, m, block_open)) {
                in_block = true;
            } else if (std::regex_search(l, m, single)) {
                go_edges(m[1].str(), std::string(trim(l)), static_cast<int>(i) + 1, out);
            }
        }
    }

    void go_edges(const std::string& path, const std::string& text, int line, std::vector<RawImport>& out) const {
        if (go_module_.empty() || (path != go_module_ && path.rfind(go_module_ + "/", 0) != 0)) {
            out.push_back({{}, text, line});
            return;
        }
        const std::string dir = path == go_module_ ? std::string() : path.substr(go_module_.size() + 1);
        bool any = false;
        for (const auto& n : nodes_) {
            if (dir_of(n) != dir || n.size() < 3 || n.substr(n.size() - 3) != ".go") continue;
            if (n.size() > 8 && n.substr(n.size() - 8) == "_test.go") continue;
            out.push_back({n, text, line});
            any = true;
        }
        if (!any) out.push_back({{}, text, line});
    }

    // ── Rust ──

    static bool is_module_root(const std::string& file) {
        const std::string name = fs::path(file).filename().string();
        return name == "main.rs" || name == "lib.rs" || name == "mod.rs";
    }

    // Directory holding the submodules of the module defined by `file`.
    static std::string module_dir(const std::string& file) {
        if (is_module_root(file)) return dir_of(file);
        return child(dir_of(file), fs::path(file).stem().string());
    }

    std::string crate_root(const std::string& file) const {
        std::string dir = dir_of(file);
        while (true) {
            if (is_node(child(dir, "lib.rs")) || is_node(child(dir, "main.rs"))) return dir;
            if (dir.empty()) return {};
            dir = dir_of(dir);
        }
    }

    std::string rust_walk(std::string dir, const std::vector<std::string>& segments) const {
        std::string found;
        for (const auto& seg : segments) {
            if (is_node(child(dir, seg + ".rs"))) {
                found = child(dir, seg + ".rs");
            } else if (is_node(child(dir, seg + "/mod.rs"))) {
                found = child(dir, seg + "/mod.rs");
            } else {
                break;
            }
            dir = child(dir, seg);
        }
        return found;
    }

    void rust(const std::string& file, const std::string& source, std::vector<RawImport>& out) const {
        static const std::regex mod_re(R"(^\s*(?:pub(?:\([^)]*\))?\s+)?mod\s+([A-Za-z_][A-Za-z0-9_]*)\s*;)");
        static const std::regex use_re(R"(^\s*(?:pub(?:\([^)]*\))?\s+)?use\s+(crate|super|self)::([^;]+);)");
        const auto lines = split(source, '\n');
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string& l = lines[i];
            const int line = static_cast<int>(i) + 1;
            std::smatch m;
            if (std::regex_search(l, m, mod_re)) {
                const std::string dir = module_dir(file);
                const std::string name = m[1].str();
                std::string target;
                if (is_node(child(dir, name + ".rs")))
                    target = child(dir, name + ".rs");
                else if (is_node(child(dir, name + "/mod.rs")))
                    target = child(dir, name + "/mod.rs");
                out.push_back({target, std::string(trim(l)), line});
            } else if (std::regex_search(l, m, use_re)) {
                std::string start;
                const std::string anchor = m[1].str();
                if (anchor == "crate")
                    start = crate_root(file);
                else if (anchor == "self")
                    start = module_dir(file);
                else
                    start = is_module_root(file) ? dir_of(dir_of(file)) : dir_of(file);
                for (const auto& path : expand_use(m[2].str())) {
                    std::vector<std::string> segs;
                    for (auto& s : split(path, ':')) {
                        std::string t(trim(s));
                        if (!t.empty() && t != "*") segs.push_back(t.substr(0, t.find(' ')));
                    }
                    std::string dir = start;
                    while (anchor == "super" && !segs.empty() && segs.front() == "super") {
                        dir = dir_of(dir);
                        segs.erase(segs.begin());
                    }
                    out.push_back({rust_walk(dir, segs), std::string(trim(l)), line});
                }
            }
        }
    }

    // "a::{b, c::d}" -> ["a::b", "a::c::d"] (one level of braces).
    static std::vector<std::string> expand_use(const std::string& tail) {
        const auto open = tail.find('{');
        if (open == std::string::npos) return {tail};
        const auto close = tail.rfind('}');
        const std::string prefix = tail.substr(0, open);
        std::vector<std::string> out;
        for (auto& item : split(tail.substr(open + 1, close == std::string::npos ? std::string::npos : close - open - 1), ','))
            if (!trim(item).empty()) out.push_back(prefix + std::string(trim(item)));
        return out;
    }

    const fs::path& root_;
    const std::set<std::string>& nodes_;
    std::string go_module_;
};

std::string layer_prefix(std::string p) {
    if (!p.empty() && p.back() != '/') p += '/';
    return p;
}

std::string edge_text(const std::vector<std::string>& walk) {
    std::string s = join(walk, " -> ");
    if (!walk.empty()) s += " -> " + walk.front();
    return s;
}

} // namespace

DependencyGraph build_graph(const fs::path& root, const std::vector<std::string>& files) {
    DependencyGraph g;
    for (const auto& f : files) {
        if (language_for_path(f)) g.nodes.insert(f);
    }
    Extractor extractor(root, g.nodes);
    std::size_t unresolved = 0;
    std::map<std::pair<std::string, std::string>, DependencyEdge> edges;
    for (const auto& file : g.nodes) {
        std::ifstream in(root / file, std::ios::binary);
        if (!in) {
            g.diagnostics.push_back("cannot read " + file);
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            for (auto& r : extractor.extract(file, buf.str(), unresolved, g.diagnostics)) {
                auto key = std::make_pair(file, r.target);
                auto it = edges.find(key);
                if (it == edges.end() || r.line < it->second.line)
                    edges[key] = DependencyEdge{file, r.target, r.text, r.line};
            }
        } catch (const std::exception& e) {
            g.diagnostics.push_back("import extraction failed for " + file + ": " + e.what());
        }
    }
    for (auto& [key, e] : edges) g.edges.push_back(std::move(e));
    if (unresolved) {
        g.diagnostics.push_back(std::to_string(unresolved) +
                                " import(s) did not resolve to repository files (external or unresolved)");
    }
    return g;
}

DependencyGraph build_graph(const fs::path& root) { return build_graph(root, resolve_scope(root, ScanScope::repo())); }

std::vector<std::vector<std::string>> strongly_connected_components(
    const std::set<std::string>& nodes, const std::map<std::string, std::vector<std::string>>& adjacency) {
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;
    static const std::vector<std::string> none;
    auto successors = [&](const std::string& n) -> const std::vector<std::string>& {
        auto it = adjacency.find(n);
        return it == adjacency.end() ? none : it->second;
    };

    struct Frame {
        std::string node;
        std::size_t next = 0;
    };
    for (const auto& start : nodes) {
        if (index.count(start)) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack.insert(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& succ = successors(f.node);
            if (f.next < succ.size()) {
                const std::string& w = succ[f.next++];
                if (!nodes.count(w)) continue;
                if (!index.count(w)) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack.insert(w);
                    frames.push_back({w, 0});
                } else if (on_stack.count(w)) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            const std::string v = f.node;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::string> comp;
                while (true) {
                    std::string w = stack.back();
                    stack.pop_back();
                    on_stack.erase(w);
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> cycle_witness(const std::vector<std::string>& component,
                                       const std::map<std::string, std::vector<std::string>>& adjacency) {
    if (component.empty()) return {};
    std::set<std::string> members(component.begin(), component.end());
    // Shortest path from u to v inside the component, excluding u.
    auto path = [&](const std::string& u, const std::string& v) {
        std::map<std::string, std::string> parent;
        std::deque<std::string> queue{u};
        parent[u] = u;
        while (!queue.empty()) {
            std::string x = queue.front();
            queue.pop_front();
            auto it = adjacency.find(x);
            if (it == adjacency.end()) continue;
            for (const auto& y : it->second) {
                if (!members.count(y) || parent.count(y)) continue;
                parent[y] = x;
                if (y == v) {
                    std::vector<std::string> p{y};
                    for (std::string c = x; c != u; c = parent[c]) p.push_back(c);
                    std::reverse(p.begin(), p.end());
                    return p;
                }
                queue.push_back(y);
            }
            if (x == u && v == u) {
                // handled by the caller: closing edge
            }
        }
        return std::vector<std::string>{};
    };
    const std::string& start = component.front();
    std::vector<std::string> walk{start};
    std::set<std::string> visited{start};
    std::string current = start;
    for (const auto& v : component) {
        if (visited.count(v)) continue;
        for (auto& step : path(current, v)) {
            visited.insert(step);
            walk.push_back(step);
        }
        current = v;
    }
    // Return to the start: every node of the closing path except the start.
    auto it = adjacency.find(current);
    const bool direct = it != adjacency.end() && std::binary_search(it->second.begin(), it->second.end(), start);
    if (!direct) {
        std::map<std::string, std::string> parent;
        std::deque<std::string> queue{current};
        parent[current] = current;
        while (!queue.empty()) {
            std::string x = queue.front();
            queue.pop_front();
            auto adj = adjacency.find(x);
            if (adj == adjacency.end()) continue;
            bool done = false;
            for (const auto& y : adj->second) {
                if (!members.count(y) || parent.count(y)) continue;
                parent[y] = x;
                if (y == start) {
                    std::vector<std::string> back;
                    for (std::string c = x; c != current; c = parent[c]) back.push_back(c);
                    std::reverse(back.begin(), back.end());
                    walk.insert(walk.end(), back.begin(), back.end());
                    done = true;
                    break;
                }
                queue.push_back(y);
            }
            if (done) break;
        }
    }
    return walk;
}

std::vector<ArchViolation> check_arch(const DependencyGraph& graph, const CheckStore& store) {
    std::vector<ArchViolation> out;
    const auto adjacency = graph.adjacency();
    for (const auto& [id, c] : store.constraints) {
        const auto* rule = std::get_if<ArchRule>(&c.check);
        if (!rule || c.disabled) continue;
        auto add = [&](std::string source, std::optional<std::string> target, std::string message,
                       std::string suggestion) {
            ArchViolation v;
            v.rule_id = id;
            v.source = std::move(source);
            v.target = std::move(target);
            v.message = std::move(message);
            v.severity = c.enforcement_level;
            v.suggestion = std::move(suggestion);
            out.push_back(std::move(v));
            return &out.back();
        };

        if (const auto* r = std::get_if<LayerOrder>(rule)) {
            std::vector<std::string> layers;
            for (const auto& l : r->layers) layers.push_back(layer_prefix(l));
            auto layer_of = [&](const std::string& path) -> long {
                long best = -1;
                std::size_t best_len = 0;
                for (std::size_t i = 0; i < layers.size(); ++i) {
                    if (path.rfind(layers[i], 0) == 0 && layers[i].size() > best_len) {
                        best = static_cast<long>(i);
                        best_len = layers[i].size();
                    }
                }
                return best;
            };
            for (const auto& e : graph.edges) {
                const long from = layer_of(e.from);
                const long to = layer_of(e.to);
                if (from < 0 || to < 0 || to <= from) continue;
                add(e.from, e.to,
                    layers[static_cast<std::size_t>(from)] + " must not depend on " +
                        layers[static_cast<std::size_t>(to)] + " (imports " + e.to + " at line " +
                        std::to_string(e.line) + ")",
                    "Remove the import of " + e.to + " or move the shared code into " +
                        layers[static_cast<std::size_t>(from)]);
            }
        } else if (const auto* r = std::get_if<AllowedSubdirs>(rule)) {
            const std::string parent = layer_prefix(r->parent_prefix);
            const std::string short_parent = layer_prefix(parent.substr(0, parent.size() - 1).substr(
                parent.substr(0, parent.size() - 1).rfind('/') == std::string::npos
                    ? 0
                    : parent.substr(0, parent.size() - 1).rfind('/') + 1));
            const std::string allowed = join(r->allowed, ", ");
            for (const auto& n : graph.nodes) {
                if (n.rfind(parent, 0) != 0) continue;
                const std::string rest = n.substr(parent.size());
                const auto slash = rest.find('/');
                if (slash != std::string::npos &&
                    std::find(r->allowed.begin(), r->allowed.end(), rest.substr(0, slash)) != r->allowed.end())
                    continue;
                add(n, std::nullopt, short_parent + " only allows subdirectories: " + allowed,
                    "Move to one of " + parent + "{" + join(r->allowed, ",") + "}/ or to a lower layer");
            }
        } else if (const auto* r = std::get_if<ForbiddenEdge>(rule)) {
            for (const auto& e : graph.edges) {
                if (glob_match(r->from_glob, e.from) && glob_match(r->to_glob, e.to)) {
                    add(e.from, e.to,
                        "files matching " + r->from_glob + " must not import files matching " + r->to_glob +
                            " (imports " + e.to + " at line " + std::to_string(e.line) + ")",
                        "Remove the import of " + e.to + " or route it through an allowed layer");
                }
            }
        } else if (const auto* r = std::get_if<NoCycles>(rule)) {
            std::set<std::string> scoped;
            for (const auto& n : graph.nodes) {
                if (glob_match(r->scope_glob, n)) scoped.insert(n);
            }
            for (const auto& comp : strongly_connected_components(scoped, adjacency)) {
                if (comp.size() < 2) continue;
                auto walk = cycle_witness(comp, adjacency);
                auto* v = add(walk.front(), walk.size() > 1 ? std::optional<std::string>(walk[1]) : std::nullopt,
                              "dependency cycle: " + edge_text(walk),
                              "Break the cycle " + edge_text(walk) + " by extracting the shared code or inverting one import");
                v->cycle_members = std::move(walk);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ArchViolation& a, const ArchViolation& b) {
        return std::tie(a.rule_id, a.source, a.target, a.message) < std::tie(b.rule_id, b.source, b.target, b.message);
    });
    return out;
}

std::string graph_to_json(const DependencyGraph& graph) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : graph.nodes) j["nodes"].push_back(n);
    j["edges"] = nlohmann::json::array();
    for (const auto& e : graph.edges)
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"import", e.import_text}, {"line", e.line}});
    j["diagnostics"] = graph.diagnostics;
    return j.dump(2) + "\n";
}

} // namespace contextcov
