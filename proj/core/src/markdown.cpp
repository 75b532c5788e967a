#include "contextcov/markdown.hpp"

#include "contextcov/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>

namespace contextcov {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::document: return "document";
    case NodeKind::heading: return "heading";
    case NodeKind::paragraph: return "paragraph";
    case NodeKind::list_item: return "list_item";
    case NodeKind::code_block: return "code_block";
    case NodeKind::other: return "other";
    }
    return "other";
}

void validate_utf8(std::string_view text) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = bytes[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        std::uint32_t cp = 0;
        std::uint32_t min = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2, cp = c & 0x1F, min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3, cp = c & 0x0F, min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4, cp = c & 0x07, min = 0x10000;
        } else {
            throw EncodingError(i);
        }
        if (i + len > n) throw EncodingError(i);
        for (std::size_t k = 1; k < len; ++k) {
            if ((bytes[i + k] & 0xC0) != 0x80) throw EncodingError(i);
            cp = (cp << 6) | (bytes[i + k] & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw EncodingError(i);
        i += len;
    }
}

namespace {

struct Line {
    std::size_t start;
    std::size_t end; // excludes the line terminator
};

std::vector<Line> split_lines(std::string_view src) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    while (pos < src.size()) {
        std::size_t nl = src.find('\n', pos);
        std::size_t next = nl == std::string_view::npos ? src.size() : nl + 1;
        std::size_t end = nl == std::string_view::npos ? src.size() : nl;
        if (end > pos && src[end - 1] == '\r') --end;
        lines.push_back({pos, end});
        pos = next;
    }
    return lines;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

int indent_columns(std::string_view s) {
    int col = 0;
    for (char c : s) {
        if (c == ' ')
            ++col;
        else if (c == '\t')
            col += 4 - (col % 4);
        else
            break;
    }
    return col;
}

// Removes up to `cols` columns of leading whitespace.
std::string_view strip_columns(std::string_view s, int cols) {
    int col = 0;
    std::size_t i = 0;
    while (i < s.size() && col < cols) {
        if (s[i] == ' ')
            ++col;
        else if (s[i] == '\t')
            col += 4 - (col % 4);
        else
            break;
        ++i;
    }
    return s.substr(i);
}

std::string_view strip_indent(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

struct AtxHeading {
    int level;
    std::string_view title;
};

std::optional<AtxHeading> atx_heading(std::string_view s) {
    if (indent_columns(s) > 3) return std::nullopt;
    s = strip_indent(s);
    int level = 0;
    while (level < static_cast<int>(s.size()) && s[level] == '#') ++level;
    if (level < 1 || level > 6) return std::nullopt;
    if (static_cast<std::size_t>(level) < s.size() && s[level] != ' ' && s[level] != '\t')
        return std::nullopt;
    std::string_view title = trim(s.substr(level));
    // Optional closing sequence: a run of '#' preceded by whitespace (or alone).
    std::size_t k = title.size();
    while (k > 0 && title[k - 1] == '#') --k;
    if (k == 0) {
        title = {};
    } else if (k < title.size() && (title[k - 1] == ' ' || title[k - 1] == '\t')) {
        title = trim(title.substr(0, k));
    }
    return AtxHeading{level, title};
}

struct Fence {
    char ch;
    std::size_t count;
};

std::optional<Fence> fence_open(std::string_view s) {
    if (indent_columns(s) > 3) return std::nullopt;
    s = strip_indent(s);
    if (s.empty() || (s[0] != '`' && s[0] != '~')) return std::nullopt;
    const char ch = s[0];
    std::size_t count = 0;
    while (count < s.size() && s[count] == ch) ++count;
    if (count < 3) return std::nullopt;
    if (ch == '`' && s.substr(count).find('`') != std::string_view::npos) return std::nullopt;
    return Fence{ch, count};
}

bool fence_closes(std::string_view s, const Fence& open) {
    if (indent_columns(s) > 3) return false;
    s = strip_indent(s);
    std::size_t count = 0;
    while (count < s.size() && s[count] == open.ch) ++count;
    return count >= open.count && is_blank(s.substr(count));
}

bool thematic_break(std::string_view s) {
    if (indent_columns(s) > 3) return false;
    s = strip_indent(s);
    if (s.empty() || (s[0] != '-' && s[0] != '*' && s[0] != '_')) return false;
    const char ch = s[0];
    int count = 0;
    for (char c : s) {
        if (c == ch)
            ++count;
        else if (c != ' ' && c != '\t')
            return false;
    }
    return count >= 3;
}

struct ListMarker {
    int content_column; // column of the item's first content character
    bool empty;         // nothing after the marker
};

std::optional<ListMarker> list_marker(std::string_view s) {
    const int indent = indent_columns(s);
    if (indent > 3) return std::nullopt;
    std::string_view rest = strip_indent(s);
    std::size_t marker_len = 0;
    if (!rest.empty() && (rest[0] == '-' || rest[0] == '*' || rest[0] == '+')) {
        marker_len = 1;
    } else {
        std::size_t d = 0;
        while (d < rest.size() && d < 9 && rest[d] >= '0' && rest[d] <= '9') ++d;
        if (d == 0 || d >= rest.size() || (rest[d] != '.' && rest[d] != ')')) return std::nullopt;
        marker_len = d + 1;
    }
    std::string_view after = rest.substr(marker_len);
    if (after.empty() || is_blank(after)) return ListMarker{indent + static_cast<int>(marker_len) + 1, true};
    if (after[0] != ' ' && after[0] != '\t') return std::nullopt;
    int spaces = indent_columns(after);
    if (spaces > 4) spaces = 1;
    return ListMarker{indent + static_cast<int>(marker_len) + spaces, false};
}

bool setext_underline(std::string_view s, int& level) {
    if (indent_columns(s) > 3) return false;
    std::string_view t = trim(s);
    if (t.empty() || (t[0] != '=' && t[0] != '-')) return false;
    if (!std::all_of(t.begin(), t.end(), [&](char c) { return c == t[0]; })) return false;
    level = t[0] == '=' ? 1 : 2;
    return true;
}

bool html_block_start(std::string_view s) {
    if (indent_columns(s) > 3) return false;
    s = strip_indent(s);
    if (s.size() < 2 || s[0] != '<') return false;
    const char c = s[1];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '/' || c == '!' || c == '?';
}

bool blockquote_start(std::string_view s) {
    return indent_columns(s) <= 3 && !strip_indent(s).empty() && strip_indent(s)[0] == '>';
}

bool table_delimiter_row(std::string_view s) {
    std::string_view t = trim(s);
    if (t.empty()) return false;
    bool dash = false;
    bool pipe = false;
    for (char c : t) {
        if (c == '-')
            dash = true;
        else if (c == '|')
            pipe = true;
        else if (c != ':' && c != ' ' && c != '\t')
            return false;
    }
    return dash && (pipe || t.find('-') == 0);
}

bool starts_block(std::string_view s) {
    if (atx_heading(s) || fence_open(s) || thematic_break(s) || html_block_start(s) || blockquote_start(s))
        return true;
    auto marker = list_marker(s);
    return marker && !marker->empty;
}

class BlockParser {
public:
    BlockParser(std::string source_file, std::string_view src) : src_(src), lines_(split_lines(src)) {
        tree_.source_file = std::move(source_file);
        tree_.root.kind = NodeKind::document;
        tree_.root.span = {0, src.size()};
        stack_.push_back(&tree_.root);
    }

    DocumentTree run() {
        std::size_t i = 0;
        while (i < lines_.size()) i = step(i);
        return std::move(tree_);
    }

private:
    std::string_view line(std::size_t i) const {
        return src_.substr(lines_[i].start, lines_[i].end - lines_[i].start);
    }

    std::size_t step(std::size_t i) {
        const std::string_view sv = line(i);
        if (is_blank(sv)) return i + 1;

        const int col = indent_columns(sv);
        while (!lists_.empty() && col < lists_.back()) lists_.pop_back();
        const int base = lists_.empty() ? 0 : lists_.back();
        const std::string_view rel = strip_columns(sv, base);

        if (auto h = atx_heading(rel)) {
            lists_.clear();
            push_heading(h->level, std::string(h->title), i, i);
            return i + 1;
        }
        if (auto f = fence_open(rel)) {
            std::size_t j = i + 1;
            std::size_t last = i;
            for (; j < lines_.size(); ++j) {
                last = j;
                if (fence_closes(strip_columns(line(j), base), *f)) break;
            }
            if (j == lines_.size()) last = lines_.size() - 1;
            add_leaf(NodeKind::code_block, i, last, 0);
            return last + 1;
        }
        if (thematic_break(rel)) return i + 1;
        if (auto m = list_marker(rel)) {
            const int content_col = base + m->content_column;
            const std::size_t last = consume_item(i, content_col);
            add_leaf(NodeKind::list_item, i, last, static_cast<int>(lists_.size()));
            lists_.push_back(content_col);
            return last + 1;
        }
        if (html_block_start(rel) || blockquote_start(rel)) {
            std::size_t j = i + 1;
            while (j < lines_.size() && !is_blank(line(j))) ++j;
            add_leaf(NodeKind::other, i, j - 1, 0);
            return j;
        }
        if (rel.find('|') != std::string_view::npos && i + 1 < lines_.size() &&
            table_delimiter_row(strip_columns(line(i + 1), base))) {
            std::size_t j = i + 2;
            while (j < lines_.size() && !is_blank(line(j)) && line(j).find('|') != std::string_view::npos) ++j;
            add_leaf(NodeKind::other, i, j - 1, 0);
            return j;
        }
        if (lists_.empty() && indent_columns(rel) >= 4) {
            std::size_t j = i + 1;
            std::size_t last = i;
            for (; j < lines_.size(); ++j) {
                if (is_blank(line(j))) continue;
                if (indent_columns(line(j)) < 4) break;
                last = j;
            }
            add_leaf(NodeKind::code_block, i, last, 0);
            return last + 1;
        }

        // Paragraph, possibly closed by a setext underline.
        std::size_t j = i + 1;
        for (; j < lines_.size(); ++j) {
            const std::string_view t = line(j);
            if (is_blank(t)) break;
            int level = 0;
            if (lists_.empty() && setext_underline(t, level)) {
                std::string title;
                for (std::size_t k = i; k < j; ++k) {
                    if (!title.empty()) title += ' ';
                    title += trim(line(k));
                }
                push_heading(level, std::move(title), i, j);
                return j + 1;
            }
            const int tcol = indent_columns(t);
            if (starts_block(strip_columns(t, std::min(base, tcol)))) break;
        }
        add_leaf(NodeKind::paragraph, i, j - 1, 0);
        return j;
    }

    // Returns the last line belonging to the item's own content; child items
    // and anything after them are left to the main loop.
    std::size_t consume_item(std::size_t first, int content_col) {
        std::size_t last = first;
        bool blank_seen = false;
        std::optional<Fence> fence = fence_open(strip_columns(line(first), content_col));
        for (std::size_t j = first + 1; j < lines_.size(); ++j) {
            const std::string_view t = line(j);
            if (fence) {
                if (!is_blank(t) && indent_columns(t) < content_col) break;
                last = j;
                if (fence_closes(strip_columns(t, content_col), *fence)) fence.reset();
                continue;
            }
            if (is_blank(t)) {
                blank_seen = true;
                continue;
            }
            const int tcol = indent_columns(t);
            if (tcol >= content_col) {
                const std::string_view r = strip_columns(t, content_col);
                if (auto m = list_marker(r); m && (!m->empty || !blank_seen)) break;
                if (atx_heading(r)) break;
                fence = fence_open(r);
                last = j;
                blank_seen = false;
                continue;
            }
            if (!blank_seen && !starts_block(t)) {
                last = j;
                continue;
            }
            break;
        }
        return last;
    }

    void push_heading(int level, std::string title, std::size_t first, std::size_t last) {
        while (stack_.size() > 1 && stack_.back()->level >= level) stack_.pop_back();
        DocumentNode node;
        node.kind = NodeKind::heading;
        node.level = level;
        node.text = std::move(title);
        node.span = {lines_[first].start, lines_[last].end};
        stack_.back()->children.push_back(std::move(node));
        stack_.push_back(&stack_.back()->children.back());
    }

    void add_leaf(NodeKind kind, std::size_t first, std::size_t last, int depth) {
        DocumentNode node;
        node.kind = kind;
        node.list_depth = depth;
        node.span = {lines_[first].start, lines_[last].end};
        node.text = std::string(src_.substr(node.span.start, node.span.size()));
        stack_.back()->children.push_back(std::move(node));
    }

    std::string_view src_;
    std::vector<Line> lines_;
    DocumentTree tree_;
    std::vector<DocumentNode*> stack_;
    std::vector<int> lists_; // content columns of open list items
};

std::vector<std::string_view> raw_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        std::string_view l = text.substr(pos, end - pos);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        out.push_back(l);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

// Collapses prose whitespace while keeping fenced code verbatim.
std::string normalize_lines(const std::vector<std::string_view>& lines) {
    std::vector<std::string> segments;
    std::string prose;
    std::string code;
    std::optional<Fence> fence;
    auto flush_prose = [&] {
        std::string collapsed = collapse_whitespace(prose);
        if (!collapsed.empty()) segments.push_back(std::move(collapsed));
        prose.clear();
    };
    for (std::string_view l : lines) {
        if (fence) {
            code += '\n';
            code += l;
            if (fence_closes(l, *fence)) {
                segments.push_back(std::move(code));
                code.clear();
                fence.reset();
            }
        } else if (auto f = fence_open(l)) {
            flush_prose();
            fence = f;
            code = std::string(strip_indent(l));
        } else {
            prose += ' ';
            prose += l;
        }
    }
    flush_prose();
    if (!code.empty()) segments.push_back(std::move(code));
    std::string out;
    for (const auto& s : segments) {
        if (!out.empty()) out += '\n';
        out += s;
    }
    return out;
}

std::string normalize_leaf(const DocumentNode& node) {
    auto lines = raw_lines(node.text);
    switch (node.kind) {
    case NodeKind::code_block: return std::string(trim_right(node.text));
    case NodeKind::list_item: {
        // Column of the first content character on the marker line.
        const int indent = indent_columns(lines[0]);
        std::string_view rest = strip_indent(lines[0]);
        std::size_t k = 0;
        if (!rest.empty() && (rest[0] == '-' || rest[0] == '*' || rest[0] == '+')) {
            k = 1;
        } else {
            while (k < rest.size() && rest[k] >= '0' && rest[k] <= '9') ++k;
            if (k < rest.size()) ++k;
        }
        std::string_view after = rest.substr(k);
        int spaces = indent_columns(after);
        if (spaces > 4) spaces = 1;
        const int content_col = indent + static_cast<int>(k) + spaces;
        lines[0] = strip_indent(after);
        for (std::size_t i = 1; i < lines.size(); ++i) lines[i] = strip_columns(lines[i], content_col);
        return normalize_lines(lines);
    }
    case NodeKind::other: {
        for (auto& l : lines) {
            std::string_view s = strip_indent(l);
            while (!s.empty() && s[0] == '>') s = strip_indent(s.substr(1));
            l = s;
        }
        return collapse_whitespace(join(lines, " "));
    }
    default:
        for (auto& l : lines) l = strip_indent(l);
        return normalize_lines(lines);
    }
}

void collect_slices(const DocumentNode& node, const std::string& source_file, std::vector<std::string>& path,
                    std::vector<Slice>& out) {
    for (const auto& child : node.children) {
        if (child.kind == NodeKind::heading) {
            path.push_back(normalize_heading(child.text));
            collect_slices(child, source_file, path, out);
            path.pop_back();
            continue;
        }
        std::string content = normalize_leaf(child);
        if (content.empty()) continue;
        out.push_back(Slice{source_file, path, std::move(content), child.kind, child.span, child.list_depth});
    }
}

} // namespace

DocumentTree parse_document(std::string source_file, std::string_view text) {
    validate_utf8(text);
    return BlockParser(std::move(source_file), text).run();
}

std::vector<Slice> enumerate_slices(const DocumentTree& tree) {
    std::vector<Slice> out;
    std::vector<std::string> path;
    collect_slices(tree.root, tree.source_file, path, out);
    return out;
}

std::string normalize_heading(std::string_view raw) {
    std::string_view t = trim(raw);
    while (!t.empty() && t[0] == '#') t.remove_prefix(1);
    t = trim(t);
    // Optional closing sequence: "## Title ##".
    if (auto end = t.find_last_not_of('#'); end != std::string_view::npos && end + 1 < t.size() &&
                                             (t[end] == ' ' || t[end] == '\t'))
        t = t.substr(0, end);
    else if (end == std::string_view::npos)
        t = {};
    std::string out;
    for (char c : t) {
        if (c != '`') out += c;
    }
    return collapse_whitespace(out);
}

} // namespace contextcov
