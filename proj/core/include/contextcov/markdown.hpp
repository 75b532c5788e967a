#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace contextcov {

enum class NodeKind { document, heading, paragraph, list_item, code_block, other };

std::string_view to_string(NodeKind kind);

/// Half-open byte range into the source text.
struct ByteSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool operator==(const ByteSpan&) const = default;
};

struct DocumentNode {
    NodeKind kind = NodeKind::document;
    int level = 0;      // 1-6 for headings
    int list_depth = 0; // nesting depth of list items, 0 for top-level items
    std::string text;   // raw bytes of the span (heading: title without markers)
    ByteSpan span;
    std::vector<DocumentNode> children;

    bool operator==(const DocumentNode&) const = default;
};

struct DocumentTree {
    std::string source_file;
    DocumentNode root;
};

/// A content leaf together with the headings that scope it.
struct Slice {
    std::string source_file;
    std::vector<std::string> header_path;
    std::string content_text;
    NodeKind kind = NodeKind::paragraph;
    ByteSpan span;
    int list_depth = 0;

    bool operator==(const Slice&) const = default;
};

/// Throws EncodingError at the first byte that breaks UTF-8 well-formedness.
void validate_utf8(std::string_view text);

/// Parses CommonMark-style Markdown into a heading hierarchy whose leaves are
/// content blocks. Total over valid UTF-8: anything unrecognised becomes a
/// paragraph or `other` leaf.
DocumentTree parse_document(std::string source_file, std::string_view text);

/// One slice per non-empty content leaf, in document order.
std::vector<Slice> enumerate_slices(const DocumentTree& tree);

/// Heading title as it appears in a header path: markers and inline-code
/// backticks removed, surrounding whitespace trimmed, case preserved.
std::string normalize_heading(std::string_view raw);

} // namespace contextcov
