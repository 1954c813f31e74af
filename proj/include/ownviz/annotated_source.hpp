#pragma once

// Hash-annotated source listings. Variables and functions are marked with
// single-level tspan tags:
//
//   let <tspan data-hash="1">s</tspan> =
//   <tspan class="fn" data-hash="0" hash="2">String::from</tspan>("hello");
//
// Any other '<' is ordinary source text.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ownviz::source {

struct Span {
  std::string text;
  std::optional<std::uint32_t> data_hash;  // 0 for function spans
  bool is_fn = false;
  std::optional<std::uint32_t> fn_hash;

  bool annotated() const { return data_hash.has_value(); }
  bool operator==(const Span&) const = default;
};

using Line = std::vector<Span>;

struct AnnotatedListing {
  // Split on '\n'; a trailing newline yields a final empty line so that
  // strip_annotations reproduces the input byte for byte.
  std::vector<Line> lines;

  // Number of lines that hold source, ignoring the empty tail after a
  // trailing newline.
  int display_line_count() const;

  bool operator==(const AnnotatedListing&) const = default;
};

class SourceError : public std::runtime_error {
 public:
  enum class Kind { MalformedTag, NestedAnnotation, NonNumericHash };
  SourceError(Kind kind, int line, std::string detail);

  Kind kind;
  int line;
};

AnnotatedListing parse_annotated_source(std::string_view text);

std::string strip_annotations(const AnnotatedListing& listing);

// Expands tabs to the next multiple of tab_width. start_column is the
// display column the text begins at, for text that continues a line.
std::string expand_tabs(std::string_view text, int tab_width = 4, std::size_t start_column = 0);

}  // namespace ownviz::source
