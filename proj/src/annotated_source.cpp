#include "ownviz/annotated_source.hpp"

#include <charconv>

#include <fmt/format.h>

namespace ownviz::source {

SourceError::SourceError(Kind k, int l, std::string detail)
    : std::runtime_error(fmt::format("line {}: {}", l, detail)), kind(k), line(l) {}

int AnnotatedListing::display_line_count() const {
  auto n = static_cast<int>(lines.size());
  if (n > 0 && lines.back().empty()) --n;
  return n;
}

namespace {

constexpr std::string_view kOpen = "<tspan";
constexpr std::string_view kClose = "</tspan>";

bool opens_tag(std::string_view rest) {
  if (!rest.starts_with(kOpen)) return false;
  if (rest.size() == kOpen.size()) return true;
  char c = rest[kOpen.size()];
  return c == ' ' || c == '\t' || c == '>';
}

std::uint32_t parse_hash(std::string_view value, int line) {
  std::uint32_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw SourceError(SourceError::Kind::NonNumericHash, line,
                      fmt::format("hash value '{}' is not a non-negative integer", value));
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  Line run() {
    std::string plain;
    std::size_t pos = 0;
    while (pos < text_.size()) {
      auto rest = text_.substr(pos);
      if (opens_tag(rest)) {
        if (!plain.empty()) spans_.push_back(Span{std::exchange(plain, {}), {}, false, {}});
        pos = tag(pos);
      } else if (rest.starts_with(kClose)) {
        malformed("closing </tspan> without an opening tag");
      } else {
        plain += text_[pos++];
      }
    }
    if (!plain.empty()) spans_.push_back(Span{std::move(plain), {}, false, {}});
    return std::move(spans_);
  }

 private:
  [[noreturn]] void malformed(std::string detail) const {
    throw SourceError(SourceError::Kind::MalformedTag, line_, std::move(detail));
  }

  // Parses `<tspan attrs>text</tspan>` starting at pos; returns the index
  // just past the closing tag.
  std::size_t tag(std::size_t pos) {
    pos += kOpen.size();
    std::optional<std::string_view> cls, data_hash, hash;
    for (;;) {
      while (pos < text_.size() && (text_[pos] == ' ' || text_[pos] == '\t')) ++pos;
      if (pos >= text_.size()) malformed("unterminated <tspan> tag");
      if (text_[pos] == '>') {
        ++pos;
        break;
      }
      auto eq = text_.find('=', pos);
      if (eq == std::string_view::npos) malformed("attribute without value");
      auto key = text_.substr(pos, eq - pos);
      if (eq + 1 >= text_.size() || text_[eq + 1] != '"') malformed("attribute value must be quoted");
      auto close_quote = text_.find('"', eq + 2);
      if (close_quote == std::string_view::npos) malformed("unterminated attribute value");
      auto value = text_.substr(eq + 2, close_quote - eq - 2);
      std::optional<std::string_view>* slot = nullptr;
      if (key == "class") slot = &cls;
      else if (key == "data-hash") slot = &data_hash;
      else if (key == "hash") slot = &hash;
      else malformed(fmt::format("unsupported attribute '{}'", key));
      if (slot->has_value()) malformed(fmt::format("duplicate attribute '{}'", key));
      *slot = value;
      pos = close_quote + 1;
    }

    auto close = text_.find(kClose, pos);
    auto nested = text_.find(kOpen, pos);
    if (nested != std::string_view::npos && (close == std::string_view::npos || nested < close) &&
        opens_tag(text_.substr(nested))) {
      throw SourceError(SourceError::Kind::NestedAnnotation, line_, "annotations cannot be nested");
    }
    if (close == std::string_view::npos) malformed("<tspan> is not closed on the same line");
    auto content = text_.substr(pos, close - pos);
    if (content.empty()) malformed("empty annotation");

    if (!data_hash) malformed("annotation is missing data-hash");
    Span span;
    span.text = std::string(content);
    span.data_hash = parse_hash(*data_hash, line_);
    if (cls) {
      if (*cls != "fn") malformed(fmt::format("unsupported class '{}'", *cls));
      if (!hash) malformed("function annotation is missing hash");
      span.is_fn = true;
      span.fn_hash = parse_hash(*hash, line_);
      if (*span.data_hash != 0) malformed("function annotations must use data-hash=\"0\"");
      if (*span.fn_hash == 0) malformed("function hash must be >= 1");
    } else {
      if (hash) malformed("hash attribute is only valid on function annotations");
      if (*span.data_hash == 0) malformed("variable data-hash must be >= 1");
    }
    spans_.push_back(std::move(span));
    return close + kClose.size();
  }

  std::string_view text_;
  int line_;
  Line spans_;
};

}  // namespace

AnnotatedListing parse_annotated_source(std::string_view text) {
  AnnotatedListing listing;
  if (text.empty()) return listing;
  std::size_t start = 0;
  int line_no = 0;
  for (;;) {
    auto nl = text.find('\n', start);
    auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    listing.lines.push_back(LineParser(raw, ++line_no).run());
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return listing;
}

std::string strip_annotations(const AnnotatedListing& listing) {
  std::string out;
  for (std::size_t i = 0; i < listing.lines.size(); ++i) {
    if (i > 0) out += '\n';
    for (const auto& span : listing.lines[i]) out += span.text;
  }
  return out;
}

std::string expand_tabs(std::string_view text, int tab_width, std::size_t start_column) {
  const auto width = static_cast<std::size_t>(tab_width);
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\t') out.append(width - (start_column + out.size()) % width, ' ');
    else out += c;
  }
  return out;
}

}  // namespace ownviz::source
