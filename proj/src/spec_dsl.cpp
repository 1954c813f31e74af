#include "ownviz/spec_dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <utility>

#include <fmt/format.h>

namespace ownviz::dsl {

ParseError::ParseError(Kind k, int l, int c, std::string d, std::string s)
    : std::runtime_error(c > 0 ? fmt::format("line {}, column {}: {}", l, c, d)
                               : fmt::format("line {}: {}", l, d)),
      kind(k),
      line(l),
      column(c),
      detail(std::move(d)),
      subject(std::move(s)) {}

namespace {

struct VerbInfo {
  std::string_view verb;
  EventKind kind;
  bool binary;
};

constexpr std::array<VerbInfo, 10> kVerbs{{
    {"move", EventKind::Move, true},
    {"copy", EventKind::Copy, true},
    {"imm_borrow", EventKind::ImmutableBorrow, true},
    {"mut_borrow", EventKind::MutableBorrow, true},
    {"imm_return", EventKind::ImmutableReturn, true},
    {"mut_return", EventKind::MutableReturn, true},
    {"read_fn", EventKind::ReadByFunction, true},
    {"write_fn", EventKind::MutateByFunction, true},
    {"acquire", EventKind::Acquire, false},
    {"scope_end", EventKind::GoOutOfScope, false},
}};

const VerbInfo* find_verb(std::string_view word) {
  auto it = std::find_if(kVerbs.begin(), kVerbs.end(),
                         [&](const VerbInfo& v) { return v.verb == word; });
  return it == kVerbs.end() ? nullptr : &*it;
}

struct KindKeyword {
  std::string_view keyword;
  RapKind kind;
};

constexpr std::array<KindKeyword, 4> kKeywords{{
    {"owner", RapKind::Owner},
    {"mut_ref", RapKind::MutableReference},
    {"imm_ref", RapKind::ImmutableReference},
    {"fn", RapKind::Function},
}};

std::string_view keyword_for(RapKind kind) {
  for (const auto& k : kKeywords)
    if (k.kind == kind) return k.keyword;
  return "?";
}

bool is_space(char c) { return c == ' ' || c == '\t'; }
bool is_word(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Cursor over one statement line.
class Cursor {
 public:
  Cursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }
  int column() const { return static_cast<int>(pos_) + 1; }
  int line() const { return line_; }

  std::string_view word() {
    auto start = pos_;
    while (pos_ < text_.size() && is_word(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string_view name() {
    auto start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_space(c) || c == '{' || c == '}' || c == ',' || starts_with("->")) break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view token, std::string_view what) {
    if (!starts_with(token)) fail(fmt::format("expected {}", what));
    pos_ += token.size();
  }

  [[noreturn]] void fail(std::string detail) const {
    throw ParseError(ParseError::Kind::Syntax, line_, column(), std::move(detail));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

struct PendingEvent {
  ExternalEvent event;
  int statement_line;
};

class Parser {
 public:
  ParsedSpec run(std::string_view text) {
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
      ++line_no;
      statement(strip(raw), line_no);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }

    for (const auto& pending : events_) {
      try {
        builder_.append_external_event(pending.event, pending.event.line);
      } catch (const ModelError& err) {
        throw ParseError(ParseError::Kind::Invalid, pending.statement_line, 0, err.what());
      }
    }
    ParsedSpec out;
    out.log = builder_.finalize();
    out.declarations = out.log.declarations();
    return out;
  }

 private:
  static std::string_view strip(std::string_view raw) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);
    return raw;
  }

  void statement(std::string_view text, int line_no) {
    Cursor cur(text, line_no);
    cur.skip_ws();
    if (cur.at_end()) return;
    if (cur.peek() >= '0' && cur.peek() <= '9') {
      event(cur);
    } else {
      declaration(cur);
    }
  }

  void declaration(Cursor& cur) {
    auto kw_col = cur.column();
    auto kw = cur.word();
    auto it = std::find_if(kKeywords.begin(), kKeywords.end(),
                           [&](const KindKeyword& k) { return k.keyword == kw; });
    if (it == kKeywords.end()) {
      throw ParseError(ParseError::Kind::Syntax, cur.line(), kw_col,
                       "expected a declaration keyword (owner, mut_ref, imm_ref, fn) or a line number");
    }
    cur.skip_ws();
    auto name_col = cur.column();
    std::string name(cur.name());
    if (name.empty()) cur.fail("expected a name");

    bool is_mut = false;
    LifetimeTrait trait = LifetimeTrait::None;
    cur.skip_ws();
    if (cur.peek() == '{') {
      cur.expect("{", "'{'");
      bool seen_mut = false, seen_lifetime = false;
      for (;;) {
        cur.skip_ws();
        auto key_col = cur.column();
        auto key = cur.word();
        cur.skip_ws();
        cur.expect(":", "':'");
        cur.skip_ws();
        auto value_col = cur.column();
        auto value = cur.word();
        if (key == "mut") {
          if (seen_mut) throw ParseError(ParseError::Kind::Syntax, cur.line(), key_col, "duplicate attribute 'mut'");
          seen_mut = true;
          if (value == "true") is_mut = true;
          else if (value == "false") is_mut = false;
          else throw ParseError(ParseError::Kind::Syntax, cur.line(), value_col, "expected true or false");
        } else if (key == "lifetime") {
          if (seen_lifetime) throw ParseError(ParseError::Kind::Syntax, cur.line(), key_col, "duplicate attribute 'lifetime'");
          seen_lifetime = true;
          if (value == "none") trait = LifetimeTrait::None;
          else if (value == "move") trait = LifetimeTrait::Move;
          else if (value == "copy") trait = LifetimeTrait::Copy;
          else throw ParseError(ParseError::Kind::Syntax, cur.line(), value_col, "expected none, move or copy");
        } else {
          throw ParseError(ParseError::Kind::Syntax, cur.line(), key_col, "expected attribute 'mut' or 'lifetime'");
        }
        cur.skip_ws();
        if (cur.peek() == ',') {
          cur.expect(",", "','");
          continue;
        }
        cur.expect("}", "',' or '}'");
        break;
      }
      cur.skip_ws();
    }
    if (!cur.at_end()) cur.fail("unexpected text after declaration");

    if (names_.contains(name)) {
      throw ParseError(ParseError::Kind::DuplicateDeclaration, cur.line(), name_col,
                       fmt::format("'{}' is already declared", name), name);
    }
    Hash hash{static_cast<std::uint32_t>(names_.size() + 1)};
    try {
      builder_.declare(it->kind, hash, name, is_mut, trait);
    } catch (const ModelError& err) {
      throw ParseError(ParseError::Kind::Invalid, cur.line(), name_col, err.what(), name);
    }
    names_.emplace(std::move(name), hash);
  }

  void event(Cursor& cur) {
    auto num_col = cur.column();
    auto digits = cur.word();
    int line = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), line);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw ParseError(ParseError::Kind::Syntax, cur.line(), num_col, "expected a line number");
    }
    if (line < 1) throw ParseError(ParseError::Kind::Syntax, cur.line(), num_col, "line numbers start at 1");
    cur.skip_ws();
    cur.expect(":", "':' after line number");
    cur.skip_ws();
    auto verb_col = cur.column();
    const VerbInfo* verb = find_verb(cur.word());
    if (!verb) {
      throw ParseError(ParseError::Kind::Syntax, cur.line(), verb_col,
                       "expected an event verb (move, copy, imm_borrow, mut_borrow, imm_return, "
                       "mut_return, read_fn, write_fn, acquire, scope_end)");
    }
    cur.skip_ws();
    auto first_col = cur.column();
    std::string first(cur.name());
    if (first.empty()) cur.fail("expected a name");
    std::string second;
    int second_col = 0;
    cur.skip_ws();
    if (verb->binary) {
      cur.expect("->", "'->'");
      cur.skip_ws();
      second_col = cur.column();
      second = cur.name();
      if (second.empty()) cur.fail("expected a name");
      cur.skip_ws();
    }
    if (!cur.at_end()) cur.fail("unexpected text after event");

    ExternalEvent e;
    e.kind = verb->kind;
    e.line = line;
    Hash a = lookup(first, cur.line(), first_col);
    if (verb->binary) {
      e.from = a;
      e.to = lookup(second, cur.line(), second_col);
    } else if (verb->kind == EventKind::Acquire) {
      e.to = a;
    } else {
      e.from = a;
    }
    events_.push_back({e, cur.line()});
  }

  Hash lookup(const std::string& name, int line, int column) const {
    auto it = names_.find(name);
    if (it == names_.end()) {
      throw ParseError(ParseError::Kind::UnknownName, line, column,
                       fmt::format("unknown name '{}'", name), name);
    }
    return it->second;
  }

  EventLogBuilder builder_;
  std::map<std::string, Hash, std::less<>> names_;
  std::vector<PendingEvent> events_;
};

}  // namespace

ParsedSpec parse_spec(std::string_view text) { return Parser{}.run(text); }

std::string_view verb_for(EventKind kind) {
  for (const auto& v : kVerbs)
    if (v.kind == kind) return v.verb;
  return "?";
}

std::string print_spec(const std::vector<ResourceAccessPoint>& declarations, const EventLog& log) {
  std::vector<const ResourceAccessPoint*> sorted;
  sorted.reserve(declarations.size());
  for (const auto& d : declarations) sorted.push_back(&d);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->hash < b->hash; });

  std::map<Hash, std::string_view> names;
  for (const auto* d : sorted) names.emplace(d->hash, d->name);
  auto name = [&](const std::optional<Hash>& h) -> std::string_view {
    auto it = names.find(*h);
    return it == names.end() ? std::string_view(log.name_of(*h)) : it->second;
  };

  std::string out;
  for (const auto* d : sorted) {
    out += fmt::format("{} {}", keyword_for(d->kind), d->name);
    std::vector<std::string> attrs;
    if (d->is_mut) attrs.emplace_back("mut: true");
    if (d->lifetime_trait != LifetimeTrait::None) {
      attrs.push_back(fmt::format("lifetime: {}", to_string(d->lifetime_trait)));
    }
    if (!attrs.empty()) out += fmt::format(" {{ {} }}", fmt::join(attrs, ", "));
    out += '\n';
  }
  for (const auto& e : log) {
    out += fmt::format("{}: {} ", e.line, verb_for(e.kind));
    if (e.kind == EventKind::Acquire) {
      out += name(e.to);
    } else if (e.kind == EventKind::GoOutOfScope) {
      out += name(e.from);
    } else {
      out += fmt::format("{} -> {}", name(e.from), name(e.to));
    }
    out += '\n';
  }
  return out;
}

}  // namespace ownviz::dsl
