#pragma once

// Text format for event specifications (".evspec").
//
//   # comment
//   owner s { mut: true, lifetime: move }
//   imm_ref r1
//   mut_ref r3
//   fn String::from()
//   2: move String::from() -> s
//   7: scope_end s
//
// Hashes are assigned 1..N in declaration order.

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ownviz/event_model.hpp"

namespace ownviz::dsl {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownName, DuplicateDeclaration, Invalid };

  ParseError(Kind kind, int line, int column, std::string detail, std::string subject = {});

  Kind kind;
  int line;    // 1-based statement line in the document
  int column;  // 1-based; 0 when not meaningful
  std::string detail;
  std::string subject;  // offending name, when there is one
};

struct ParsedSpec {
  std::vector<ResourceAccessPoint> declarations;
  EventLog log;
};

// All-or-nothing: either returns a finalized log or throws ParseError.
ParsedSpec parse_spec(std::string_view text);

// Canonical form: declarations in hash order, then events in log order.
// LF line endings; attributes only when they differ from the defaults.
std::string print_spec(const std::vector<ResourceAccessPoint>& declarations, const EventLog& log);
inline std::string print_spec(const EventLog& log) { return print_spec(log.declarations(), log); }

std::string_view verb_for(EventKind kind);

}  // namespace ownviz::dsl
