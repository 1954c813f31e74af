#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ownviz/event_model.hpp"

namespace ownviz {

enum class ElementKind : std::uint8_t {
  Segment,
  AccessCurve,
  Dot,
  FunctionReadMark,
  Arrow,
  FunctionLabel,  // call-site label for a function endpoint of an arrow
};

enum class Style : std::uint8_t { None, Solid, Hollow };

std::string_view to_string(ElementKind kind);
std::string_view to_string(Style style);

// One visual element of a column. Geometry-free: positions are source lines.
struct TimelineElement {
  ElementKind kind = ElementKind::Dot;
  Hash column;
  int line_start = 0;
  int line_end = 0;
  Style style = Style::None;
  std::string hover;
  // Arrows: the other endpoint. Function labels and read marks: the function.
  std::optional<Hash> counterpart;
  // Arrows and labels: true when the arrow points into `column`.
  bool incoming = false;
  // Arrows and labels: position among the arrows drawn on the same line.
  int stack = 0;

  bool operator==(const TimelineElement&) const = default;
};

struct Column {
  ResourceAccessPoint participant;
  std::vector<TimelineElement> elements;

  bool operator==(const Column&) const = default;
};

struct TimelinePanel {
  std::vector<Column> columns;  // declaration order, functions excluded
  int last_line = 0;            // line range is 1..last_line

  const Column* find(Hash h) const;
  bool operator==(const TimelinePanel&) const = default;
};

struct CompileOptions {
  // Accept logs that fail validation (warnings-only mode).
  bool lenient = false;
  // Word write_fn marks as "writes through" instead of "reads from".
  bool write_fn_says_writes = false;
};

class CompileOnInvalidLog : public std::runtime_error {
 public:
  CompileOnInvalidLog() : std::runtime_error("cannot compile timelines for a log that fails validation") {}
};

TimelinePanel compile_timelines(const EventLog& log, const CompileOptions& options = {});

struct Drop {
  Hash hash;
  int line = 0;
  auto operator<=>(const Drop&) const = default;
};

// Owners that still hold a resource when they go out of scope.
std::set<Drop> infer_drops(const EventLog& log);

enum class HoverKind : std::uint8_t {
  FunctionLabel,               // F
  Acquire,                     // X acquires ownership of a resource
  OwnerReassignable,           // X is the owner ... can be reassigned.
  OwnerFixed,                  // X is the owner ... cannot be reassigned.
  ImmutableRefReassignable,
  ImmutableRefFixed,
  MutableRefReassignable,
  MutableRefFixed,
  MovedOut,                    // X's resource is moved
  MoveArrow,                   // Move from X to Y
  CopiedFrom,                  // X's resource is copied
  CopyArrow,                   // Copy from X to Y
  InitializedByCopy,           // Y is initialized by copy from X  (subject Y, other X)
  ImmutablyBorrowed,           // X's resource is immutably borrowed
  ImmutableBorrowArrow,        // Immutable borrow from X to Y
  ImmutablyBorrows,            // Y immutably borrows a resource
  ImmutableCurve,              // Cannot mutate *Y
  MutablyBorrowed,             // X's resource is mutably borrowed
  MutableBorrowArrow,          // mutable borrow from X to Y
  MutablyBorrows,              // Y mutably borrows a resource
  MutableCurve,                // Can mutate the resource *Y
  FunctionReads,               // F reads from Y  (subject F, other Y)
  FunctionWrites,              // F writes through Y
  ImmutableReturnArrow,        // Return immutably borrowed resource from Y to X
  MutableReturnArrow,          // Return mutably borrowed resource from Y to X
  NoLongerImmutablyBorrowed,   // X's resource is no longer immutably borrowed
  NoLongerMutablyBorrowed,     // X's resource is no longer mutably borrowed
  BorrowEnds,                  // Y no longer borrows a resource
  ScopeEndDropped,             // X goes out of scope. Its resource is dropped.
  ScopeEndNotDropped,          // X goes out of scope. No resource is dropped.
};

struct HoverContext {
  HoverKind kind;
  std::string subject;
  std::string other;  // second name for two-party messages
};

class UnknownContext : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string hover_message(const HoverContext& context);

}  // namespace ownviz
