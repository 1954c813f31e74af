#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ownviz/event_model.hpp"

namespace ownviz {

// Ownership and borrowing rules checked by validate().
enum class Rule : std::uint8_t {
  R1,  // use of an owner after its resource moved out
  R2,  // mutable borrow while another borrow is live
  R3,  // immutable borrow while a mutable borrow is live
  R4,  // owner's resource moved, overwritten or dropped while borrowed
  R5,  // return with no matching live borrow
  R6,  // participant goes out of scope twice
  R7,  // participant used after going out of scope
  R8,  // move/copy not licensed by the owner's lifetime trait
  R9,  // resource accessed through its owner while mutably borrowed
  R10, // reference used while it holds no live borrow
};

std::string_view to_string(Rule rule);

struct Violation {
  Rule rule;
  int line;
  std::vector<Hash> participants;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Resource state of one owner. `owner` is set while the owner variable
// holds a resource.
struct ResourceState {
  std::optional<Hash> owner;
  std::set<Hash> live_immutable_borrows;
  std::optional<Hash> live_mutable_borrow;
  bool moved_out = false;

  bool borrowed() const { return live_mutable_borrow || !live_immutable_borrows.empty(); }
  bool operator==(const ResourceState&) const = default;
};

using StateMap = std::map<Hash, ResourceState>;

// Replays the log in order and reports every rule violation. Violating
// events still apply their effect so that later events are checked against
// the state the author intended.
ValidationReport validate(const EventLog& log);

class InvalidOnViolatingLog : public std::logic_error {
 public:
  InvalidOnViolatingLog() : std::logic_error("resource state requested for a log that fails validation") {}
};

// State of every owner after applying all events with event.line <= line.
StateMap resource_state_at(const EventLog& log, int line);

// Incremental replay used by validate, resource_state_at and the timeline
// compiler. Exposed so callers can walk the log line by line.
class StateReplay {
 public:
  explicit StateReplay(const EventLog& log);

  // Applies one event, appending any violations to `out` when given.
  void apply(const ExternalEvent& e, std::vector<Violation>* out = nullptr);

  const StateMap& owners() const { return owners_; }
  bool out_of_scope(Hash h) const { return out_of_scope_.contains(h); }
  // The owner whose resource `ref` currently borrows, if any.
  std::optional<Hash> borrowed_from(Hash ref) const;

 private:
  void flag(std::vector<Violation>* out, Rule rule, int line, std::vector<Hash> who, std::string msg) const;
  void use(std::vector<Violation>* out, const ExternalEvent& e, Hash h) const;
  void overwrite(std::vector<Violation>* out, const ExternalEvent& e, Hash owner);

  const EventLog* log_;
  StateMap owners_;
  std::set<Hash> out_of_scope_;
};

// "RULE:LINE:NAMES:MESSAGE", one violation per line.
std::string format_diagnostic(const Violation& v, const EventLog& log);

}  // namespace ownviz
