#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ownviz {

// Identity of a participant. Functions use the reserved value 0 as their
// in-source data hash; declared participants always carry a hash >= 1.
struct Hash {
  std::uint32_t value = 0;

  constexpr Hash() = default;
  constexpr explicit Hash(std::uint32_t v) : value(v) {}
  auto operator<=>(const Hash&) const = default;
};

inline constexpr Hash kFunctionDataHash{0};

struct HashHasher {
  std::size_t operator()(Hash h) const noexcept { return std::hash<std::uint32_t>{}(h.value); }
};

enum class RapKind : std::uint8_t { Owner, MutableReference, ImmutableReference, Function };
enum class LifetimeTrait : std::uint8_t { None, Move, Copy };

std::string_view to_string(RapKind kind);
std::string_view to_string(LifetimeTrait trait);

// A resource access point: anything that takes part in a memory event.
struct ResourceAccessPoint {
  RapKind kind = RapKind::Owner;
  Hash hash;
  std::string name;
  bool is_mut = false;
  LifetimeTrait lifetime_trait = LifetimeTrait::None;

  bool is_function() const { return kind == RapKind::Function; }
  bool is_owner() const { return kind == RapKind::Owner; }
  bool is_reference() const {
    return kind == RapKind::MutableReference || kind == RapKind::ImmutableReference;
  }

  bool operator==(const ResourceAccessPoint&) const = default;
};

enum class EventKind : std::uint8_t {
  Move,
  Copy,
  ImmutableBorrow,
  MutableBorrow,
  ImmutableReturn,
  MutableReturn,
  ReadByFunction,
  MutateByFunction,
  Acquire,
  GoOutOfScope,
};

std::string_view to_string(EventKind kind);

// One teacher-specified memory event.
//
// Acquire uses only `to`; GoOutOfScope uses only `from` (the participant
// leaving scope). Every other variant uses both.
struct ExternalEvent {
  EventKind kind = EventKind::Move;
  std::optional<Hash> from;
  std::optional<Hash> to;
  int line = 0;

  static ExternalEvent move(Hash from, Hash to) { return {EventKind::Move, from, to, 0}; }
  static ExternalEvent copy(Hash from, Hash to) { return {EventKind::Copy, from, to, 0}; }
  static ExternalEvent immutable_borrow(Hash owner, Hash ref) {
    return {EventKind::ImmutableBorrow, owner, ref, 0};
  }
  static ExternalEvent mutable_borrow(Hash owner, Hash ref) {
    return {EventKind::MutableBorrow, owner, ref, 0};
  }
  static ExternalEvent immutable_return(Hash ref, Hash owner) {
    return {EventKind::ImmutableReturn, ref, owner, 0};
  }
  static ExternalEvent mutable_return(Hash ref, Hash owner) {
    return {EventKind::MutableReturn, ref, owner, 0};
  }
  static ExternalEvent read_by_function(Hash ref, Hash fn) {
    return {EventKind::ReadByFunction, ref, fn, 0};
  }
  static ExternalEvent mutate_by_function(Hash ref, Hash fn) {
    return {EventKind::MutateByFunction, ref, fn, 0};
  }
  static ExternalEvent acquire(Hash owner) { return {EventKind::Acquire, std::nullopt, owner, 0}; }
  static ExternalEvent go_out_of_scope(Hash p) {
    return {EventKind::GoOutOfScope, p, std::nullopt, 0};
  }

  bool operator==(const ExternalEvent&) const = default;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateHash : public ModelError {
 public:
  explicit DuplicateHash(Hash h);
  Hash hash;
};

class InvalidFieldForKind : public ModelError {
 public:
  using ModelError::ModelError;
};

class UndeclaredParticipant : public ModelError {
 public:
  explicit UndeclaredParticipant(Hash h);
  Hash hash;
};

class MalformedEvent : public ModelError {
 public:
  using ModelError::ModelError;
};

class EmptyDeclarations : public ModelError {
 public:
  EmptyDeclarations() : ModelError("events present without any declarations") {}
};

// Builds a well-formed participant. Does not register it anywhere.
ResourceAccessPoint declare_rap(RapKind kind, Hash hash, std::string name, bool is_mut = false,
                                LifetimeTrait lifetime_trait = LifetimeTrait::None);

class EventLogBuilder;

// Finalized, immutable log: declarations in declaration order and events
// sorted by (line, insertion order).
class EventLog {
 public:
  EventLog() = default;

  const std::vector<ResourceAccessPoint>& declarations() const { return declarations_; }
  const std::vector<ExternalEvent>& events() const { return events_; }
  int last_line() const { return last_line_; }
  bool empty() const { return events_.empty(); }

  const ResourceAccessPoint* find(Hash h) const;
  const ResourceAccessPoint& at(Hash h) const;
  const std::string& name_of(Hash h) const { return at(h).name; }

  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

  bool operator==(const EventLog& other) const {
    return declarations_ == other.declarations_ && events_ == other.events_ &&
           last_line_ == other.last_line_;
  }

 private:
  friend class EventLogBuilder;
  friend EventLog finalize(const EventLog& log);

  std::vector<ResourceAccessPoint> declarations_;
  std::unordered_map<Hash, std::size_t, HashHasher> index_;
  std::vector<ExternalEvent> events_;
  int last_line_ = 0;
};

// Mutable accumulator for declarations and events.
class EventLogBuilder {
 public:
  EventLogBuilder() = default;
  explicit EventLogBuilder(const EventLog& log);

  // Registers a participant. Throws DuplicateHash.
  const ResourceAccessPoint& declare(ResourceAccessPoint rap);
  const ResourceAccessPoint& declare(RapKind kind, Hash hash, std::string name, bool is_mut = false,
                                     LifetimeTrait lifetime_trait = LifetimeTrait::None) {
    return declare(declare_rap(kind, hash, std::move(name), is_mut, lifetime_trait));
  }

  // Inserts the event at its sorted position, after any existing events on
  // the same line. Throws UndeclaredParticipant or MalformedEvent.
  EventLogBuilder& append_external_event(ExternalEvent event, int line);

  const ResourceAccessPoint* find(Hash h) const { return log_.find(h); }
  const std::vector<ExternalEvent>& events() const { return log_.events_; }

  EventLog finalize() const;

 private:
  EventLog log_;
};

// Re-verifies referential integrity and recomputes last_line.
EventLog finalize(const EventLog& log);
inline EventLog finalize(const EventLogBuilder& builder) { return builder.finalize(); }

// Structural checks for one event against a set of declarations. Throws
// UndeclaredParticipant or MalformedEvent.
void check_event(const EventLog& declarations, const ExternalEvent& event);

}  // namespace ownviz
