#include "ownviz/event_model.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace ownviz {

std::string_view to_string(RapKind kind) {
  switch (kind) {
    case RapKind::Owner: return "owner";
    case RapKind::MutableReference: return "mutable reference";
    case RapKind::ImmutableReference: return "immutable reference";
    case RapKind::Function: return "function";
  }
  return "?";
}

std::string_view to_string(LifetimeTrait trait) {
  switch (trait) {
    case LifetimeTrait::None: return "none";
    case LifetimeTrait::Move: return "move";
    case LifetimeTrait::Copy: return "copy";
  }
  return "?";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Move: return "Move";
    case EventKind::Copy: return "Copy";
    case EventKind::ImmutableBorrow: return "ImmutableBorrow";
    case EventKind::MutableBorrow: return "MutableBorrow";
    case EventKind::ImmutableReturn: return "ImmutableReturn";
    case EventKind::MutableReturn: return "MutableReturn";
    case EventKind::ReadByFunction: return "ReadByFunction";
    case EventKind::MutateByFunction: return "MutateByFunction";
    case EventKind::Acquire: return "Acquire";
    case EventKind::GoOutOfScope: return "GoOutOfScope";
  }
  return "?";
}

DuplicateHash::DuplicateHash(Hash h)
    : ModelError(fmt::format("hash {} is already declared", h.value)), hash(h) {}

UndeclaredParticipant::UndeclaredParticipant(Hash h)
    : ModelError(fmt::format("hash {} is not declared", h.value)), hash(h) {}

ResourceAccessPoint declare_rap(RapKind kind, Hash hash, std::string name, bool is_mut,
                                LifetimeTrait lifetime_trait) {
  if (hash.value == 0) {
    throw InvalidFieldForKind("participant hash must be >= 1 (0 is reserved for function data)");
  }
  if (name.empty()) throw InvalidFieldForKind("participant name must be non-empty");
  if (kind == RapKind::Function) {
    if (is_mut) throw InvalidFieldForKind(fmt::format("function '{}' cannot be mut", name));
    if (lifetime_trait != LifetimeTrait::None) {
      throw InvalidFieldForKind(fmt::format("function '{}' cannot carry a lifetime trait", name));
    }
  }
  return ResourceAccessPoint{kind, hash, std::move(name), is_mut, lifetime_trait};
}

const ResourceAccessPoint* EventLog::find(Hash h) const {
  auto it = index_.find(h);
  return it == index_.end() ? nullptr : &declarations_[it->second];
}

const ResourceAccessPoint& EventLog::at(Hash h) const {
  if (const auto* rap = find(h)) return *rap;
  throw UndeclaredParticipant(h);
}

namespace {

const ResourceAccessPoint& resolve(const EventLog& decls, const std::optional<Hash>& h) {
  return decls.at(*h);
}

void require(bool cond, const ExternalEvent& e, std::string_view what) {
  if (!cond) throw MalformedEvent(fmt::format("{} at line {}: {}", to_string(e.kind), e.line, what));
}

}  // namespace

void check_event(const EventLog& decls, const ExternalEvent& e) {
  require(e.line >= 1, e, "line must be >= 1");

  const bool unary_to = e.kind == EventKind::Acquire;
  const bool unary_from = e.kind == EventKind::GoOutOfScope;
  if (unary_to) {
    require(e.to.has_value() && !e.from.has_value(), e, "needs a target and no source");
  } else if (unary_from) {
    require(e.from.has_value() && !e.to.has_value(), e, "needs exactly one participant");
  } else {
    require(e.from.has_value() && e.to.has_value(), e, "needs both a source and a target");
  }

  // Resolve in from/to order so the first undeclared hash is reported.
  const ResourceAccessPoint* from = e.from ? &resolve(decls, e.from) : nullptr;
  const ResourceAccessPoint* to = e.to ? &resolve(decls, e.to) : nullptr;

  switch (e.kind) {
    case EventKind::Move:
    case EventKind::Copy:
      require(from->hash != to->hash, e, "source and target must differ");
      require(!(from->is_function() && to->is_function()), e, "cannot transfer between two functions");
      require(!from->is_reference() && !to->is_reference(), e,
              "endpoints must be owners or functions");
      break;
    case EventKind::ImmutableBorrow:
      require(from->is_owner(), e, "borrow source must be an owner");
      require(to->kind == RapKind::ImmutableReference, e, "target must be an immutable reference");
      break;
    case EventKind::MutableBorrow:
      require(from->is_owner(), e, "borrow source must be an owner");
      require(to->kind == RapKind::MutableReference, e, "target must be a mutable reference");
      break;
    case EventKind::ImmutableReturn:
      require(from->kind == RapKind::ImmutableReference, e, "source must be an immutable reference");
      require(to->is_owner(), e, "return target must be an owner");
      break;
    case EventKind::MutableReturn:
      require(from->kind == RapKind::MutableReference, e, "source must be a mutable reference");
      require(to->is_owner(), e, "return target must be an owner");
      break;
    case EventKind::ReadByFunction:
      require(from->is_reference(), e, "source must be a reference");
      require(to->is_function(), e, "target must be a function");
      break;
    case EventKind::MutateByFunction:
      require(from->kind == RapKind::MutableReference, e, "source must be a mutable reference");
      require(to->is_function(), e, "target must be a function");
      break;
    case EventKind::Acquire:
      require(to->is_owner(), e, "only owners acquire resources");
      break;
    case EventKind::GoOutOfScope:
      require(!from->is_function(), e, "functions do not go out of scope");
      break;
  }
}

EventLogBuilder::EventLogBuilder(const EventLog& log) : log_(log) {}

const ResourceAccessPoint& EventLogBuilder::declare(ResourceAccessPoint rap) {
  // Re-run field checks; callers may hand-build a struct.
  rap = declare_rap(rap.kind, rap.hash, std::move(rap.name), rap.is_mut, rap.lifetime_trait);
  if (log_.find(rap.hash)) throw DuplicateHash(rap.hash);
  log_.index_.emplace(rap.hash, log_.declarations_.size());
  log_.declarations_.push_back(std::move(rap));
  return log_.declarations_.back();
}

EventLogBuilder& EventLogBuilder::append_external_event(ExternalEvent event, int line) {
  event.line = line;
  check_event(log_, event);
  auto pos = std::upper_bound(log_.events_.begin(), log_.events_.end(), line,
                              [](int l, const ExternalEvent& e) { return l < e.line; });
  log_.events_.insert(pos, std::move(event));
  log_.last_line_ = std::max(log_.last_line_, line);
  return *this;
}

EventLog EventLogBuilder::finalize() const { return ownviz::finalize(log_); }

EventLog finalize(const EventLog& log) {
  if (log.declarations_.empty() && !log.events_.empty()) throw EmptyDeclarations();
  EventLog out = log;
  std::stable_sort(out.events_.begin(), out.events_.end(),
                   [](const ExternalEvent& a, const ExternalEvent& b) { return a.line < b.line; });
  out.last_line_ = 0;
  for (const auto& e : out.events_) {
    check_event(out, e);
    out.last_line_ = std::max(out.last_line_, e.line);
  }
  return out;
}

}  // namespace ownviz
