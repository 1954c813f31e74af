#include "ownviz/borrow_validator.hpp"

#include <fmt/format.h>

namespace ownviz {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::R4: return "R4";
    case Rule::R5: return "R5";
    case Rule::R6: return "R6";
    case Rule::R7: return "R7";
    case Rule::R8: return "R8";
    case Rule::R9: return "R9";
    case Rule::R10: return "R10";
  }
  return "R?";
}

StateReplay::StateReplay(const EventLog& log) : log_(&log) {
  for (const auto& rap : log.declarations()) {
    if (rap.is_owner()) owners_.emplace(rap.hash, ResourceState{});
  }
}

std::optional<Hash> StateReplay::borrowed_from(Hash ref) const {
  for (const auto& [owner, st] : owners_) {
    if (st.live_mutable_borrow == ref || st.live_immutable_borrows.contains(ref)) return owner;
  }
  return std::nullopt;
}

void StateReplay::flag(std::vector<Violation>* out, Rule rule, int line, std::vector<Hash> who,
                       std::string msg) const {
  if (out) out->push_back(Violation{rule, line, std::move(who), std::move(msg)});
}

void StateReplay::use(std::vector<Violation>* out, const ExternalEvent& e, Hash h) const {
  if (out_of_scope(h)) {
    flag(out, Rule::R7, e.line, {h}, fmt::format("{} is used after going out of scope", log_->name_of(h)));
  }
}

void StateReplay::overwrite(std::vector<Violation>* out, const ExternalEvent& e, Hash owner) {
  auto& st = owners_.at(owner);
  if (st.owner && st.borrowed()) {
    flag(out, Rule::R4, e.line, {owner},
         fmt::format("{}'s resource is overwritten while borrowed", log_->name_of(owner)));
  }
  st.owner = owner;
  st.moved_out = false;
}

void StateReplay::apply(const ExternalEvent& e, std::vector<Violation>* out) {
  const auto& name = [this](Hash h) -> const std::string& { return log_->name_of(h); };

  switch (e.kind) {
    case EventKind::Move:
    case EventKind::Copy: {
      const bool is_move = e.kind == EventKind::Move;
      const auto& from = log_->at(*e.from);
      const auto& to = log_->at(*e.to);
      use(out, e, from.hash);
      use(out, e, to.hash);
      if (from.is_owner()) {
        auto& st = owners_.at(from.hash);
        if (st.moved_out) {
          flag(out, Rule::R1, e.line, {from.hash},
               fmt::format("{} is used after its resource was moved out", from.name));
        }
        const auto licensed = is_move ? LifetimeTrait::Move : LifetimeTrait::Copy;
        if (from.lifetime_trait != licensed) {
          flag(out, Rule::R8, e.line, {from.hash},
               fmt::format("{} is {} but its lifetime trait is {}", from.name,
                           is_move ? "moved" : "copied", to_string(from.lifetime_trait)));
        }
        if (is_move) {
          if (st.borrowed()) {
            flag(out, Rule::R4, e.line, {from.hash},
                 fmt::format("{}'s resource is moved while borrowed", from.name));
          }
          st.owner.reset();
          st.moved_out = true;
        } else if (st.live_mutable_borrow) {
          flag(out, Rule::R9, e.line, {from.hash, *st.live_mutable_borrow},
               fmt::format("{}'s resource is accessed while mutably borrowed by {}", from.name,
                           name(*st.live_mutable_borrow)));
        }
      }
      if (to.is_owner()) overwrite(out, e, to.hash);
      break;
    }
    case EventKind::ImmutableBorrow:
    case EventKind::MutableBorrow: {
      const Hash owner = *e.from, ref = *e.to;
      use(out, e, owner);
      use(out, e, ref);
      auto& st = owners_.at(owner);
      if (st.moved_out) {
        flag(out, Rule::R1, e.line, {owner},
             fmt::format("{} is used after its resource was moved out", name(owner)));
      }
      if (e.kind == EventKind::ImmutableBorrow) {
        if (st.live_mutable_borrow) {
          flag(out, Rule::R3, e.line, {owner, ref},
               fmt::format("immutable borrow of {}'s resource by {} while it is mutably borrowed",
                           name(owner), name(ref)));
        }
        st.live_immutable_borrows.insert(ref);
      } else {
        if (st.borrowed()) {
          flag(out, Rule::R2, e.line, {owner, ref},
               fmt::format("mutable borrow of {}'s resource by {} while another borrow is live",
                           name(owner), name(ref)));
        }
        st.live_mutable_borrow = ref;
      }
      break;
    }
    case EventKind::ImmutableReturn:
    case EventKind::MutableReturn: {
      const Hash ref = *e.from, owner = *e.to;
      use(out, e, ref);
      use(out, e, owner);
      auto& st = owners_.at(owner);
      const bool live = e.kind == EventKind::ImmutableReturn ? st.live_immutable_borrows.contains(ref)
                                                             : st.live_mutable_borrow == ref;
      if (!live) {
        flag(out, Rule::R5, e.line, {ref, owner},
             fmt::format("{} returns a borrow of {}'s resource that is not live", name(ref), name(owner)));
      } else if (e.kind == EventKind::ImmutableReturn) {
        st.live_immutable_borrows.erase(ref);
      } else {
        st.live_mutable_borrow.reset();
      }
      break;
    }
    case EventKind::ReadByFunction:
    case EventKind::MutateByFunction: {
      const Hash ref = *e.from;
      use(out, e, ref);
      if (!borrowed_from(ref)) {
        flag(out, Rule::R10, e.line, {ref},
             fmt::format("{} is used by {} without a live borrow", name(ref), name(*e.to)));
      }
      break;
    }
    case EventKind::Acquire:
      use(out, e, *e.to);
      overwrite(out, e, *e.to);
      break;
    case EventKind::GoOutOfScope: {
      const Hash p = *e.from;
      if (out_of_scope(p)) {
        flag(out, Rule::R6, e.line, {p}, fmt::format("{} goes out of scope twice", name(p)));
        break;
      }
      const auto& rap = log_->at(p);
      if (rap.is_owner()) {
        auto& st = owners_.at(p);
        if (st.borrowed()) {
          flag(out, Rule::R4, e.line, {p},
               fmt::format("{} goes out of scope while its resource is borrowed", rap.name));
        }
        st.owner.reset();
      } else {
        // A reference leaving scope ends whatever borrow it still holds.
        for (auto& [owner, st] : owners_) {
          st.live_immutable_borrows.erase(p);
          if (st.live_mutable_borrow == p) st.live_mutable_borrow.reset();
        }
      }
      out_of_scope_.insert(p);
      break;
    }
  }
}

ValidationReport validate(const EventLog& log) {
  ValidationReport report;
  StateReplay replay(log);
  for (const auto& e : log) replay.apply(e, &report.violations);
  return report;
}

StateMap resource_state_at(const EventLog& log, int line) {
  if (!validate(log).ok()) throw InvalidOnViolatingLog();
  StateReplay replay(log);
  for (const auto& e : log) {
    if (e.line > line) break;
    replay.apply(e);
  }
  return replay.owners();
}

std::string format_diagnostic(const Violation& v, const EventLog& log) {
  std::vector<std::string_view> names;
  for (Hash h : v.participants) names.emplace_back(log.name_of(h));
  return fmt::format("{}:{}:{}:{}", to_string(v.rule), v.line, fmt::join(names, ","), v.message);
}

}  // namespace ownviz
