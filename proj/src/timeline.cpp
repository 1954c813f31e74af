#include "ownviz/timeline.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "ownviz/borrow_validator.hpp"

namespace ownviz {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Segment: return "segment";
    case ElementKind::AccessCurve: return "curve";
    case ElementKind::Dot: return "dot";
    case ElementKind::FunctionReadMark: return "fn-mark";
    case ElementKind::Arrow: return "arrow";
    case ElementKind::FunctionLabel: return "fn-label";
  }
  return "?";
}

std::string_view to_string(Style style) {
  switch (style) {
    case Style::None: return "none";
    case Style::Solid: return "solid";
    case Style::Hollow: return "hollow";
  }
  return "?";
}

const Column* TimelinePanel::find(Hash h) const {
  auto it = std::find_if(columns.begin(), columns.end(),
                         [&](const Column& c) { return c.participant.hash == h; });
  return it == columns.end() ? nullptr : &*it;
}

std::string hover_message(const HoverContext& c) {
  const bool two_party = c.kind == HoverKind::MoveArrow || c.kind == HoverKind::CopyArrow ||
                         c.kind == HoverKind::InitializedByCopy ||
                         c.kind == HoverKind::ImmutableBorrowArrow ||
                         c.kind == HoverKind::MutableBorrowArrow || c.kind == HoverKind::FunctionReads ||
                         c.kind == HoverKind::FunctionWrites ||
                         c.kind == HoverKind::ImmutableReturnArrow ||
                         c.kind == HoverKind::MutableReturnArrow;
  if (c.subject.empty() || (two_party && c.other.empty())) {
    throw UnknownContext("hover context is missing a participant name");
  }
  const auto& x = c.subject;
  const auto& y = c.other;
  switch (c.kind) {
    case HoverKind::FunctionLabel: return x;
    case HoverKind::Acquire: return fmt::format("{} acquires ownership of a resource", x);
    case HoverKind::OwnerReassignable:
      return fmt::format("{} is the owner of the resource. The binding can be reassigned.", x);
    case HoverKind::OwnerFixed:
      return fmt::format("{} is the owner of the resource. The binding cannot be reassigned.", x);
    case HoverKind::ImmutableRefReassignable:
      return fmt::format("{} is an immutable reference. The binding can be reassigned.", x);
    case HoverKind::ImmutableRefFixed:
      return fmt::format("{} is an immutable reference. The binding cannot be reassigned.", x);
    case HoverKind::MutableRefReassignable:
      return fmt::format("{} is a mutable reference. The binding can be reassigned.", x);
    case HoverKind::MutableRefFixed:
      return fmt::format("{} is a mutable reference. The binding cannot be reassigned.", x);
    case HoverKind::MovedOut: return fmt::format("{}'s resource is moved", x);
    case HoverKind::MoveArrow: return fmt::format("Move from {} to {}", x, y);
    case HoverKind::CopiedFrom: return fmt::format("{}'s resource is copied", x);
    case HoverKind::CopyArrow: return fmt::format("Copy from {} to {}", x, y);
    case HoverKind::InitializedByCopy: return fmt::format("{} is initialized by copy from {}", x, y);
    case HoverKind::ImmutablyBorrowed: return fmt::format("{}'s resource is immutably borrowed", x);
    case HoverKind::ImmutableBorrowArrow: return fmt::format("Immutable borrow from {} to {}", x, y);
    case HoverKind::ImmutablyBorrows: return fmt::format("{} immutably borrows a resource", x);
    case HoverKind::ImmutableCurve: return fmt::format("Cannot mutate *{}", x);
    case HoverKind::MutablyBorrowed: return fmt::format("{}'s resource is mutably borrowed", x);
    case HoverKind::MutableBorrowArrow: return fmt::format("mutable borrow from {} to {}", x, y);
    case HoverKind::MutablyBorrows: return fmt::format("{} mutably borrows a resource", x);
    case HoverKind::MutableCurve: return fmt::format("Can mutate the resource *{}", x);
    case HoverKind::FunctionReads: return fmt::format("{} reads from {}", x, y);
    case HoverKind::FunctionWrites: return fmt::format("{} writes through {}", x, y);
    case HoverKind::ImmutableReturnArrow:
      return fmt::format("Return immutably borrowed resource from {} to {}", x, y);
    case HoverKind::MutableReturnArrow:
      return fmt::format("Return mutably borrowed resource from {} to {}", x, y);
    case HoverKind::NoLongerImmutablyBorrowed:
      return fmt::format("{}'s resource is no longer immutably borrowed", x);
    case HoverKind::NoLongerMutablyBorrowed:
      return fmt::format("{}'s resource is no longer mutably borrowed", x);
    case HoverKind::BorrowEnds: return fmt::format("{} no longer borrows a resource", x);
    case HoverKind::ScopeEndDropped: return fmt::format("{} goes out of scope. Its resource is dropped.", x);
    case HoverKind::ScopeEndNotDropped:
      return fmt::format("{} goes out of scope. No resource is dropped.", x);
  }
  throw UnknownContext("unknown hover kind");
}

namespace {

// Privilege a column holds between events: whether a segment is drawn and
// in which style.
Style privilege(const ResourceAccessPoint& rap, const StateReplay& replay) {
  if (replay.out_of_scope(rap.hash)) return Style::None;
  if (rap.is_owner()) {
    const auto& st = replay.owners().at(rap.hash);
    if (!st.owner || st.live_mutable_borrow) return Style::None;
    return rap.is_mut && st.live_immutable_borrows.empty() ? Style::Solid : Style::Hollow;
  }
  if (!replay.borrowed_from(rap.hash)) return Style::None;
  return rap.is_mut ? Style::Solid : Style::Hollow;
}

HoverKind segment_hover(const ResourceAccessPoint& rap, Style style) {
  const bool can = style == Style::Solid;
  switch (rap.kind) {
    case RapKind::ImmutableReference:
      return can ? HoverKind::ImmutableRefReassignable : HoverKind::ImmutableRefFixed;
    case RapKind::MutableReference:
      return can ? HoverKind::MutableRefReassignable : HoverKind::MutableRefFixed;
    default:
      return can ? HoverKind::OwnerReassignable : HoverKind::OwnerFixed;
  }
}

struct OpenCurve {
  int start;
  bool mutable_borrow;
};

class Compiler {
 public:
  Compiler(const EventLog& log, const CompileOptions& options)
      : log_(log), options_(options), replay_(log) {
    for (const auto& rap : log.declarations()) {
      if (rap.is_function()) continue;
      column_index_.emplace(rap.hash, panel_.columns.size());
      panel_.columns.push_back(Column{rap, {}});
    }
    panel_.last_line = log.last_line();
    privileges_.assign(panel_.columns.size(),
                       std::vector<Style>(static_cast<std::size_t>(log.last_line()) + 1, Style::None));
  }

  TimelinePanel run() {
    const auto& events = log_.events();
    std::size_t i = 0;
    for (int line = 1; line <= log_.last_line(); ++line) {
      dots_.clear();
      int arrows_on_line = 0;
      for (; i < events.size() && events[i].line == line; ++i) {
        event(events[i], arrows_on_line);
        replay_.apply(events[i]);
      }
      for (const auto& [col, hover] : dots_) {
        emit(col, ElementKind::Dot, line, line, Style::Solid, hover);
        dot_lines_[col].insert(line);
      }
      for (std::size_t c = 0; c < panel_.columns.size(); ++c) {
        privileges_[c][static_cast<std::size_t>(line)] = privilege(panel_.columns[c].participant, replay_);
      }
    }
    for (const auto& [ref, curve] : open_curves_) close_curve(ref, curve, log_.last_line());
    segments();

    for (auto& column : panel_.columns) {
      std::stable_sort(column.elements.begin(), column.elements.end(),
                       [](const TimelineElement& a, const TimelineElement& b) {
                         if (a.line_start != b.line_start) return a.line_start < b.line_start;
                         return a.kind < b.kind;
                       });
    }
    return std::move(panel_);
  }

 private:
  std::string hover(HoverKind kind, Hash subject, std::optional<Hash> other = std::nullopt) const {
    return hover_message({kind, log_.name_of(subject), other ? log_.name_of(*other) : std::string{}});
  }

  TimelineElement& emit(Hash column, ElementKind kind, int start, int end, Style style, std::string text) {
    auto& col = panel_.columns[column_index_.at(column)];
    TimelineElement el;
    el.kind = kind;
    el.column = column;
    el.line_start = start;
    el.line_end = end;
    el.style = style;
    el.hover = std::move(text);
    col.elements.push_back(std::move(el));
    return col.elements.back();
  }

  // Last event on a line wins the dot's hover.
  void dot(Hash h, std::string text) {
    if (!column_index_.contains(h)) return;
    dots_[h] = std::move(text);
  }

  void arrow(const ExternalEvent& e, HoverKind kind, int& stack) {
    const auto& from = log_.at(*e.from);
    const auto& to = log_.at(*e.to);
    const bool host_is_from = !from.is_function();
    const Hash host = host_is_from ? from.hash : to.hash;
    const Hash other = host_is_from ? to.hash : from.hash;
    auto& a = emit(host, ElementKind::Arrow, e.line, e.line, Style::None, hover(kind, from.hash, to.hash));
    a.counterpart = other;
    a.incoming = !host_is_from;
    a.stack = stack;
    const auto& counterpart = log_.at(other);
    if (counterpart.is_function()) {
      auto& label = emit(host, ElementKind::FunctionLabel, e.line, e.line, Style::None,
                         hover(HoverKind::FunctionLabel, other));
      label.counterpart = other;
      label.incoming = a.incoming;
      label.stack = stack;
    }
    ++stack;
  }

  void close_curve(Hash ref, const OpenCurve& curve, int end) {
    emit(ref, ElementKind::AccessCurve, curve.start, end, curve.mutable_borrow ? Style::Solid : Style::Hollow,
         hover(curve.mutable_borrow ? HoverKind::MutableCurve : HoverKind::ImmutableCurve, ref));
  }

  void end_curve(Hash ref, int line) {
    auto it = open_curves_.find(ref);
    if (it == open_curves_.end()) return;
    close_curve(ref, it->second, line);
    open_curves_.erase(it);
  }

  void event(const ExternalEvent& e, int& stack) {
    switch (e.kind) {
      case EventKind::Move:
        dot(*e.from, hover(HoverKind::MovedOut, *e.from));
        dot(*e.to, hover(HoverKind::Acquire, *e.to));
        arrow(e, HoverKind::MoveArrow, stack);
        break;
      case EventKind::Copy:
        dot(*e.from, hover(HoverKind::CopiedFrom, *e.from));
        dot(*e.to, hover(HoverKind::InitializedByCopy, *e.to, *e.from));
        arrow(e, HoverKind::CopyArrow, stack);
        break;
      case EventKind::ImmutableBorrow:
      case EventKind::MutableBorrow: {
        const bool mut = e.kind == EventKind::MutableBorrow;
        dot(*e.from, hover(mut ? HoverKind::MutablyBorrowed : HoverKind::ImmutablyBorrowed, *e.from));
        dot(*e.to, hover(mut ? HoverKind::MutablyBorrows : HoverKind::ImmutablyBorrows, *e.to));
        arrow(e, mut ? HoverKind::MutableBorrowArrow : HoverKind::ImmutableBorrowArrow, stack);
        end_curve(*e.to, e.line);
        open_curves_[*e.to] = OpenCurve{e.line, mut};
        break;
      }
      case EventKind::ImmutableReturn:
      case EventKind::MutableReturn: {
        const bool mut = e.kind == EventKind::MutableReturn;
        dot(*e.from, hover(HoverKind::BorrowEnds, *e.from));
        dot(*e.to, hover(mut ? HoverKind::NoLongerMutablyBorrowed : HoverKind::NoLongerImmutablyBorrowed, *e.to));
        arrow(e, mut ? HoverKind::MutableReturnArrow : HoverKind::ImmutableReturnArrow, stack);
        end_curve(*e.from, e.line);
        break;
      }
      case EventKind::ReadByFunction:
      case EventKind::MutateByFunction: {
        const bool writes = e.kind == EventKind::MutateByFunction && options_.write_fn_says_writes;
        auto& mark = emit(*e.from, ElementKind::FunctionReadMark, e.line, e.line, Style::None,
                          hover(writes ? HoverKind::FunctionWrites : HoverKind::FunctionReads, *e.to, *e.from));
        mark.counterpart = *e.to;
        break;
      }
      case EventKind::Acquire:
        dot(*e.to, hover(HoverKind::Acquire, *e.to));
        break;
      case EventKind::GoOutOfScope: {
        const Hash p = *e.from;
        const bool drops = log_.at(p).is_owner() && !replay_.out_of_scope(p) &&
                           replay_.owners().at(p).owner.has_value();
        dot(p, hover(drops ? HoverKind::ScopeEndDropped : HoverKind::ScopeEndNotDropped, p));
        end_curve(p, e.line);
        break;
      }
    }
  }

  // Segments run between breakpoints: dot lines plus any line where the
  // column's privilege changes without an event of its own.
  void segments() {
    for (std::size_t c = 0; c < panel_.columns.size(); ++c) {
      const auto& rap = panel_.columns[c].participant;
      const auto& priv = privileges_[c];
      std::set<int> breaks = dot_lines_[rap.hash];
      if (breaks.empty()) continue;
      for (int l = *breaks.begin() + 1; l <= *breaks.rbegin(); ++l) {
        if (priv[static_cast<std::size_t>(l)] != priv[static_cast<std::size_t>(l) - 1]) breaks.insert(l);
      }
      for (auto it = breaks.begin(); std::next(it) != breaks.end(); ++it) {
        const int from = *it, to = *std::next(it);
        const Style style = priv[static_cast<std::size_t>(from)];
        if (style == Style::None) continue;
        emit(rap.hash, ElementKind::Segment, from, to, style, hover(segment_hover(rap, style), rap.hash));
      }
    }
  }

  const EventLog& log_;
  const CompileOptions& options_;
  StateReplay replay_;
  TimelinePanel panel_;
  std::map<Hash, std::size_t> column_index_;
  std::map<Hash, std::string> dots_;
  std::map<Hash, std::set<int>> dot_lines_;
  std::map<Hash, OpenCurve> open_curves_;
  std::vector<std::vector<Style>> privileges_;  // [column][line], state after the line
};

}  // namespace

TimelinePanel compile_timelines(const EventLog& log, const CompileOptions& options) {
  if (!options.lenient && !validate(log).ok()) throw CompileOnInvalidLog();
  return Compiler(log, options).run();
}

std::set<Drop> infer_drops(const EventLog& log) {
  std::set<Drop> drops;
  StateReplay replay(log);
  for (const auto& e : log) {
    if (e.kind == EventKind::GoOutOfScope) {
      const Hash p = *e.from;
      if (log.at(p).is_owner() && !replay.out_of_scope(p) && replay.owners().at(p).owner) {
        drops.insert(Drop{p, e.line});
      }
    }
    replay.apply(e);
  }
  return drops;
}

}  // namespace ownviz
