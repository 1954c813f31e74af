// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sys/wait.h>

#include <fmt/format.h>

#include "ownviz/borrow_validator.hpp"
#include "ownviz/docgen.hpp"
#include "ownviz/spec_dsl.hpp"
#include "ownviz/svg_renderer.hpp"
#include "ownviz/timeline.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;
using namespace ownviz;
using Clock = std::chrono::steady_clock;

namespace {

const char* const kGallery[] = {"borrow", "move_copy_drop", "one_var", "owner_to_owner"};

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, std::string what) {
    if (!cond) {
      ok = false;
      notes.push_back(std::move(what));
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<const TimelineElement*> of_kind(const Column& c, ElementKind kind) {
  std::vector<const TimelineElement*> out;
  for (const auto& e : c.elements)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

std::vector<int> dot_lines(const Column& c) {
  std::vector<int> out;
  for (const auto* e : of_kind(c, ElementKind::Dot)) out.push_back(e->line_start);
  return out;
}

struct Golden {
  std::string code, timeline;
};

Golden render_golden(const testing::Example& ex) {
  auto panel = compile_timelines(ex.spec.log);
  auto g = svg::layout(panel, ex.listing);
  return {svg::render_code_panel(ex.listing, g, ex.spec.log), svg::render_timeline_panel(panel, g)};
}

void check_golden(Outcome& o, std::string_view name, const Golden& got) {
  auto dir = fmt::format("{}/golden/{}", OWNVIZ_TESTS_DIR, name);
  o.expect(got.code == testing::read_text(dir + "/vis_code.svg"), "code panel differs from golden");
  o.expect(got.timeline == testing::read_text(dir + "/vis_timeline.svg"), "timeline panel differs from golden");
}

// (from, to, line) over participant names.
using ArrowKey = std::tuple<std::string, std::string, int>;

std::set<ArrowKey> arrows_of(const TimelinePanel& panel, const EventLog& log) {
  std::set<ArrowKey> out;
  for (const auto& col : panel.columns) {
    for (const auto* a : of_kind(col, ElementKind::Arrow)) {
      auto here = col.participant.name, there = log.name_of(*a->counterpart);
      out.emplace(a->incoming ? there : here, a->incoming ? here : there, a->line_start);
    }
  }
  return out;
}

Outcome move_copy_drop_example() {
  Outcome o;
  auto t0 = Clock::now();
  auto ex = testing::load_example("move_copy_drop");
  const auto& log = ex.spec.log;
  auto panel = compile_timelines(log);
  auto col = [&](std::string_view n) -> const Column& { return *panel.find(testing::hash_of(log, n)); };

  o.expect(dot_lines(col("s")) == std::vector<int>{2, 3, 7}, "s dots");
  auto s_segs = of_kind(col("s"), ElementKind::Segment);
  o.expect(s_segs.size() == 1 && s_segs[0]->line_start == 2 && s_segs[0]->line_end == 3 &&
               s_segs[0]->style == Style::Hollow,
           "s has one hollow segment 2-3");
  o.expect(dot_lines(col("x")) == std::vector<int>{4, 5, 6, 7}, "x dots");
  auto x_segs = of_kind(col("x"), ElementKind::Segment);
  o.expect(x_segs.size() == 3 && std::all_of(x_segs.begin(), x_segs.end(),
                                             [](auto* s) { return s->style == Style::Solid; }),
           "x has three solid segments");
  o.expect(dot_lines(col("y")) == std::vector<int>{5, 7}, "y dots");
  auto y_segs = of_kind(col("y"), ElementKind::Segment);
  o.expect(y_segs.size() == 1 && y_segs[0]->style == Style::Hollow, "y has one hollow segment");
  o.expect(arrows_of(panel, log) == std::set<ArrowKey>{{"String::from()", "s", 2},
                                                       {"s", "takes_ownership()", 3},
                                                       {"x", "y", 5}},
           "arrows");
  o.expect(infer_drops(log) == std::set<Drop>{{testing::hash_of(log, "x"), 7}, {testing::hash_of(log, "y"), 7}},
           "drops");
  check_golden(o, "move_copy_drop", render_golden(ex));
  auto secs = seconds_since(t0);
  o.expect(secs < 1.0, fmt::format("took {:.3f}s", secs));
  return o;
}

Outcome borrow_example() {
  Outcome o;
  auto t0 = Clock::now();
  auto ex = testing::load_example("borrow");
  const auto& log = ex.spec.log;
  o.expect(validate(log).ok(), "validates");
  auto panel = compile_timelines(log);
  auto col = [&](std::string_view n) -> const Column& { return *panel.find(testing::hash_of(log, n)); };

  // s is drawn on every line interval of its life except the mut borrow 8-9.
  std::set<int> covered;
  for (const auto* seg : of_kind(col("s"), ElementKind::Segment))
    for (int l = seg->line_start; l < seg->line_end; ++l) covered.insert(l);
  o.expect(!covered.contains(8), "no s segment between mut_borrow and mut_return");
  o.expect(covered.contains(7) && covered.contains(9), "s segment before the gap and resuming after it");
  std::set<int> expected_cover{2, 3, 4, 5, 6, 7, 9};
  o.expect(covered == expected_cover, "s segment lines");

  auto curve = [&](std::string_view n) {
    auto c = of_kind(col(n), ElementKind::AccessCurve);
    return c.size() == 1 ? c[0]->style : Style::None;
  };
  o.expect(curve("r1") == Style::Hollow && curve("r2") == Style::Hollow && curve("r3") == Style::Solid,
           "curve styles");
  o.expect(infer_drops(log) == std::set<Drop>{{testing::hash_of(log, "s"), 10}}, "drops");
  check_golden(o, "borrow", render_golden(ex));
  auto secs = seconds_since(t0);
  o.expect(secs < 1.0, fmt::format("took {:.3f}s", secs));
  return o;
}

struct HoverRow {
  const char* label;
  const char* column;
  ElementKind kind;
  int line;
  const char* text;
};

// Expected hover messages for the two teaching examples, labeled a, b, c...
const HoverRow kMoveCopyDropHovers[] = {
    {"a", "s", ElementKind::FunctionLabel, 2, "String::from()"},
    {"b", "s", ElementKind::Arrow, 2, "Move from String::from() to s"},
    {"c", "s", ElementKind::Dot, 2, "s acquires ownership of a resource"},
    {"d", "s", ElementKind::Segment, 2, "s is the owner of the resource. The binding cannot be reassigned."},
    {"e", "s", ElementKind::Dot, 3, "s's resource is moved"},
    {"f", "s", ElementKind::Arrow, 3, "Move from s to takes_ownership()"},
    {"g", "s", ElementKind::FunctionLabel, 3, "takes_ownership()"},
    {"h", "x", ElementKind::Dot, 4, "x acquires ownership of a resource"},
    {"i", "x", ElementKind::Segment, 4, "x is the owner of the resource. The binding can be reassigned."},
    {"j", "x", ElementKind::Dot, 5, "x's resource is copied"},
    {"k", "x", ElementKind::Arrow, 5, "Copy from x to y"},
    {"l", "y", ElementKind::Dot, 5, "y is initialized by copy from x"},
    {"m", "x", ElementKind::Segment, 5, "x is the owner of the resource. The binding can be reassigned."},
    {"n", "y", ElementKind::Segment, 5, "y is the owner of the resource. The binding cannot be reassigned."},
    {"o", "x", ElementKind::Dot, 6, "x acquires ownership of a resource"},
    {"p", "x", ElementKind::Segment, 6, "x is the owner of the resource. The binding can be reassigned."},
    {"q", "s", ElementKind::Dot, 7, "s goes out of scope. No resource is dropped."},
    {"r", "x", ElementKind::Dot, 7, "x goes out of scope. Its resource is dropped."},
    {"s", "y", ElementKind::Dot, 7, "y goes out of scope. Its resource is dropped."},
};

const HoverRow kBorrowHovers[] = {
    {"a", "s", ElementKind::Dot, 4, "s's resource is immutably borrowed"},
    {"b", "s", ElementKind::Arrow, 4, "Immutable borrow from s to r1"},
    {"c", "r1", ElementKind::Dot, 4, "r1 immutably borrows a resource"},
    {"d", "r1", ElementKind::AccessCurve, 4, "Cannot mutate *r1"},
    {"e", "s", ElementKind::Dot, 5, "s's resource is immutably borrowed"},
    {"f", "s", ElementKind::Arrow, 5, "Immutable borrow from s to r2"},
    {"g", "r2", ElementKind::Dot, 5, "r2 immutably borrows a resource"},
    {"h", "r2", ElementKind::AccessCurve, 5, "Cannot mutate *r2"},
    {"i", "r1", ElementKind::FunctionReadMark, 6, "compare_strings() reads from r1"},
    {"j", "r2", ElementKind::FunctionReadMark, 6, "compare_strings() reads from r2"},
    {"k", "r1", ElementKind::Arrow, 6, "Return immutably borrowed resource from r1 to s"},
    {"l", "r2", ElementKind::Arrow, 6, "Return immutably borrowed resource from r2 to s"},
    {"m", "s", ElementKind::Dot, 6, "s's resource is no longer immutably borrowed"},
    {"n", "s", ElementKind::Dot, 8, "s's resource is mutably borrowed"},
    {"o", "s", ElementKind::Arrow, 8, "mutable borrow from s to r3"},
    {"p", "r3", ElementKind::Dot, 8, "r3 mutably borrows a resource"},
    {"q", "r3", ElementKind::AccessCurve, 8, "Can mutate the resource *r3"},
    {"r", "r3", ElementKind::FunctionReadMark, 9, "clear_string() reads from r3"},
    {"s", "r3", ElementKind::Arrow, 9, "Return mutably borrowed resource from r3 to s"},
    {"t", "s", ElementKind::Dot, 9, "s's resource is no longer mutably borrowed"},
};

template <std::size_t N>
void check_hovers(Outcome& o, std::string_view example, std::string_view label, const HoverRow (&rows)[N]) {
  auto ex = testing::load_example(example);
  const auto& log = ex.spec.log;
  auto panel = compile_timelines(log);
  auto timeline = render_golden(ex).timeline;
  auto xml = testing::parse_xml(timeline);
  for (const auto& row : rows) {
    const auto* col = panel.find(testing::hash_of(log, row.column));
    bool found = false;
    for (const auto& el : col->elements)
      if (el.kind == row.kind && el.line_start == row.line && el.hover == row.text) found = true;
    bool drawn = false;
    for (const auto& el : xml.elements) {
      auto it = el.attrs.find("data-hover");
      if (it != el.attrs.end() && it->second == row.text) drawn = true;
    }
    o.expect(found && drawn, fmt::format("{} ({}): \"{}\"", label, row.label, row.text));
  }
}

Outcome hover_fidelity() {
  Outcome o;
  check_hovers(o, "move_copy_drop", "move_copy_drop", kMoveCopyDropHovers);
  check_hovers(o, "borrow", "borrow", kBorrowHovers);
  return o;
}

Outcome validator_oracle() {
  Outcome o;
  auto t0 = Clock::now();
  const auto alphabet = testing::oracle_alphabet();
  std::size_t total = 0, disagreements = 0, accepted = 0;
  std::vector<testing::OEvent> seq;
  std::function<void(int)> visit = [&](int depth) {
    for (auto trait : {testing::OTrait::None, testing::OTrait::Move, testing::OTrait::Copy}) {
      ++total;
      const bool oracle = testing::oracle_accepts(seq, trait);
      accepted += oracle ? 1 : 0;
      if (validate(testing::to_event_log(seq, trait)).ok() != oracle) {
        if (disagreements++ < 3) o.notes.push_back(fmt::format("disagreement at length {}", seq.size()));
      }
    }
    if (depth == 5) return;
    for (const auto& e : alphabet) {
      seq.push_back(e);
      visit(depth + 1);
      seq.pop_back();
    }
  };
  visit(0);
  auto secs = seconds_since(t0);
  o.expect(disagreements == 0, fmt::format("{} of {} sequences disagree", disagreements, total));
  o.expect(total == 3 * 813616, fmt::format("enumerated {} sequences", total));
  o.expect(secs < 60.0, fmt::format("took {:.1f}s", secs));
  o.notes.push_back(fmt::format("{} sequences, {} accepted, {:.1f}s", total, accepted, secs));
  return o;
}

int run(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  Outcome o;
  std::random_device rd;
  auto root = fs::temp_directory_path() / fmt::format("ownviz-accept-{}", rd());
  for (int runs = 0; runs < 3; ++runs) {
    for (auto name : kGallery) {
      auto out = root / fmt::format("run{}", runs) / name;
      auto cmd = fmt::format("{} render {}/{} --out-dir {} >/dev/null", OWNVIZ_CLI, OWNVIZ_GALLERY_DIR, name,
                             out.string());
      o.expect(run(cmd) == 0, fmt::format("render {} failed", name));
    }
  }
  for (auto name : kGallery) {
    for (auto file : {docgen::kCodeSvg, docgen::kTimelineSvg}) {
      auto first = testing::read_text((root / "run0" / name / std::string(file)).string());
      for (int k = 1; k < 3; ++k) {
        auto again = testing::read_text((root / fmt::format("run{}", k) / name / std::string(file)).string());
        o.expect(again == first, fmt::format("{}/{} differs in run {}", name, file, k));
      }
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return o;
}

Outcome round_trip() {
  Outcome o;
  std::mt19937 rng(1000);
  int fixpoints = 0;
  for (int i = 0; i < 1000; ++i) {
    auto text = testing::random_spec_text(rng);
    try {
      auto first = dsl::parse_spec(text);
      auto printed = dsl::print_spec(first.log);
      auto second = dsl::parse_spec(printed);
      if (second.log == first.log && dsl::print_spec(second.log) == printed) ++fixpoints;
      else o.expect(false, fmt::format("spec {} is not a fixpoint", i));
    } catch (const std::exception& e) {
      o.expect(false, fmt::format("spec {}: {}", i, e.what()));
    }
  }
  o.notes.push_back(fmt::format("{}/1000 fixpoints", fixpoints));
  return o;
}

Outcome xml_validity() {
  Outcome o;
  int documents = 0;
  for (auto name : kGallery) {
    auto out = render_golden(testing::load_example(name));
    for (const auto* doc : {&out.code, &out.timeline}) {
      auto xml = testing::parse_xml(*doc);
      o.expect(xml.ok, fmt::format("{}: {}", name, xml.error));
      ++documents;
    }
  }
  std::mt19937 rng(500);
  CompileOptions lenient;
  lenient.lenient = true;
  for (int i = 0; i < 500; ++i) {
    auto log = testing::random_log(rng, 8, 16, 14);
    auto panel = compile_timelines(log, lenient);
    auto listing = source::parse_annotated_source(testing::random_annotated_source(rng, log, log.last_line() + 2));
    auto g = svg::layout(panel, listing);
    for (const auto& doc : {svg::render_code_panel(listing, g, log), svg::render_timeline_panel(panel, g)}) {
      auto xml = testing::parse_xml(doc);
      o.expect(xml.ok, fmt::format("random panel {}: {}", i, xml.error));
      ++documents;
    }
  }
  o.notes.push_back(fmt::format("{} documents", documents));
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"move, copy and drop example reproduction", move_copy_drop_example},
      {"borrow example reproduction", borrow_example},
      {"hover message fidelity", hover_fidelity},
      {"validator matches brute-force oracle (length <= 5)", validator_oracle},
      {"CLI rendering is deterministic", determinism},
      {"DSL round trip on 1000 random specs", round_trip},
      {"SVG output is well-formed XML", xml_validity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(fmt::format("exception: {}", e.what()));
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << name;
    if (!o.notes.empty()) std::cout << " [" << fmt::format("{}", fmt::join(o.notes, "; ")) << "]";
    std::cout << '\n';
    failed += o.ok ? 0 : 1;
  }
  return failed;
}
