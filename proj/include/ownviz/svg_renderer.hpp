#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ownviz/annotated_source.hpp"
#include "ownviz/event_model.hpp"
#include "ownviz/timeline.hpp"

namespace ownviz::svg {

// Metric and color defaults. Every field can be overridden from a theme file
// of `key = value` lines.
struct Theme {
  double line_height = 30;
  double dot_radius = 5;
  double column_gap = 90;
  double curve_reserve = 40;  // extra width of reference columns
  double header_height = 40;
  double margin = 20;
  double font_size = 14;
  double char_width = 8.4;  // advance of one monospace glyph at font_size
  double segment_width = 6;
  double stroke_width = 2;
  double arrowhead_length = 8;
  double arrowhead_width = 6;
  double arrow_stack_offset = 4;
  double gutter_chars = 3;
  std::string font_family = "monospace";
  std::string background = "#ffffff";
  std::string function_color = "#555555";
  std::vector<std::string> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  bool operator==(const Theme&) const = default;
};

class ThemeError : public std::runtime_error {
 public:
  ThemeError(int line, const std::string& detail);
  int line;
};

// Applies `key = value` overrides on top of `base`. '#' starts a comment.
Theme parse_theme(std::string_view text, Theme base = {});

struct Point {
  double x = 0;
  double y = 0;
};

struct Layout {
  Theme theme;
  int line_count = 0;
  Point code_origin;      // x of code text, y of line 1
  Point timeline_origin;  // x of the first column slot, y of line 1
  std::map<Hash, double> column_x;      // x of each column's segment
  std::map<Hash, double> column_width;  // horizontal slot reserved per column
  double function_lane_x = 0;           // right edge of function labels
  std::map<Hash, std::string> palette;
  double code_width = 0;
  double timeline_width = 0;
  double height = 0;

  double row_y(int line) const { return timeline_origin.y + (line - 1) * theme.line_height; }
  double curve_apex_x(Hash column) const;
};

class LineCountMismatch : public std::runtime_error {
 public:
  LineCountMismatch(int panel_lines, int listing_lines);
};

class UnknownHashInSource : public std::runtime_error {
 public:
  UnknownHashInSource(std::uint32_t hash, int line);
  std::uint32_t hash;
  int line;
};

Layout layout(const TimelinePanel& panel, const source::AnnotatedListing& listing, const Theme& theme = {});

std::string render_timeline_panel(const TimelinePanel& panel, const Layout& layout);

std::string render_code_panel(const source::AnnotatedListing& listing, const Layout& layout,
                              const EventLog& log);

// Fixed two-decimal formatting used for every coordinate.
std::string num(double v);

std::string escape_xml(std::string_view text);

}  // namespace ownviz::svg
