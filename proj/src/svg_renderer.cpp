#include "ownviz/svg_renderer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace ownviz::svg {

ThemeError::ThemeError(int l, const std::string& detail)
    : std::runtime_error(fmt::format("theme line {}: {}", l, detail)), line(l) {}

LineCountMismatch::LineCountMismatch(int panel_lines, int listing_lines)
    : std::runtime_error(fmt::format("events reference line {} but the source has {} lines", panel_lines,
                                     listing_lines)) {}

UnknownHashInSource::UnknownHashInSource(std::uint32_t h, int l)
    : std::runtime_error(fmt::format("source line {}: hash {} is not declared in the event spec", l, h)),
      hash(h),
      line(l) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_metric(std::string_view value, int line) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out) || out <= 0) {
    throw ThemeError(line, fmt::format("'{}' is not a positive number", value));
  }
  return out;
}

std::string parse_color(std::string_view value, int line) {
  if (value.empty()) throw ThemeError(line, "empty color");
  for (char c : value) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '#' ||
                    c == '(' || c == ')' || c == ',' || c == '.' || c == ' ' || c == '%';
    if (!ok) throw ThemeError(line, fmt::format("'{}' is not a color", value));
  }
  return std::string(value);
}

}  // namespace

Theme parse_theme(std::string_view text, Theme theme) {
  const std::map<std::string_view, double Theme::*> metrics{
      {"line_height", &Theme::line_height},
      {"dot_radius", &Theme::dot_radius},
      {"column_gap", &Theme::column_gap},
      {"curve_reserve", &Theme::curve_reserve},
      {"header_height", &Theme::header_height},
      {"margin", &Theme::margin},
      {"font_size", &Theme::font_size},
      {"char_width", &Theme::char_width},
      {"segment_width", &Theme::segment_width},
      {"stroke_width", &Theme::stroke_width},
      {"arrowhead_length", &Theme::arrowhead_length},
      {"arrowhead_width", &Theme::arrowhead_width},
      {"arrow_stack_offset", &Theme::arrow_stack_offset},
      {"gutter_chars", &Theme::gutter_chars},
  };

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    raw = trim(raw);
    if (raw.empty() || raw.front() == '#') continue;
    auto eq = raw.find('=');
    if (eq == std::string_view::npos) throw ThemeError(line_no, "expected key = value");
    auto key = trim(raw.substr(0, eq));
    auto value = trim(raw.substr(eq + 1));

    if (auto it = metrics.find(key); it != metrics.end()) {
      theme.*(it->second) = parse_metric(value, line_no);
    } else if (key == "font_family") {
      if (value.empty() || value.find_first_of("<>&\"") != std::string_view::npos) {
        throw ThemeError(line_no, "invalid font family");
      }
      theme.font_family = std::string(value);
    } else if (key == "background") {
      theme.background = parse_color(value, line_no);
    } else if (key == "function_color") {
      theme.function_color = parse_color(value, line_no);
    } else if (key == "palette") {
      std::vector<std::string> colors;
      std::size_t p = 0;
      while (p <= value.size()) {
        auto comma = value.find(';', p);
        colors.push_back(parse_color(trim(value.substr(p, comma == std::string_view::npos ? std::string_view::npos
                                                                                          : comma - p)),
                                     line_no));
        if (comma == std::string_view::npos) break;
        p = comma + 1;
      }
      theme.palette = std::move(colors);
    } else {
      throw ThemeError(line_no, fmt::format("unknown key '{}'", key));
    }
  }
  return theme;
}

std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0;  // avoid "-0.00"
  return fmt::format("{:.2f}", v);
}

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default:
        // Control characters other than tab are not allowed in XML 1.0.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t') out += ' ';
        else out += c;
    }
  }
  return out;
}

double Layout::curve_apex_x(Hash column) const {
  return column_x.at(column) + theme.segment_width / 2 + theme.curve_reserve * 0.6;
}

Layout layout(const TimelinePanel& panel, const source::AnnotatedListing& listing, const Theme& theme) {
  const int listing_lines = listing.display_line_count();
  if (panel.last_line > listing_lines) throw LineCountMismatch(panel.last_line, listing_lines);

  Layout out;
  out.theme = theme;
  out.line_count = listing_lines;

  std::size_t longest_label = 0;
  for (const auto& col : panel.columns) {
    for (const auto& el : col.elements) {
      if (el.kind == ElementKind::FunctionLabel) longest_label = std::max(longest_label, el.hover.size());
    }
  }
  const double lane = longest_label == 0 ? 0 : static_cast<double>(longest_label) * theme.char_width + 10;
  out.function_lane_x = theme.margin + lane;

  const double first_row = theme.margin + theme.header_height;
  out.timeline_origin = {out.function_lane_x, first_row};

  double x = out.function_lane_x;
  for (std::size_t i = 0; i < panel.columns.size(); ++i) {
    const auto& rap = panel.columns[i].participant;
    const double width = theme.column_gap + (rap.is_reference() ? theme.curve_reserve : 0);
    out.column_x[rap.hash] = x + theme.column_gap / 2;
    out.column_width[rap.hash] = width;
    out.palette[rap.hash] = theme.palette[i % theme.palette.size()];
    x += width;
  }
  out.timeline_width = x + theme.margin;

  std::size_t longest_line = 0;
  for (const auto& line : listing.lines) {
    std::size_t len = 0;
    for (const auto& span : line) len += source::expand_tabs(span.text, 4, len).size();
    longest_line = std::max(longest_line, len);
  }
  const double gutter = theme.gutter_chars * theme.char_width + theme.char_width * 2;
  out.code_origin = {theme.margin + gutter, first_row};
  out.code_width = out.code_origin.x + static_cast<double>(longest_line) * theme.char_width + theme.margin;

  const int rows = std::max(out.line_count, 1);
  out.height = first_row + (rows - 1) * theme.line_height + theme.line_height / 2 + theme.margin;
  return out;
}

namespace {

class SvgWriter {
 public:
  SvgWriter(double width, double height, std::string_view cls, const Theme& theme) {
    out_ += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" class=\"{}\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\" font-family=\"{}\" font-size=\"{}\">\n",
        cls, num(width), num(height), num(width), num(height), escape_xml(theme.font_family), num(theme.font_size));
    out_ += fmt::format("<rect class=\"background\" x=\"0.00\" y=\"0.00\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                        num(width), num(height), escape_xml(theme.background));
  }

  void raw(std::string_view s) { out_ += s; }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  std::string out_;
};

std::string interactive(Hash hash, std::string_view hover) {
  return fmt::format("data-hash=\"{}\" data-hover=\"{}\"", hash.value, escape_xml(hover));
}

std::string title(std::string_view hover) { return fmt::format("<title>{}</title>", escape_xml(hover)); }

class TimelineRenderer {
 public:
  TimelineRenderer(const TimelinePanel& panel, const Layout& layout)
      : panel_(panel), l_(layout), t_(layout.theme), svg_(layout.timeline_width, layout.height, "ownviz-timeline", t_) {}

  std::string run() {
    header();
    for (const auto& col : panel_.columns) {
      svg_.raw(fmt::format("<g class=\"column\" data-hash=\"{}\">\n", col.participant.hash.value));
      // Segments and curves first so dots and marks sit on top.
      for (const auto& el : col.elements) {
        if (el.kind == ElementKind::Segment) segment(el);
        if (el.kind == ElementKind::AccessCurve) curve(el);
      }
      for (const auto& el : col.elements) {
        switch (el.kind) {
          case ElementKind::Dot: dot(el); break;
          case ElementKind::FunctionReadMark: mark(el); break;
          case ElementKind::Arrow: arrow(el); break;
          case ElementKind::FunctionLabel: label(el); break;
          default: break;
        }
      }
      svg_.raw("</g>\n");
    }
    return svg_.finish();
  }

 private:
  const std::string& color(Hash h) const { return l_.palette.at(h); }

  void header() {
    svg_.raw("<g class=\"header\">\n");
    const double y = t_.margin + t_.header_height / 2;
    for (const auto& col : panel_.columns) {
      const auto& rap = col.participant;
      const double x = l_.column_x.at(rap.hash);
      svg_.raw(fmt::format("<text class=\"header-name\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{}\" "
                           "data-hash=\"{}\">{}</text>\n",
                           num(x), num(y), color(rap.hash), rap.hash.value, escape_xml(rap.name)));
      if (rap.is_reference()) {
        svg_.raw(fmt::format("<text class=\"header-deref\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" fill=\"{}\" "
                             "data-hash=\"{}\">*{}</text>\n",
                             num(l_.curve_apex_x(rap.hash)), num(y), color(rap.hash), rap.hash.value,
                             escape_xml(rap.name)));
      }
    }
    svg_.raw("</g>\n");
  }

  void segment(const TimelineElement& el) {
    const double x = l_.column_x.at(el.column) - t_.segment_width / 2;
    const double y0 = l_.row_y(el.line_start);
    const double h = l_.row_y(el.line_end) - y0;
    const bool solid = el.style == Style::Solid;
    svg_.raw(fmt::format(
        "<rect class=\"segment {}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"{}\" "
        "stroke-width=\"{}\"{} {}>{}</rect>\n",
        to_string(el.style), num(x), num(y0), num(t_.segment_width), num(h),
        solid ? color(el.column) : escape_xml(t_.background), color(el.column), num(t_.stroke_width / 2),
        solid ? "" : " opacity=\"0.50\"", interactive(el.column, el.hover), title(el.hover)));
  }

  void curve(const TimelineElement& el) {
    const double x = l_.column_x.at(el.column) + t_.segment_width / 2;
    const double y0 = l_.row_y(el.line_start);
    const double y1 = l_.row_y(el.line_end);
    const double k = t_.curve_reserve * 0.8;
    const bool solid = el.style == Style::Solid;
    svg_.raw(fmt::format(
        "<path class=\"curve {}\" d=\"M {} {} C {} {} {} {} {} {}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"{}\"{} {}>{}</path>\n",
        to_string(el.style), num(x), num(y0), num(x + k), num(y0), num(x + k), num(y1), num(x), num(y1),
        color(el.column), num(t_.stroke_width), solid ? "" : " opacity=\"0.50\" stroke-dasharray=\"4 3\"",
        interactive(el.column, el.hover), title(el.hover)));
  }

  void dot(const TimelineElement& el) {
    svg_.raw(fmt::format("<circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" {}>{}</circle>\n",
                         num(l_.column_x.at(el.column)), num(l_.row_y(el.line_start)), num(t_.dot_radius),
                         color(el.column), interactive(el.column, el.hover), title(el.hover)));
  }

  void mark(const TimelineElement& el) {
    const Hash fn = el.counterpart.value_or(el.column);
    svg_.raw(fmt::format(
        "<text class=\"fn-mark\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" font-style=\"italic\" "
        "font-weight=\"bold\" fill=\"{}\" {}>f{}</text>\n",
        num(l_.curve_apex_x(el.column)), num(l_.row_y(el.line_start)),
        escape_xml(t_.function_color), interactive(fn, el.hover), title(el.hover)));
  }

  // x where an arrow meets the endpoint `h` (a column or the function lane).
  double endpoint_x(Hash h) const {
    auto it = l_.column_x.find(h);
    return it == l_.column_x.end() ? l_.function_lane_x + 4 : it->second;
  }

  void arrow(const TimelineElement& el) {
    const Hash other = *el.counterpart;
    const Hash from = el.incoming ? other : el.column;
    const Hash to = el.incoming ? el.column : other;
    const double y = l_.row_y(el.line_start) + el.stack * t_.arrow_stack_offset;
    double x0 = endpoint_x(from);
    double x1 = endpoint_x(to);
    const double dir = x1 >= x0 ? 1.0 : -1.0;
    if (l_.column_x.contains(from)) x0 += dir * (t_.dot_radius + 1);
    if (l_.column_x.contains(to)) x1 -= dir * (t_.dot_radius + 1);
    const double base = x1 - dir * t_.arrowhead_length;
    const double hw = t_.arrowhead_width / 2;
    const std::string& stroke = color(el.column);
    svg_.raw(fmt::format("<g class=\"arrow\" {}>{}", interactive(el.column, el.hover), title(el.hover)));
    svg_.raw(fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>", num(x0),
                         num(y), num(base), num(y), stroke, num(t_.stroke_width)));
    svg_.raw(fmt::format("<polygon points=\"{},{} {},{} {},{}\" fill=\"{}\"/></g>\n", num(x1), num(y), num(base),
                         num(y - hw), num(base), num(y + hw), stroke));
  }

  void label(const TimelineElement& el) {
    const Hash fn = *el.counterpart;
    const double y = l_.row_y(el.line_start) + el.stack * t_.arrow_stack_offset;
    svg_.raw(fmt::format("<text class=\"fn-label\" x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"central\" fill=\"{}\" {}>{}{}</text>\n",
                         num(l_.function_lane_x), num(y), escape_xml(t_.function_color),
                         interactive(fn, el.hover), escape_xml(el.hover), title(el.hover)));
  }

  const TimelinePanel& panel_;
  const Layout& l_;
  const Theme& t_;
  SvgWriter svg_;
};

}  // namespace

std::string render_timeline_panel(const TimelinePanel& panel, const Layout& layout) {
  return TimelineRenderer(panel, layout).run();
}

std::string render_code_panel(const source::AnnotatedListing& listing, const Layout& layout, const EventLog& log) {
  const auto& t = layout.theme;
  for (std::size_t i = 0; i < listing.lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    for (const auto& span : listing.lines[i]) {
      if (span.data_hash && *span.data_hash != 0 && !log.find(Hash{*span.data_hash})) {
        throw UnknownHashInSource(*span.data_hash, line);
      }
      if (span.fn_hash && !log.find(Hash{*span.fn_hash})) throw UnknownHashInSource(*span.fn_hash, line);
    }
  }

  SvgWriter svg(layout.code_width, layout.height, "ownviz-code", t);
  svg.raw("<g class=\"gutter\">\n");
  for (int line = 1; line <= layout.line_count; ++line) {
    svg.raw(fmt::format("<text class=\"lineno\" x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"central\" fill=\"#999999\">{}</text>\n",
                        num(t.margin + t.gutter_chars * t.char_width), num(layout.row_y(line)),
                        line));
  }
  svg.raw("</g>\n<g class=\"code\">\n");
  for (int line = 1; line <= layout.line_count; ++line) {
    const auto& spans = listing.lines[static_cast<std::size_t>(line) - 1];
    if (spans.empty()) continue;
    std::string body;
    std::size_t column = 0;
    for (std::size_t s = 0; s < spans.size(); ++s) {
      const auto& span = spans[s];
      auto text = source::expand_tabs(span.text, 4, column);
      column += text.size();
      if (s + 1 == spans.size() && !text.empty() && text.back() == '\r') text.pop_back();
      if (span.is_fn) {
        body += fmt::format("<tspan class=\"fn\" data-hash=\"0\" hash=\"{}\">{}</tspan>", *span.fn_hash,
                            escape_xml(text));
      } else if (span.data_hash) {
        body += fmt::format("<tspan data-hash=\"{}\">{}</tspan>", *span.data_hash, escape_xml(text));
      } else {
        body += escape_xml(text);
      }
    }
    svg.raw(fmt::format("<text class=\"code-line\" x=\"{}\" y=\"{}\" dominant-baseline=\"central\" xml:space=\"preserve\">{}</text>\n",
                        num(layout.code_origin.x), num(layout.row_y(line)), body));
  }
  svg.raw("</g>\n");
  return svg.finish();
}

}  // namespace ownviz::svg
