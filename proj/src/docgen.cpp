#include "ownviz/docgen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "ownviz/annotated_source.hpp"
#include "ownviz/borrow_validator.hpp"
#include "ownviz/spec_dsl.hpp"
#include "ownviz/timeline.hpp"

namespace fs = std::filesystem;

namespace ownviz::docgen {

InvalidName::InvalidName(std::string_view name)
    : std::invalid_argument(fmt::format("invalid example name '{}'", name)) {}

namespace {

bool valid_name(std::string_view name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
  });
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string example_name(const fs::path& directory) {
  auto canonical = fs::weakly_canonical(directory);
  auto name = canonical.filename();
  if (name.empty()) name = canonical.parent_path().filename();
  return name.string();
}

}  // namespace

std::string emit_embed_snippet(std::string_view name) {
  if (!valid_name(name)) throw InvalidName(name);
  return fmt::format(
      "<div class=\"ownviz\" data-example=\"{0}\" style=\"display:flex;align-items:flex-start\">\n"
      "<object class=\"ownviz-code\" type=\"image/svg+xml\" data=\"{0}/{1}\"></object>\n"
      "<object class=\"ownviz-timeline\" type=\"image/svg+xml\" data=\"{0}/{2}\"></object>\n"
      "</div>\n"
      "<script>\n"
      "if (!window.ownvizRuntimeRequested) {{\n"
      "  window.ownvizRuntimeRequested = true;\n"
      "  var s = document.createElement(\"script\");\n"
      "  s.src = \"{3}\";\n"
      "  document.head.appendChild(s);\n"
      "}}\n"
      "</script>\n",
      name, kCodeSvg, kTimelineSvg, kRuntimeScript);
}

void write_files_atomically(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".ownviz-tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
}

RenderReport render_example(const fs::path& directory, const RenderOptions& options) {
  RenderReport report;
  auto fail = [&](std::string message) {
    report.status = ExitStatus::InputError;
    report.errors.push_back(std::move(message));
    return report;
  };

  const fs::path spec_path = directory / kSpecFile;
  const fs::path source_path = directory / kSourceFile;
  if (!fs::is_directory(directory)) return fail(fmt::format("{}: not a directory", directory.string()));
  for (const auto& p : {spec_path, source_path}) {
    if (!fs::is_regular_file(p)) return fail(fmt::format("{}: missing input", p.string()));
  }

  dsl::ParsedSpec spec;
  source::AnnotatedListing listing;
  svg::Theme theme;
  try {
    spec = dsl::parse_spec(read_file(spec_path));
  } catch (const dsl::ParseError& e) {
    return fail(fmt::format("{}:{}", spec_path.string(), e.what()));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  try {
    listing = source::parse_annotated_source(read_file(source_path));
  } catch (const source::SourceError& e) {
    return fail(fmt::format("{}:{}", source_path.string(), e.what()));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  if (options.theme_file) {
    try {
      theme = svg::parse_theme(read_file(*options.theme_file));
    } catch (const std::exception& e) {
      return fail(fmt::format("{}: {}", options.theme_file->string(), e.what()));
    }
  }

  const auto validation = validate(spec.log);
  for (const auto& v : validation.violations) report.diagnostics.push_back(format_diagnostic(v, spec.log));
  if (!validation.ok() && !options.lenient) {
    report.status = ExitStatus::ValidationFailed;
    return report;
  }
  if (options.check_only) return report;

  RenderedDocument doc;
  try {
    CompileOptions compile_options;
    compile_options.lenient = options.lenient;
    compile_options.write_fn_says_writes = options.write_fn_says_writes;
    const auto panel = compile_timelines(spec.log, compile_options);
    const auto geometry = svg::layout(panel, listing, theme);
    doc.code_svg = svg::render_code_panel(listing, geometry, spec.log);
    doc.timeline_svg = svg::render_timeline_panel(panel, geometry);
    doc.embed_html = emit_embed_snippet(example_name(directory));
  } catch (const std::exception& e) {
    return fail(e.what());
  }

  const fs::path out_dir = options.out_dir.value_or(directory);
  try {
    fs::create_directories(out_dir);
    std::vector<std::pair<fs::path, std::string>> files{
        {out_dir / kCodeSvg, std::move(doc.code_svg)},
        {out_dir / kTimelineSvg, std::move(doc.timeline_svg)},
        {out_dir / kEmbedHtml, std::move(doc.embed_html)},
    };
    write_files_atomically(files);
    for (const auto& f : files) report.written.push_back(f.first);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return report;
}

std::vector<std::pair<fs::path, RenderReport>> render_batch(const fs::path& root, const RenderOptions& options) {
  std::vector<fs::path> dirs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory() && fs::is_regular_file(entry.path() / kSpecFile)) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  std::vector<std::pair<fs::path, RenderReport>> out;
  for (const auto& dir : dirs) {
    RenderOptions per = options;
    // A shared out-dir would make examples overwrite each other.
    if (options.out_dir) per.out_dir = *options.out_dir / dir.filename();
    out.emplace_back(dir, render_example(dir, per));
  }
  return out;
}

}  // namespace ownviz::docgen
