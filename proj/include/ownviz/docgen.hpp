#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ownviz/svg_renderer.hpp"

namespace ownviz::docgen {

inline constexpr std::string_view kSourceFile = "main.rs";
inline constexpr std::string_view kSpecFile = "events.evspec";
inline constexpr std::string_view kCodeSvg = "vis_code.svg";
inline constexpr std::string_view kTimelineSvg = "vis_timeline.svg";
inline constexpr std::string_view kEmbedHtml = "embed.html";
inline constexpr std::string_view kRuntimeScript = "ownviz-hover.js";

struct RenderOptions {
  bool lenient = false;     // report violations as warnings and render anyway
  bool check_only = false;  // validate, do not render
  bool write_fn_says_writes = false;
  std::optional<std::filesystem::path> theme_file;
  std::optional<std::filesystem::path> out_dir;  // defaults to the example directory
};

enum class ExitStatus : int { Ok = 0, ValidationFailed = 1, InputError = 2 };

struct RenderReport {
  ExitStatus status = ExitStatus::Ok;
  std::vector<std::filesystem::path> written;
  std::vector<std::string> diagnostics;  // RULE:LINE:NAMES:MESSAGE
  std::vector<std::string> errors;       // parse and I/O failures, prefixed by file
};

struct RenderedDocument {
  std::string code_svg;
  std::string timeline_svg;
  std::string embed_html;
};

class InvalidName : public std::invalid_argument {
 public:
  explicit InvalidName(std::string_view name);
};

// HTML fragment placing the two SVGs side by side and loading the hover
// script at most once per page. Without the script the SVGs' own <title>
// elements still act as tooltips.
std::string emit_embed_snippet(std::string_view example_name);

// Renders one example directory. Never throws for input problems; they are
// reported through the returned status.
RenderReport render_example(const std::filesystem::path& directory, const RenderOptions& options = {});

// Renders every immediate subdirectory of `root` that holds an event spec,
// in name order. The status is the worst individual status.
std::vector<std::pair<std::filesystem::path, RenderReport>> render_batch(const std::filesystem::path& root,
                                                                         const RenderOptions& options = {});

// Writes all files or none: every payload goes to a temporary sibling first
// and is renamed into place only after all temporaries are written.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace ownviz::docgen
