// ownviz: render ownership/borrowing timelines for documentation.
//
//   ownviz render <dir> [--lenient] [--theme FILE] [--out-dir DIR] [--check]
//   ownviz check <dir>
//   ownviz batch <root> [same flags as render]
//
// Exit codes: 0 ok, 1 validation violations, 2 input or parse errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ownviz/docgen.hpp"

namespace fs = std::filesystem;
using ownviz::docgen::ExitStatus;
using ownviz::docgen::RenderOptions;
using ownviz::docgen::RenderReport;

namespace {

struct Flags {
  bool lenient = false;
  bool check = false;
  bool writes_through = false;
  std::string theme;
  std::string out_dir;
};

void add_render_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_flag("--lenient", flags.lenient, "Report rule violations as warnings and render anyway");
  cmd->add_option("--theme", flags.theme, "Theme file with key = value metric overrides")
      ->envname("OWNVIZ_THEME");
  cmd->add_option("--out-dir", flags.out_dir, "Write outputs here instead of the example directory");
  cmd->add_flag("--check", flags.check, "Validate only; do not render");
  cmd->add_flag("--writes-through", flags.writes_through,
                "Describe write_fn events as \"writes through\" rather than \"reads from\"");
}

RenderOptions to_options(const Flags& flags) {
  RenderOptions opts;
  opts.lenient = flags.lenient;
  opts.check_only = flags.check;
  opts.write_fn_says_writes = flags.writes_through;
  if (!flags.theme.empty()) opts.theme_file = flags.theme;
  if (!flags.out_dir.empty()) opts.out_dir = flags.out_dir;
  return opts;
}

int print_report(const fs::path& dir, const RenderReport& report, bool lenient) {
  for (const auto& e : report.errors) std::cerr << "error: " << e << '\n';
  for (const auto& d : report.diagnostics) std::cerr << (lenient ? "warning: " : "") << d << '\n';
  for (const auto& w : report.written) std::cout << "wrote " << w.string() << '\n';
  if (report.status == ExitStatus::Ok && report.written.empty()) std::cout << dir.string() << ": ok\n";
  return static_cast<int>(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render ownership and borrowing timelines as SVG"};
  app.require_subcommand(1);

  Flags render_flags, batch_flags;
  std::string render_dir, check_dir, batch_root;

  auto* render = app.add_subcommand("render", "Render one example directory");
  render->add_option("dir", render_dir, "Directory holding main.rs and events.evspec")->required();
  add_render_flags(render, render_flags);

  auto* check = app.add_subcommand("check", "Validate one example directory without rendering");
  check->add_option("dir", check_dir, "Directory holding main.rs and events.evspec")->required();

  auto* batch = app.add_subcommand("batch", "Render every example directory under a root");
  batch->add_option("root", batch_root, "Directory whose subdirectories are examples")->required();
  add_render_flags(batch, batch_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitStatus::InputError);
  }

  if (*render) {
    const auto report = ownviz::docgen::render_example(render_dir, to_options(render_flags));
    return print_report(render_dir, report, render_flags.lenient);
  }
  if (*check) {
    RenderOptions opts;
    opts.check_only = true;
    const auto report = ownviz::docgen::render_example(check_dir, opts);
    return print_report(check_dir, report, false);
  }

  if (!fs::is_directory(batch_root)) {
    std::cerr << "error: " << batch_root << ": not a directory\n";
    return static_cast<int>(ExitStatus::InputError);
  }
  int worst = 0;
  for (const auto& [dir, report] : ownviz::docgen::render_batch(batch_root, to_options(batch_flags))) {
    worst = std::max(worst, print_report(dir, report, batch_flags.lenient));
  }
  return worst;
}
