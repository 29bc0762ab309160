// causalstruct: prompt -> causal scene graph -> refined 3D layout.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "causalstruct/config.hpp"
#include "causalstruct/edit.hpp"
#include "causalstruct/error.hpp"
#include "causalstruct/layout.hpp"
#include "causalstruct/pipeline.hpp"
#include "causalstruct/render.hpp"
#include "causalstruct/scene_io.hpp"

namespace fs = std::filesystem;
using namespace causalstruct;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOracle = 2;
constexpr int kExitValidation = 3;
constexpr int kExitLayout = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OracleUnavailable:
    case ErrorKind::MalformedResponse:
    case ErrorKind::CompletionFailed:
    case ErrorKind::MissingIntervention:
      return kExitOracle;
    case ErrorKind::DoesNotFit:
    case ErrorKind::Unresolvable:
    case ErrorKind::RenderFailed:
      return kExitLayout;
    default:
      return kExitValidation;
  }
}

PipelineConfig load_or_default(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

void report_resolve(const PipelineResult& result) {
  if (!result.resolve.resolved) {
    fmt::print(stderr, "warning: overlaps remain after {} passes: {}\n", result.resolve.passes,
               result.resolve.diagnostic);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal scene-graph layout engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;

  auto* generate = app.add_subcommand("generate", "Run the full pipeline on a prompt");
  std::string prompt;
  std::string prompt_file;
  auto* prompt_opt = generate->add_option("-p,--prompt", prompt, "Scene prompt text");
  generate->add_option("--prompt-file", prompt_file, "Read the prompt from a file")
      ->excludes(prompt_opt)
      ->check(CLI::ExistingFile);
  generate->add_option("--config", config_path, "Config file (key = value)");
  generate->add_option("-o,--output", output_dir, "Output directory");

  auto* refine = app.add_subcommand("refine", "Re-run ordering, screening and PID on a scene");
  std::string scene_path;
  refine->add_option("scene", scene_path, "scene.json")->required()->check(CLI::ExistingFile);
  refine->add_option("--config", config_path, "Config file");
  refine->add_option("-o,--output", output_dir, "Output directory")->required();

  auto* layout = app.add_subcommand("layout", "Place a graph without consulting the oracle");
  layout->add_option("graph", scene_path, "Graph document")->required()->check(CLI::ExistingFile);
  layout->add_option("--config", config_path, "Config file");
  layout->add_option("-o,--output", output_dir, "Output directory")->required();

  auto* edit = app.add_subcommand("edit", "Apply one edit to an exported scene");
  edit->add_option("scene", scene_path, "scene.json")->required()->check(CLI::ExistingFile);
  std::string add_spec, remove_spec, move_spec, rescale_spec;
  auto* add_opt = edit->add_option("--add", add_spec, "obj(name,L,W,H); rel(name,word,target)");
  auto* remove_opt = edit->add_option("--remove", remove_spec, "Object id");
  auto* move_opt = edit->add_option("--move", move_spec, "ID,relation,TARGET");
  auto* rescale_opt = edit->add_option("--rescale", rescale_spec, "ID,factor");
  for (auto* a : {add_opt, remove_opt, move_opt, rescale_opt}) {
    for (auto* b : {add_opt, remove_opt, move_opt, rescale_opt}) {
      if (a != b) a->excludes(b);
    }
  }
  edit->add_option("--config", config_path, "Config file");
  edit->add_option("-o,--output", output_dir, "Output directory (default: the scene's directory)");

  auto* render = app.add_subcommand("render", "Render one view of a scene");
  render->add_option("scene", scene_path, "scene.json")->required()->check(CLI::ExistingFile);
  std::string view_name = "threequarter";
  render->add_option("--view", view_name, "front|side|top|threequarter")
      ->check(CLI::IsMember({"front", "side", "top", "threequarter"}));
  std::string render_out;
  render->add_option("-o,--output", render_out, "SVG file (default: stdout)");

  auto* exporter = app.add_subcommand("export", "Export the layout record of a scene");
  exporter->add_option("scene", scene_path, "scene.json")->required()->check(CLI::ExistingFile);
  bool fscene = false;
  exporter->add_flag("--fscene", fscene, "Emit the layout record (the only format)");
  std::string export_out;
  exporter->add_option("-o,--output", export_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (generate->parsed()) {
      if (prompt_file.empty() && prompt.empty()) {
        fmt::print(stderr, "error: --prompt or --prompt-file is required\n");
        return kExitValidation;
      }
      if (!prompt_file.empty()) prompt = read_text_file(prompt_file);
      auto config = load_or_default(config_path);
      if (!output_dir.empty()) config.output_dir = output_dir;
      if (config.output_dir.empty()) config.output_dir = "out";
      auto oracle = make_oracle(config, prompt);
      auto result = run_pipeline(config, prompt, *oracle, ProxyRenderer{});
      report_resolve(result);
      fmt::print("wrote {}\n", config.output_dir.string());
    } else if (refine->parsed()) {
      auto config = load_or_default(config_path);
      config.output_dir = output_dir;
      auto graph = load_scene(scene_path);
      auto oracle = make_oracle(config, graph.prompt);
      auto result = refine_graph(config, graph, *oracle, ProxyRenderer{});
      report_resolve(result);
      fmt::print("wrote {}\n", config.output_dir.string());
    } else if (layout->parsed()) {
      auto config = load_or_default(config_path);
      config.output_dir = output_dir;
      auto result = layout_graph(config, load_scene(scene_path), ProxyRenderer{});
      report_resolve(result);
      fmt::print("wrote {}\n", config.output_dir.string());
    } else if (edit->parsed()) {
      std::optional<EditCommand> command;
      if (*add_opt) command = EditCommand::parse(EditCommand::Kind::Add, add_spec);
      if (*remove_opt) command = EditCommand::parse(EditCommand::Kind::Remove, remove_spec);
      if (*move_opt) command = EditCommand::parse(EditCommand::Kind::Move, move_spec);
      if (*rescale_opt) command = EditCommand::parse(EditCommand::Kind::Rescale, rescale_spec);
      if (!command) {
        fmt::print(stderr, "error: one of --add, --remove, --move, --rescale is required\n");
        return kExitValidation;
      }
      auto config = load_or_default(config_path);
      fs::path out = output_dir.empty() ? fs::path(scene_path).parent_path() : fs::path(output_dir);
      auto edited = apply_edit(load_scene(scene_path), *command, config, ProxyRenderer{},
                               default_oracle_factory(config));
      write_artifacts(edited.result, out.empty() ? fs::path(".") : out);
      report_resolve(edited.result);
      std::string affected;
      for (const auto& id : edited.affected) affected += (affected.empty() ? "" : " ") + id;
      fmt::print("affected: {}\n", affected);
    } else if (render->parsed()) {
      auto scene = scene_from_graph(load_scene(scene_path));
      auto view = render_view(scene, parse_viewpoint(view_name));
      if (render_out.empty()) {
        std::cout << view.document;
      } else {
        write_text_file(render_out, view.document);
      }
    } else if (exporter->parsed()) {
      auto text = encode_fscene(assemble_fscene(scene_from_graph(load_scene(scene_path))));
      if (export_out.empty()) {
        std::cout << text;
      } else {
        write_text_file(export_out, text);
      }
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
