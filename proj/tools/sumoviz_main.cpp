// sumoviz: render frame sequences, export scene bundles, inspect inputs.

#include <CLI11.hpp>

#include <iostream>

#include "sumoviz/config.hpp"
#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"
#include "sumoviz/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SUMO 3D visualisation: batch renderer and scene exporter"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "YAML job file")->required();
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  auto* render = app.add_subcommand("render", "Render the frame sequence");
  std::optional<unsigned> threads;
  bool raw_stream = false;
  std::string encoder;
  render->add_option("--threads", threads, "Worker threads (0: all cores)");
  render->add_flag("--raw-stream", raw_stream, "Also stream raw RGB24 frames");
  render->add_option("--encoder", encoder,
                     "Shell command fed the raw stream on stdin (default: stdout)");
  bool no_frames = false;
  render->add_flag("--no-frames", no_frames, "Skip writing PNG files");

  auto* export_cmd = app.add_subcommand("export", "Export a scene bundle");
  std::string bundle_dir;
  export_cmd->add_option("-o,--output", bundle_dir, "Bundle directory (overrides output.bundle)");

  app.add_subcommand("info", "Print network and log statistics");

  CLI11_PARSE(app, argc, argv);

  using namespace sumoviz;
  if (verbose) log::set_min_level(log::Level::info);
  if (quiet) log::set_min_level(log::Level::error);

  try {
    RenderJob job = load_config_file(config_path);
    if (render->parsed()) {
      if (threads) job.threads = *threads;
      if (raw_stream) job.output.raw_stream = true;
      if (!encoder.empty()) job.output.encoder = encoder;
      if (no_frames) job.output.write_frames = false;
      const SequenceResult result = render_sequence(job);
      log::info("rendered " + std::to_string(result.frames_rendered) + " of " +
                std::to_string(result.frame_count) + " frames, " +
                std::to_string(result.skipped.size()) + " skipped");
      if (!result.ok()) {
        log::error(std::to_string(result.failed.size()) + " frame(s) failed");
        return 3;
      }
    } else if (export_cmd->parsed()) {
      if (!bundle_dir.empty()) job.output.bundle = bundle_dir;
      export_bundle(job);
      log::info("bundle written to " + job.output.bundle->string());
    } else {
      print_info(job, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "sumoviz: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
