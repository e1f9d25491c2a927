#pragma once

// End-to-end orchestration: parse -> smooth -> build -> render/export.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sumoviz/config.hpp"
#include "sumoviz/ingest.hpp"
#include "sumoviz/scene.hpp"
#include "sumoviz/signals.hpp"

namespace sumoviz {

struct LoadedInputs {
  RoadNetwork network;
  TrajectoryLog fcd;
  SignalStateLog tls;
  PoiSet pois;
  nlohmann::json digests;  // role -> {path, sha256}
};

/// Reads and parses every input of the job.
LoadedInputs load_inputs(const RenderJob& job);

struct PreparedJob {
  LoadedInputs inputs;
  SceneGraph scene;
  SignalTimeline timeline;
  double begin = 0.0;
  double end = 0.0;
  double load_seconds = 0.0;
  double build_seconds = 0.0;
};

/// Loads, smooths and builds the scene. The time window defaults to the
/// span of the trajectory log.
PreparedJob prepare_job(const RenderJob& job);

/// Frame times begin + n / fps covering [begin, end].
std::vector<double> frame_times(double begin, double end, double fps);

std::string frame_file_name(std::size_t index);

struct SkippedFrame {
  std::size_t index = 0;
  double t = 0.0;
  std::string reason;
};

struct SequenceResult {
  std::size_t frame_count = 0;
  std::size_t frames_rendered = 0;
  std::vector<SkippedFrame> skipped;  // followed vehicle absent
  std::vector<SkippedFrame> failed;
  nlohmann::json manifest;

  bool ok() const { return failed.empty(); }
};

/// Renders every frame of the window with a worker pool and writes PNG files
/// plus the run manifest. Throws RenderError before rendering when a followed
/// vehicle is absent for the whole window.
SequenceResult render_sequence(const RenderJob& job);

/// Writes the scene bundle to job.output.bundle and returns its manifest.
nlohmann::json export_bundle(const RenderJob& job);

/// Network and log statistics for the `info` verb.
void print_info(const RenderJob& job, std::ostream& out);

/// Process exit code for an exception escaping a verb: 1 config, 2 input
/// parse, 3 render.
int exit_code_for(const std::exception& e);

}  // namespace sumoviz
