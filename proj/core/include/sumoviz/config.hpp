#pragma once

// Render job configuration (YAML). Sections: inputs, time, smoothing,
// render, output. Camera coordinates are given in the network frame as
// [x, y, height] and converted to the render frame on load.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sumoviz/camera.hpp"
#include "sumoviz/signals.hpp"
#include "sumoviz/smoothing.hpp"

namespace sumoviz {

struct InputPaths {
  std::filesystem::path net;
  std::filesystem::path fcd;
  std::optional<std::filesystem::path> tls;
  std::optional<std::filesystem::path> pois;
};

struct TimeWindow {
  std::optional<double> begin;  // defaults to the trajectory log's span
  std::optional<double> end;
};

struct VisualParams {
  int width = 1280;
  int height = 720;
  std::string sky = "sky_blue";
  std::string ground = "ground_grass";
  double ground_tile = 8.0;
  std::uint64_t seed = 0;
  double yellow_duration = 3.0;
  std::optional<std::filesystem::path> asset_dir;
};

struct OutputSpec {
  std::filesystem::path frames_dir = "frames";
  std::optional<std::filesystem::path> manifest;  // defaults to <frames_dir>/manifest.json
  std::optional<std::filesystem::path> bundle;
  std::optional<std::filesystem::path> tracks_csv;
  bool raw_stream = false;  // raw RGB24 frames to stdout or the encoder
  std::string encoder;      // shell command fed on stdin; empty: stdout
  bool write_frames = true;
};

struct RenderJob {
  InputPaths inputs;
  TimeWindow time;
  SmoothingParams smoothing;  // smoothing.fps is also the frame rate
  CameraParams camera;
  VisualParams visual;
  OutputSpec output;
  unsigned threads = 0;  // 0: available parallelism

  double fps() const { return smoothing.fps; }
};

/// Parses a YAML job. Relative paths resolve against base_dir. Throws
/// ConfigError naming the offending key.
RenderJob load_config(std::string_view yaml_text, const std::filesystem::path& base_dir = {});
RenderJob load_config_file(const std::filesystem::path& path);

std::string_view to_string(CameraMode mode);

}  // namespace sumoviz
