#pragma once

// Shared scenarios for the unit tests and the acceptance runner.

#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "sumoviz/camera.hpp"
#include "sumoviz/config.hpp"
#include "sumoviz/scene.hpp"
#include "sumoviz/signals.hpp"

namespace testing_support {

std::filesystem::path fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Synthetic crossing (4 edges, 10 vehicles) rendered for 5 s at 25 fps,
/// 320x180, seed 0, from a fixed elevated camera. Inputs go to dir.
sumoviz::RenderJob reference_job(const std::filesystem::path& dir);

/// Manifest without the wall-clock section.
nlohmann::json without_timing(nlohmann::json manifest);

struct DeskScene {
  sumoviz::SceneGraph scene;
  sumoviz::SignalTimeline timeline;
  sumoviz::Camera camera;
  double t = 0.0;
};

/// Crossing with 50 vehicles (all on the road at t) and enough scenery for
/// at least 10 000 triangles, viewed at 1280x720.
DeskScene desk_scene();

}  // namespace testing_support
