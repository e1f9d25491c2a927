#pragma once

#include <cstddef>

#include "sumoviz/camera.hpp"
#include "sumoviz/raster.hpp"
#include "sumoviz/scene.hpp"
#include "sumoviz/signals.hpp"

namespace sumoviz {

inline constexpr int kDefaultWidth = 1280;
inline constexpr int kDefaultHeight = 720;

struct SignalDisplay {
  const SignalTimeline* timeline = nullptr;  // null: every head dark
  double yellow_duration = 3.0;
};

struct RenderStats {
  std::size_t triangles_submitted = 0;
  std::size_t vehicles_drawn = 0;
  std::size_t signal_heads_drawn = 0;
  std::size_t static_objects_drawn = 0;
};

/// Draws one frame. Vehicles use the track sample at or before t and are
/// omitted outside their lifespan. Output depends only on the arguments.
FrameBuffer render_frame(const SceneGraph& scene, const Camera& camera, double t,
                         const SignalDisplay& signals, int width = kDefaultWidth,
                         int height = kDefaultHeight, RenderStats* stats = nullptr);

}  // namespace sumoviz
