#pragma once

// Z-buffered triangle rasterization in 8-bit fixed point with a top-left
// fill rule, so triangles sharing an edge never double-cover or leave gaps.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sumoviz/geometry.hpp"
#include "sumoviz/image.hpp"

namespace sumoviz {

inline constexpr int kSubpixelBits = 8;

struct FrameBuffer {
  int width = 0;
  int height = 0;
  double near = 0.3;
  double far = 5000.0;
  Image color;
  std::vector<double> depth;  // view depth, initialised to far

  FrameBuffer(int w, int h, double near_plane = 0.3, double far_plane = 5000.0);

  double depth_at(int x, int y) const {
    return depth[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)];
  }
  bool written(int x, int y) const { return depth_at(x, y) < far; }
};

/// Clip-space vertex: x, y in [-w, w] are on screen; w is the view depth.
struct RasterVertex {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  Vec2 uv;
};

enum class TextureWrap { repeat, repeat_u_clamp_v };

struct RasterMaterial {
  Rgb color{255, 255, 255};
  const Texture* texture = nullptr;  // overrides color when set
  double shade = 1.0;                // lighting factor applied to color or texel
  bool cull_back = false;
};

/// Bilinear lookup with texel i spanning [i/W, (i+1)/W).
Rgb sample_texture(const Texture& texture, Vec2 uv, TextureWrap wrap = TextureWrap::repeat);

/// Equirectangular lookup: u = azimuth / 2pi (from north, clockwise),
/// v = 0.5 - elevation / pi.
Rgb sample_sky(const Texture& texture, Vec3 direction);
Vec2 sky_uv(Vec3 direction);

/// Lambert with ambient: 0.35 + 0.65 * max(0, n . l) * intensity, where l
/// points from the surface toward the light.
double lambert(Vec3 normal, Vec3 light_direction, double intensity = 1.0);

/// Clips the triangle to the view frustum, then scan-converts it with a
/// strict-less depth test.
void rasterize_triangle(FrameBuffer& fb, std::span<const RasterVertex, 3> tri,
                        const RasterMaterial& material);

/// Pixels whose centres a screen-space triangle covers (top-left rule), with
/// barycentric weights. Vertices are snapped to the subpixel grid first.
/// Winding is irrelevant; degenerate triangles visit nothing.
void for_each_covered_pixel(int width, int height, std::array<Vec2, 3> screen,
                            const std::function<void(int, int, std::array<double, 3>)>& visit);

/// Screen position (pixels, row 0 at the top) of a clip-space point.
Vec2 clip_to_screen(double x, double y, double w, int width, int height);

}  // namespace sumoviz
