#include "sumoviz/raster.hpp"

#include <algorithm>
#include <cmath>

#include "sumoviz/error.hpp"

namespace sumoviz {
namespace {

constexpr std::int64_t kOne = std::int64_t{1} << kSubpixelBits;
constexpr std::int64_t kHalf = kOne / 2;

struct FixedPoint {
  std::int64_t x;
  std::int64_t y;
};

FixedPoint snap(Vec2 p) {
  return {static_cast<std::int64_t>(std::llround(p.x * static_cast<double>(kOne))),
          static_cast<std::int64_t>(std::llround(p.y * static_cast<double>(kOne)))};
}

std::int64_t edge_value(FixedPoint a, FixedPoint b, std::int64_t px, std::int64_t py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

/// With positive orientation in y-down screen space, the interior lies where
/// every edge function is >= 0. Top edges run in +x and are horizontal; left
/// edges run upwards (dy < 0).
bool is_top_left(FixedPoint a, FixedPoint b) {
  const std::int64_t dx = b.x - a.x;
  const std::int64_t dy = b.y - a.y;
  return (dy == 0 && dx > 0) || dy < 0;
}

/// Calls visit(x, y, w) for every covered pixel, where w[k] is the
/// barycentric weight of input vertex k.
template <class Visit>
void scan(int width, int height, std::array<FixedPoint, 3> v, Visit&& visit) {
  std::array<int, 3> order{0, 1, 2};
  std::int64_t area = edge_value(v[0], v[1], v[2].x, v[2].y);
  if (area == 0) return;
  if (area < 0) {
    std::swap(v[1], v[2]);
    std::swap(order[1], order[2]);
    area = -area;
  }

  const std::int64_t min_x = std::min({v[0].x, v[1].x, v[2].x});
  const std::int64_t max_x = std::max({v[0].x, v[1].x, v[2].x});
  const std::int64_t min_y = std::min({v[0].y, v[1].y, v[2].y});
  const std::int64_t max_y = std::max({v[0].y, v[1].y, v[2].y});
  // Pixel x has its centre at x * kOne + kHalf.
  auto first_pixel = [](std::int64_t lo) {
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(lo - kHalf) / kOne));
  };
  auto last_pixel = [](std::int64_t hi) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(hi - kHalf) / kOne));
  };
  const std::int64_t x0 = std::max<std::int64_t>(0, first_pixel(min_x));
  const std::int64_t x1 = std::min<std::int64_t>(width - 1, last_pixel(max_x));
  const std::int64_t y0 = std::max<std::int64_t>(0, first_pixel(min_y));
  const std::int64_t y1 = std::min<std::int64_t>(height - 1, last_pixel(max_y));
  if (x0 > x1 || y0 > y1) return;

  std::array<std::int64_t, 3> row_start{};
  std::array<std::int64_t, 3> step_x{};
  std::array<std::int64_t, 3> step_y{};
  std::array<std::int64_t, 3> bias{};
  const std::int64_t px = x0 * kOne + kHalf;
  const std::int64_t py = y0 * kOne + kHalf;
  for (int i = 0; i < 3; ++i) {
    const FixedPoint a = v[i];
    const FixedPoint b = v[(i + 1) % 3];
    row_start[i] = edge_value(a, b, px, py);
    step_x[i] = -(b.y - a.y) * kOne;
    step_y[i] = (b.x - a.x) * kOne;
    bias[i] = is_top_left(a, b) ? 0 : -1;
  }

  const double inv_area = 1.0 / static_cast<double>(area);
  for (std::int64_t y = y0; y <= y1; ++y) {
    std::array<std::int64_t, 3> e = row_start;
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (e[0] + bias[0] >= 0 && e[1] + bias[1] >= 0 && e[2] + bias[2] >= 0) {
        // Edge i (v[i] -> v[i+1]) weights the opposite vertex v[i+2].
        std::array<double, 3> w{};
        w[order[2]] = static_cast<double>(e[0]) * inv_area;
        w[order[0]] = static_cast<double>(e[1]) * inv_area;
        w[order[1]] = static_cast<double>(e[2]) * inv_area;
        visit(static_cast<int>(x), static_cast<int>(y), w);
      }
      for (int i = 0; i < 3; ++i) e[i] += step_x[i];
    }
    for (int i = 0; i < 3; ++i) row_start[i] += step_y[i];
  }
}

struct ClipVertex {
  double x, y, w, u, v;
};

ClipVertex lerp(const ClipVertex& a, const ClipVertex& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.w + (b.w - a.w) * t,
          a.u + (b.u - a.u) * t, a.v + (b.v - a.v) * t};
}

constexpr std::size_t kMaxClipVertices = 12;

struct ClipPolygon {
  std::array<ClipVertex, kMaxClipVertices> v;
  std::size_t size = 0;
};

/// Sutherland-Hodgman against distance(v) >= 0. Intersections are always
/// interpolated from the inside endpoint, so a shared edge clips to the same
/// point in both of its triangles.
template <class Distance>
ClipPolygon clip(const ClipPolygon& in, Distance distance) {
  ClipPolygon out;
  for (std::size_t i = 0; i < in.size; ++i) {
    const ClipVertex& a = in.v[i];
    const ClipVertex& b = in.v[(i + 1) % in.size];
    const double da = distance(a);
    const double db = distance(b);
    if (da >= 0.0) out.v[out.size++] = a;
    if ((da >= 0.0) != (db >= 0.0)) {
      out.v[out.size++] = da >= 0.0 ? lerp(a, b, da / (da - db)) : lerp(b, a, db / (db - da));
    }
  }
  return out;
}

std::uint8_t shade_channel(std::uint8_t c, double shade) {
  const double v = c * shade;
  return static_cast<std::uint8_t>(v >= 255.0 ? 255 : static_cast<int>(v + 0.5));
}

}  // namespace

FrameBuffer::FrameBuffer(int w, int h, double near_plane, double far_plane)
    : width(w), height(h), near(near_plane), far(far_plane), color(w, h) {
  if (!(near > 0.0 && near < far)) throw ContractError("frame buffer needs 0 < near < far");
  depth.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), far);
}

Vec2 clip_to_screen(double x, double y, double w, int width, int height) {
  return {(x / w + 1.0) * 0.5 * width, (1.0 - y / w) * 0.5 * height};
}

Rgb sample_texture(const Texture& texture, Vec2 uv, TextureWrap wrap) {
  const int W = texture.width;
  const int H = texture.height;
  const double fx = (uv.x - std::floor(uv.x)) * W;
  double fy;
  if (wrap == TextureWrap::repeat) {
    fy = (uv.y - std::floor(uv.y)) * H;
  } else {
    fy = std::clamp(uv.y, 0.0, 1.0) * H;
  }
  int x0 = static_cast<int>(std::floor(fx));
  int y0 = static_cast<int>(std::floor(fy));
  const double tx = fx - x0;
  const double ty = fy - y0;
  x0 = ((x0 % W) + W) % W;
  const int x1 = (x0 + 1) % W;
  int y1;
  if (wrap == TextureWrap::repeat) {
    y0 = ((y0 % H) + H) % H;
    y1 = (y0 + 1) % H;
  } else {
    y0 = std::clamp(y0, 0, H - 1);
    y1 = std::min(y0 + 1, H - 1);
  }
  const Rgb c00 = texture.at(x0, y0), c10 = texture.at(x1, y0);
  const Rgb c01 = texture.at(x0, y1), c11 = texture.at(x1, y1);
  auto blend = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    const double top = a + (b - a) * tx;
    const double bottom = c + (d - c) * tx;
    return static_cast<std::uint8_t>(std::lround(top + (bottom - top) * ty));
  };
  return {blend(c00.r, c10.r, c01.r, c11.r), blend(c00.g, c10.g, c01.g, c11.g),
          blend(c00.b, c10.b, c01.b, c11.b)};
}

Vec2 sky_uv(Vec3 direction) {
  const double n = length(direction);
  double azimuth = std::atan2(direction.x, -direction.z);
  if (azimuth < 0.0) azimuth += 2.0 * std::numbers::pi;
  const double elevation = std::asin(std::clamp(direction.y / n, -1.0, 1.0));
  return {azimuth / (2.0 * std::numbers::pi), 0.5 - elevation / std::numbers::pi};
}

Rgb sample_sky(const Texture& texture, Vec3 direction) {
  return sample_texture(texture, sky_uv(direction), TextureWrap::repeat_u_clamp_v);
}

double lambert(Vec3 normal, Vec3 light_direction, double intensity) {
  const Vec3 to_light = -normalized(light_direction);
  return 0.35 + 0.65 * std::max(0.0, dot(normalized(normal), to_light)) * intensity;
}

void for_each_covered_pixel(int width, int height, std::array<Vec2, 3> screen,
                            const std::function<void(int, int, std::array<double, 3>)>& visit) {
  scan(width, height, {snap(screen[0]), snap(screen[1]), snap(screen[2])},
       [&](int x, int y, const std::array<double, 3>& w) { visit(x, y, w); });
}

void rasterize_triangle(FrameBuffer& fb, std::span<const RasterVertex, 3> tri,
                        const RasterMaterial& material) {
  ClipPolygon poly;
  for (const auto& rv : tri) poly.v[poly.size++] = {rv.x, rv.y, rv.w, rv.uv.x, rv.uv.y};

  const double near = fb.near;
  const double far = fb.far;
  auto all_inside = [&](const ClipPolygon& p) {
    for (std::size_t i = 0; i < p.size; ++i) {
      const auto& c = p.v[i];
      if (c.w < near || c.w > far || c.x < -c.w || c.x > c.w || c.y < -c.w || c.y > c.w)
        return false;
    }
    return true;
  };
  if (!all_inside(poly)) {
    poly = clip(poly, [&](const ClipVertex& c) { return c.w - near; });
    if (poly.size >= 3) poly = clip(poly, [&](const ClipVertex& c) { return far - c.w; });
    if (poly.size >= 3) poly = clip(poly, [](const ClipVertex& c) { return c.w + c.x; });
    if (poly.size >= 3) poly = clip(poly, [](const ClipVertex& c) { return c.w - c.x; });
    if (poly.size >= 3) poly = clip(poly, [](const ClipVertex& c) { return c.w + c.y; });
    if (poly.size >= 3) poly = clip(poly, [](const ClipVertex& c) { return c.w - c.y; });
    if (poly.size < 3) return;
  }

  std::array<FixedPoint, kMaxClipVertices> screen{};
  std::array<double, kMaxClipVertices> inv_w{};
  for (std::size_t i = 0; i < poly.size; ++i) {
    const auto& c = poly.v[i];
    screen[i] = snap(clip_to_screen(c.x, c.y, c.w, fb.width, fb.height));
    inv_w[i] = 1.0 / c.w;
  }

  if (material.cull_back) {
    // Front faces wind counter-clockwise in view space, i.e. negative area
    // once y points down.
    std::int64_t twice_area = 0;
    for (std::size_t i = 0; i < poly.size; ++i) {
      const auto& a = screen[i];
      const auto& b = screen[(i + 1) % poly.size];
      twice_area += a.x * b.y - b.x * a.y;
    }
    if (twice_area >= 0) return;
  }

  const Rgb flat{shade_channel(material.color.r, material.shade),
                 shade_channel(material.color.g, material.shade),
                 shade_channel(material.color.b, material.shade)};
  for (std::size_t k = 1; k + 1 < poly.size; ++k) {
    const std::size_t idx[3] = {0, k, k + 1};
    scan(fb.width, fb.height, {screen[idx[0]], screen[idx[1]], screen[idx[2]]},
         [&](int x, int y, const std::array<double, 3>& w) {
           const double iw = w[0] * inv_w[idx[0]] + w[1] * inv_w[idx[1]] + w[2] * inv_w[idx[2]];
           if (!(iw > 0.0)) return;
           const double depth = 1.0 / iw;
           const std::size_t p = static_cast<std::size_t>(y) * static_cast<std::size_t>(fb.width) +
                                 static_cast<std::size_t>(x);
           if (!(depth < fb.depth[p])) return;
           fb.depth[p] = depth;
           if (material.texture) {
             Vec2 uv{};
             for (int j = 0; j < 3; ++j) {
               const auto& c = poly.v[idx[j]];
               uv.x += w[j] * c.u * inv_w[idx[j]];
               uv.y += w[j] * c.v * inv_w[idx[j]];
             }
             const Rgb t = sample_texture(*material.texture, uv * depth);
             fb.color.set(x, y, {shade_channel(t.r, material.shade), shade_channel(t.g, material.shade),
                                 shade_channel(t.b, material.shade)});
           } else {
             fb.color.set(x, y, flat);
           }
         });
  }
}

}  // namespace sumoviz
