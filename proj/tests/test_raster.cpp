#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sumoviz/raster.hpp"

using namespace sumoviz;

namespace {

int written_count(const FrameBuffer& fb) {
  int n = 0;
  for (int y = 0; y < fb.height; ++y)
    for (int x = 0; x < fb.width; ++x) n += fb.written(x, y);
  return n;
}

Vec2 grid_point(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> d(0, size * 256);
  return {d(rng) / 256.0, d(rng) / 256.0};
}

}  // namespace

TEST(Raster, HalfViewportTriangle) {
  FrameBuffer fb(100, 100, 0.1, 100);
  const std::array<RasterVertex, 3> tri{{{-1, 1, 1}, {1, 1, 1}, {-1, -1, 1}}};
  rasterize_triangle(fb, tri, {});
  EXPECT_NEAR(written_count(fb), 5050, 100);
  EXPECT_TRUE(fb.written(0, 0));
  EXPECT_FALSE(fb.written(99, 99));
}

TEST(Raster, ZeroAreaWritesNothing) {
  FrameBuffer fb(50, 50);
  const std::array<RasterVertex, 3> tri{{{-0.5, 0, 1}, {0, 0, 1}, {0.5, 0, 1}}};
  rasterize_triangle(fb, tri, {});
  EXPECT_EQ(written_count(fb), 0);
  int visits = 0;
  for_each_covered_pixel(50, 50, {Vec2{1, 1}, Vec2{10, 10}, Vec2{20, 20}},
                         [&](int, int, std::array<double, 3>) { ++visits; });
  EXPECT_EQ(visits, 0);
}

TEST(Raster, SharedEdgesAreWatertight) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec2 a = grid_point(rng, 40), b = grid_point(rng, 40), c = grid_point(rng, 40);
    Vec2 d = grid_point(rng, 40);
    // d must sit on the far side of edge bc from a.
    if (oracle::edge_value(b, c, a) * oracle::edge_value(b, c, d) >= 0) d = b + c - d;  // reflect through the edge midpoint
    if (oracle::edge_value(b, c, a) * oracle::edge_value(b, c, d) >= 0) continue;
    std::vector<int> count(40 * 40, 0);
    auto tally = [&](int x, int y, std::array<double, 3>) { ++count[y * 40 + x]; };
    for_each_covered_pixel(40, 40, {a, b, c}, tally);
    for_each_covered_pixel(40, 40, {c, b, d}, tally);
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 40; ++x) {
        const Vec2 q{x + 0.5, y + 0.5};
        const int n = count[y * 40 + x];
        EXPECT_LE(n, 1) << "double cover at " << x << "," << y;
        if (oracle::strictly_inside({a, b, c}, q) || oracle::strictly_inside({c, b, d}, q))
          EXPECT_EQ(n, 1) << "gap at " << x << "," << y;
        // Centres exactly on the interior of the shared edge belong to one side.
        if (oracle::edge_value(b, c, q) == 0 && oracle::dist_to_segment(q, b, c) == 0 && q != b &&
            q != c)
          EXPECT_EQ(n, 1) << "shared edge pixel " << x << "," << y;
      }
  }
}

TEST(Raster, NearerSurfaceWins) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> depth(0.5, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double d1 = depth(rng);
    const double d2 = depth(rng);
    if (d1 == d2) continue;
    FrameBuffer fb(32, 32, 0.1, 100);
    auto quad = [&](double w, Rgb color) {
      // Full-screen triangle at constant depth w.
      const std::array<RasterVertex, 3> tri{{{-w, -w, w}, {3 * w, -w, w}, {-w, 3 * w, w}}};
      RasterMaterial m;
      m.color = color;
      rasterize_triangle(fb, tri, m);
    };
    const bool first_near = rng() & 1;
    const double near_d = std::min(d1, d2), far_d = std::max(d1, d2);
    if (first_near) {
      quad(near_d, {255, 0, 0});
      quad(far_d, {0, 0, 255});
    } else {
      quad(far_d, {0, 0, 255});
      quad(near_d, {255, 0, 0});
    }
    EXPECT_EQ(fb.color.at(16, 16), (Rgb{255, 0, 0}));
    EXPECT_NEAR(fb.depth_at(16, 16), near_d, 1e-9 * near_d);
  }
}

TEST(Raster, DepthIsPerspectiveCorrect) {
  FrameBuffer fb(64, 64, 0.1, 100);
  const std::array<RasterVertex, 3> tri{{{-2, -2, 2}, {8, -8, 8}, {-4, 4, 4}}};
  rasterize_triangle(fb, tri, {});
  std::array<Vec2, 3> s;
  for (int k = 0; k < 3; ++k) s[k] = clip_to_screen(tri[k].x, tri[k].y, tri[k].w, 64, 64);
  int checked = 0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      if (!fb.written(x, y)) continue;
      const double want = oracle::perspective_depth(s, {2, 8, 4}, {x + 0.5, y + 0.5});
      EXPECT_NEAR(fb.depth_at(x, y), want, 0.02 * want);
      ++checked;
    }
  EXPECT_GT(checked, 100);
}

TEST(Raster, NearPlaneClipping) {
  FrameBuffer fb(32, 32, 1.0, 100);
  // One vertex behind the camera; the rest of the triangle is still drawn.
  const std::array<RasterVertex, 3> tri{{{-1, -1, 2}, {1, -1, 2}, {0, 1, -1}}};
  rasterize_triangle(fb, tri, {});
  EXPECT_GT(written_count(fb), 0);
  for (double d : fb.depth) EXPECT_GE(d, 1.0 - 1e-9);
}

TEST(Raster, BackFaceCulling) {
  FrameBuffer fb(32, 32);
  RasterMaterial m;
  m.cull_back = true;
  const std::array<RasterVertex, 3> ccw{{{-1, -1, 1}, {1, -1, 1}, {0, 1, 1}}};
  const std::array<RasterVertex, 3> cw{{{-1, -1, 1}, {0, 1, 1}, {1, -1, 1}}};
  rasterize_triangle(fb, cw, m);
  EXPECT_EQ(written_count(fb), 0);
  rasterize_triangle(fb, ccw, m);
  EXPECT_GT(written_count(fb), 0);
}

TEST(Raster, ScreenMapping) {
  const Vec2 centre = clip_to_screen(0, 0, 5, 640, 480);
  EXPECT_EQ(centre, (Vec2{320, 240}));
  EXPECT_EQ(clip_to_screen(-1, 1, 1, 640, 480), (Vec2{0, 0}));
}

TEST(Texture, TexelCentresAndWrap) {
  Texture t(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) t.set(x, y, {std::uint8_t(x * 60), std::uint8_t(y * 60), 7});
  EXPECT_EQ(sample_texture(t, {0, 0}), t.at(0, 0));
  EXPECT_EQ(sample_texture(t, {0.25, 0.5}), t.at(1, 2));
  EXPECT_EQ(sample_texture(t, {1.25, 0.5}), sample_texture(t, {0.25, 0.5}));
  EXPECT_EQ(sample_texture(t, {-0.75, 0.5}), sample_texture(t, {0.25, 0.5}));
  // Halfway between texels 1 and 2 in u.
  EXPECT_EQ(sample_texture(t, {0.375, 0.0}).r, 90);
}

TEST(Texture, SkyMapping) {
  EXPECT_NEAR(sky_uv({0, 1, 0}).y, 0.0, 1e-12);
  EXPECT_NEAR(sky_uv({0, -1, 0}).y, 1.0, 1e-12);
  EXPECT_NEAR(sky_uv({0, 0, -1}).x, 0.0, 1e-12);   // north
  EXPECT_NEAR(sky_uv({1, 0, 0}).x, 0.25, 1e-12);   // east
  EXPECT_NEAR(sky_uv({0, 0, 1}).x, 0.5, 1e-12);    // south
  EXPECT_NEAR(sky_uv({1, 0, 0}).y, 0.5, 1e-12);
  Texture t(8, 4);
  for (int x = 0; x < 8; ++x) t.set(x, 0, {200, 10, 10});
  EXPECT_EQ(sample_sky(t, {0, 1, 0}), (Rgb{200, 10, 10}));
}

TEST(Lighting, Lambert) {
  const Vec3 down{0, -1, 0};
  EXPECT_NEAR(lambert({0, 1, 0}, down), 1.0, 1e-12);
  EXPECT_NEAR(lambert({0, -1, 0}, down), 0.35, 1e-12);
  EXPECT_NEAR(lambert({1, 0, 0}, down), 0.35, 1e-12);
}
