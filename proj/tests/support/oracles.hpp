#pragma once

// Reference computations for the tests. Each one is written from the
// definition, independently of the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sumoviz/geometry.hpp"
#include "sumoviz/mesh.hpp"

namespace oracle {

using sumoviz::Vec2;
using sumoviz::Vec3;

/// Centred mean over |j - t| <= (L-1)/2, window clipped at the ends.
inline std::vector<double> windowed_mean(const std::vector<double>& seq, int L) {
  const int n = static_cast<int>(seq.size());
  const int h = (L - 1) / 2;
  std::vector<double> out(seq.size());
  for (int t = 0; t < n; ++t) {
    double sum = 0.0;
    int count = 0;
    for (int j = t - h; j <= t + h; ++j) {
      if (j < 0 || j >= n) continue;
      sum += seq[j];
      ++count;
    }
    out[t] = sum / count;
  }
  return out;
}

/// Piecewise-linear evaluation of (ts, xs) at t; ts strictly increasing.
inline double piecewise_linear(const std::vector<double>& ts, const std::vector<double>& xs,
                               double t) {
  if (t <= ts.front()) return xs.front();
  if (t >= ts.back()) return xs.back();
  std::size_t k = 0;
  while (ts[k + 1] < t) ++k;
  const double f = (t - ts[k]) / (ts[k + 1] - ts[k]);
  return xs[k] + f * (xs[k + 1] - xs[k]);
}

/// Number of elements named `tag` in an XML text (plain text scan).
inline std::size_t count_elements(std::string_view text, std::string_view tag) {
  std::size_t count = 0;
  const std::string open = "<" + std::string(tag);
  for (std::size_t pos = text.find(open); pos != std::string_view::npos;
       pos = text.find(open, pos + 1)) {
    const char next = pos + open.size() < text.size() ? text[pos + open.size()] : '\0';
    if (next == ' ' || next == '>' || next == '/' || next == '\n' || next == '\t') ++count;
  }
  return count;
}

inline double shoelace(const std::vector<Vec2>& poly) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % poly.size()];
    acc += a.x * b.y - b.x * a.y;
  }
  return std::abs(acc) * 0.5;
}

inline double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  double f = len2 > 0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
  f = std::clamp(f, 0.0, 1.0);
  const Vec2 q{a.x + f * ab.x - p.x, a.y + f * ab.y - p.y};
  return std::hypot(q.x, q.y);
}

/// Regular sampling grid over a box; cell centres are the sample points.
struct Grid {
  Vec2 origin;
  double cell = 0.05;
  int nx = 0;
  int ny = 0;

  static Grid around(const std::vector<Vec2>& pts, double margin, double cell) {
    Vec2 lo = pts.front();
    Vec2 hi = pts.front();
    for (Vec2 p : pts) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    Grid g;
    g.origin = {lo.x - margin, lo.y - margin};
    g.cell = cell;
    g.nx = static_cast<int>(std::ceil((hi.x - lo.x + 2 * margin) / cell));
    g.ny = static_cast<int>(std::ceil((hi.y - lo.y + 2 * margin) / cell));
    return g;
  }
  Vec2 point(int i, int j) const { return {origin.x + (i + 0.5) * cell, origin.y + (j + 0.5) * cell}; }
};

/// Grid samples covered by the union of a ground-plane mesh's triangles
/// (render frame: network x = X, network y = -Z).
inline std::vector<std::uint8_t> mesh_coverage(const sumoviz::Mesh& mesh, const Grid& g) {
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(g.nx) * g.ny, 0);
  for (const auto& tri : mesh.triangles) {
    std::array<Vec2, 3> p;
    for (int k = 0; k < 3; ++k) {
      const Vec3 v = mesh.vertices[tri[k]].position;
      p[k] = {v.x, -v.z};
    }
    const double lo_x = std::min({p[0].x, p[1].x, p[2].x});
    const double hi_x = std::max({p[0].x, p[1].x, p[2].x});
    const double lo_y = std::min({p[0].y, p[1].y, p[2].y});
    const double hi_y = std::max({p[0].y, p[1].y, p[2].y});
    const int i0 = std::max(0, static_cast<int>(std::floor((lo_x - g.origin.x) / g.cell)));
    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((hi_x - g.origin.x) / g.cell)));
    const int j0 = std::max(0, static_cast<int>(std::floor((lo_y - g.origin.y) / g.cell)));
    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((hi_y - g.origin.y) / g.cell)));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const Vec2 q = g.point(i, j);
        double s[3];
        for (int k = 0; k < 3; ++k) {
          const Vec2 a = p[k];
          const Vec2 b = p[(k + 1) % 3];
          s[k] = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
        }
        const bool inside = (s[0] >= 0 && s[1] >= 0 && s[2] >= 0) ||
                            (s[0] <= 0 && s[1] <= 0 && s[2] <= 0);
        if (inside) hit[static_cast<std::size_t>(j) * g.nx + i] = 1;
      }
  }
  return hit;
}

/// Ideal ribbon: points within w/2 of a segment whose foot lies on it, plus
/// discs of radius w/2 around interior vertices (the rounded outer bends).
inline bool in_ideal_ribbon(Vec2 q, const std::vector<Vec2>& line, double width) {
  const double h = width / 2;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) {
    const Vec2 a = line[k];
    const Vec2 b = line[k + 1];
    const Vec2 ab = b - a;
    const double len = std::hypot(ab.x, ab.y);
    if (len == 0) continue;
    const double along = ((q.x - a.x) * ab.x + (q.y - a.y) * ab.y) / len;
    const double across = ((q.y - a.y) * ab.x - (q.x - a.x) * ab.y) / len;
    if (along >= 0 && along <= len && std::abs(across) <= h) return true;
  }
  for (std::size_t k = 1; k + 1 < line.size(); ++k)
    if (std::hypot(q.x - line[k].x, q.y - line[k].y) <= h) return true;
  return false;
}

struct CoverageComparison {
  double mesh_area = 0.0;
  double ideal_area = 0.0;
  double symmetric_difference = 0.0;
};

inline CoverageComparison compare_ribbon(const sumoviz::Mesh& mesh, const std::vector<Vec2>& line,
                                         double width, double cell) {
  const Grid g = Grid::around(line, width, cell);
  const auto hit = mesh_coverage(mesh, g);
  CoverageComparison c;
  const double a = cell * cell;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const bool m = hit[static_cast<std::size_t>(j) * g.nx + i] != 0;
      const bool ideal = in_ideal_ribbon(g.point(i, j), line, width);
      c.mesh_area += m ? a : 0.0;
      c.ideal_area += ideal ? a : 0.0;
      c.symmetric_difference += (m != ideal) ? a : 0.0;
    }
  return c;
}

/// Random polyline whose heading stays within +-75 degrees of +x, so the
/// centre line never doubles back on itself.
inline std::vector<Vec2> random_polyline(std::mt19937_64& rng, int max_points, double min_seg) {
  std::uniform_int_distribution<int> count(2, max_points);
  std::uniform_real_distribution<double> seg(min_seg, 4 * min_seg);
  std::uniform_real_distribution<double> turn(-60.0, 60.0);
  std::uniform_real_distribution<double> origin(-50.0, 50.0);
  const int n = count(rng);
  std::vector<Vec2> pts{{origin(rng), origin(rng)}};
  double heading = 0.0;
  for (int i = 1; i < n; ++i) {
    heading = std::clamp(heading + turn(rng), -75.0, 75.0);
    const double r = heading * std::numbers::pi / 180.0;
    const double l = seg(rng);
    pts.push_back({pts.back().x + l * std::cos(r), pts.back().y + l * std::sin(r)});
  }
  return pts;
}

/// Exact turning angle (radians) at each interior vertex.
inline double total_turn(const std::vector<Vec2>& line) {
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < line.size(); ++k) {
    const Vec2 u = line[k] - line[k - 1];
    const Vec2 v = line[k + 1] - line[k];
    sum += std::abs(std::atan2(u.x * v.y - u.y * v.x, u.x * v.x + u.y * v.y));
  }
  return sum;
}

/// View depth at a screen point from three screen-space vertices carrying
/// view depths: 1/depth is affine in screen space.
inline double perspective_depth(std::array<Vec2, 3> s, std::array<double, 3> depth, Vec2 p) {
  const double area = (s[1].x - s[0].x) * (s[2].y - s[0].y) - (s[2].x - s[0].x) * (s[1].y - s[0].y);
  const double b0 = ((s[1].x - p.x) * (s[2].y - p.y) - (s[2].x - p.x) * (s[1].y - p.y)) / area;
  const double b1 = ((s[2].x - p.x) * (s[0].y - p.y) - (s[0].x - p.x) * (s[2].y - p.y)) / area;
  const double b2 = 1.0 - b0 - b1;
  return 1.0 / (b0 / depth[0] + b1 / depth[1] + b2 / depth[2]);
}

/// Strict point-in-triangle test; returns false on the boundary.
inline bool strictly_inside(std::array<Vec2, 3> t, Vec2 p) {
  double s[3];
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = t[k];
    const Vec2 b = t[(k + 1) % 3];
    s[k] = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  }
  return (s[0] > 0 && s[1] > 0 && s[2] > 0) || (s[0] < 0 && s[1] < 0 && s[2] < 0);
}

/// Signed distance-like edge value of p against edge (a, b).
inline double edge_value(Vec2 a, Vec2 b, Vec2 p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

/// Rotation about +Y by phi (radians), right-handed.
inline Vec3 rotate_y(Vec3 v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

}  // namespace oracle
