#include "sumoviz/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"

namespace sumoviz {
namespace {

constexpr double kMinSegment = 1e-9;
constexpr double kMaxFanStep = deg_to_rad(15.0);
constexpr double kMaxMiter = 4.0;

Vec2 left_normal(Vec2 dir) { return {-dir.y, dir.x}; }

Vec2 unit(Vec2 v) {
  const double n = length(v);
  return n > 0.0 ? v * (1.0 / n) : v;
}

Vertex ground_vertex(Vec2 p) { return {to_world(p, 0.0), {0.0, 1.0, 0.0}, {}}; }

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Polyline drop_short_segments(const Polyline& shape) {
  Polyline pts;
  pts.reserve(shape.size());
  for (const auto& p : shape) {
    if (!pts.empty() && length(p - pts.back()) <= kMinSegment) {
      log::warn("ribbon: skipping zero-length segment");
      continue;
    }
    pts.push_back(p);
  }
  return pts;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

bool self_intersecting(const Polygon& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return true;
    }
  }
  return false;
}

/// Removes repeated and collinear vertices; the enclosed area is unchanged.
Polygon clean_polygon(const Polygon& shape) {
  Polygon pts;
  for (const auto& p : shape)
    if (pts.empty() || length(p - pts.back()) > kMinSegment) pts.push_back(p);
  while (pts.size() > 1 && length(pts.front() - pts.back()) <= kMinSegment) pts.pop_back();

  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 prev = pts[(i + pts.size() - 1) % pts.size()];
      const Vec2 next = pts[(i + 1) % pts.size()];
      const Vec2 a = pts[i] - prev;
      const Vec2 b = next - pts[i];
      if (std::abs(cross(a, b)) <= 1e-12 * length(a) * length(b) && dot(a, b) > 0.0) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

bool inside_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

Mesh centroid_fan(const Polygon& poly) {
  Mesh mesh;
  Vec2 centroid{};
  for (const auto& p : poly) centroid = centroid + p;
  centroid = centroid * (1.0 / static_cast<double>(poly.size()));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Vec2 a = poly[i];
    Vec2 b = poly[(i + 1) % poly.size()];
    if (cross(a - centroid, b - centroid) < 0.0) std::swap(a, b);
    mesh.add_triangle(ground_vertex(centroid), ground_vertex(a), ground_vertex(b));
  }
  return mesh;
}

}  // namespace

Mesh tessellate_lane_ribbon(const Polyline& shape, double width) {
  if (shape.size() < 2) throw ContractError("ribbon: polyline needs at least 2 points");
  if (!(width > 0.0)) throw ContractError("ribbon: width must be positive");
  const Polyline pts = drop_short_segments(shape);
  if (pts.size() < 2) throw ContractError("ribbon: polyline has no segment of positive length");

  const double half = 0.5 * width;
  Mesh mesh;
  mesh.vertices.reserve(pts.size() * 4);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Vec2 n = left_normal(unit(pts[i + 1] - pts[i])) * half;
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(ground_vertex(pts[i] - n));
    mesh.vertices.push_back(ground_vertex(pts[i + 1] - n));
    mesh.vertices.push_back(ground_vertex(pts[i + 1] + n));
    mesh.vertices.push_back(ground_vertex(pts[i] + n));
    mesh.triangles.push_back({base, base + 1, base + 2});
    mesh.triangles.push_back({base, base + 2, base + 3});
  }

  // Fill the wedge on the outer side of every bend with a round fan.
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Vec2 d_in = unit(pts[i] - pts[i - 1]);
    const Vec2 d_out = unit(pts[i + 1] - pts[i]);
    const double turn = std::atan2(cross(d_in, d_out), dot(d_in, d_out));
    if (std::abs(turn) < 1e-12) continue;
    // Left turns open a gap on the right, right turns on the left.
    const Vec2 start = turn > 0.0 ? left_normal(d_in) * -half : left_normal(d_in) * half;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(turn) / kMaxFanStep)));
    const Vertex center = ground_vertex(pts[i]);
    for (int s = 0; s < steps; ++s) {
      const Vec2 a = pts[i] + rotate(start, turn * s / steps);
      const Vec2 b = pts[i] + rotate(start, turn * (s + 1) / steps);
      if (turn > 0.0)
        mesh.add_triangle(center, ground_vertex(a), ground_vertex(b));
      else
        mesh.add_triangle(center, ground_vertex(b), ground_vertex(a));
    }
  }
  return mesh;
}

Mesh triangulate_junction(const Polygon& shape) {
  if (shape.size() < 3) throw ContractError("junction polygon needs at least 3 vertices");
  Polygon poly = clean_polygon(shape);
  if (poly.size() < 3 || std::abs(signed_area(poly)) <= kMinTriangleArea) {
    log::warn("junction polygon is degenerate; nothing to triangulate");
    return {};
  }
  if (self_intersecting(poly)) {
    log::warn("junction polygon self-intersects; using a centroid fan");
    return centroid_fan(poly);
  }
  if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());

  Mesh mesh;
  std::vector<std::size_t> ring(poly.size());
  std::iota(ring.begin(), ring.end(), std::size_t{0});
  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    std::size_t ear = n;
    std::size_t any_convex = n;
    for (std::size_t i = 0; i < n && ear == n; ++i) {
      const Vec2 a = poly[ring[(i + n - 1) % n]];
      const Vec2 b = poly[ring[i]];
      const Vec2 c = poly[ring[(i + 1) % n]];
      if (cross(b - a, c - b) <= 0.0) continue;
      if (any_convex == n) any_convex = i;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Vec2 p = poly[ring[j]];
        if (p == a || p == b || p == c) continue;
        blocked = inside_triangle(p, a, b, c);
      }
      if (!blocked) ear = i;
    }
    if (ear == n) ear = any_convex == n ? 0 : any_convex;  // numerically stuck
    const std::size_t n_ = ring.size();
    mesh.add_triangle(ground_vertex(poly[ring[(ear + n_ - 1) % n_]]),
                      ground_vertex(poly[ring[ear]]),
                      ground_vertex(poly[ring[(ear + 1) % n_]]));
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(ear));
  }
  mesh.add_triangle(ground_vertex(poly[ring[0]]), ground_vertex(poly[ring[1]]),
                    ground_vertex(poly[ring[2]]));
  return mesh;
}

Polyline offset_polyline(const Polyline& line, double distance) {
  Polyline out;
  if (line.size() < 2) return out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    Vec2 n;
    if (i == 0) {
      n = left_normal(unit(line[1] - line[0]));
    } else if (i + 1 == line.size()) {
      n = left_normal(unit(line[i] - line[i - 1]));
    } else {
      const Vec2 n_in = left_normal(unit(line[i] - line[i - 1]));
      const Vec2 n_out = left_normal(unit(line[i + 1] - line[i]));
      const Vec2 sum = n_in + n_out;
      if (length(sum) < 1e-12) {
        n = n_in;  // full reversal
      } else {
        const Vec2 bisector = unit(sum);
        n = bisector * (1.0 / std::max(dot(bisector, n_in), 1.0 / kMaxMiter));
      }
    }
    const Vec2 p = line[i] + n * distance;
    if (out.empty() || length(p - out.back()) > kMinSegment) out.push_back(p);
  }
  return out;
}

Polyline sub_polyline(const Polyline& line, double s0, double s1) {
  Polyline out;
  if (line.size() < 2 || s1 <= s0) return out;
  double travelled = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double seg = length(line[i + 1] - line[i]);
    const double a = travelled;
    const double b = travelled + seg;
    travelled = b;
    if (seg <= 0.0 || b < s0) continue;
    if (a > s1) break;
    auto at = [&](double s) { return line[i] + (line[i + 1] - line[i]) * ((s - a) / seg); };
    if (out.empty()) out.push_back(at(std::max(s0, a)));
    const Vec2 end = b <= s1 ? line[i + 1] : at(s1);
    if (length(end - out.back()) > kMinSegment) out.push_back(end);
    if (b >= s1) break;
  }
  return out;
}

MarkingLayout layout_markings(const RoadNetwork& network, const MarkingStyle& style) {
  MarkingLayout layout;
  const double inset = 0.5 * style.line_width;
  const double period = style.dash_length + style.gap_length;
  for (const auto& edge : network.edges) {
    if (edge.function == EdgeFunction::internal || edge.lanes.empty()) continue;
    const Lane& right = edge.lanes.front();
    const Lane& left = edge.lanes.back();
    if (auto line = offset_polyline(right.shape, -(0.5 * right.width - inset)); line.size() >= 2)
      layout.solid.push_back(std::move(line));
    if (auto line = offset_polyline(left.shape, 0.5 * left.width - inset); line.size() >= 2)
      layout.solid.push_back(std::move(line));

    for (std::size_t i = 0; i + 1 < edge.lanes.size(); ++i) {
      const Polyline separator = offset_polyline(edge.lanes[i].shape, 0.5 * edge.lanes[i].width);
      const double len = polyline_length(separator);
      const auto dashes = static_cast<std::size_t>(std::floor(len / period + 1e-9));
      for (std::size_t k = 0; k < dashes; ++k) {
        const double s0 = static_cast<double>(k) * period;
        if (auto dash = sub_polyline(separator, s0, std::min(len, s0 + style.dash_length));
            dash.size() >= 2)
          layout.dashes.push_back(std::move(dash));
      }
    }
  }
  return layout;
}

Mesh generate_markings(const RoadNetwork& network, const MarkingStyle& style) {
  const MarkingLayout layout = layout_markings(network, style);
  Mesh mesh;
  mesh.material = MaterialRef::flat({235, 235, 230}, true);
  for (const auto* group : {&layout.solid, &layout.dashes})
    for (const auto& line : *group) mesh.append(tessellate_lane_ribbon(line, style.line_width));
  return mesh;
}

}  // namespace sumoviz
