#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace sumoviz {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

using Polyline = std::vector<Vec2>;
using Polygon = std::vector<Vec2>;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) {
  const double n = length(a);
  return n > 0.0 ? a * (1.0 / n) : a;
}

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
  const double n = length(a);
  return n > 0.0 ? a * (1.0 / n) : a;
}

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Maps [any] degrees onto [0, 360).
inline double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // fmod of tiny negatives can round up to 360
  return r;
}

// SUMO's network frame (x east, y north) maps into the right-handed render
// frame as X = x, Y = up, Z = -y. Models face north, i.e. local -Z.
constexpr Vec3 to_world(Vec2 p, double height = 0.0) { return {p.x, height, -p.y}; }
constexpr Vec2 to_network(Vec3 p) { return {p.x, -p.z}; }

/// Compass heading (0 = north, clockwise) as a rotation about +Y in radians.
constexpr double heading_to_yaw(double heading_deg) { return -deg_to_rad(heading_deg); }

/// Unit vector in the render frame pointing along a compass heading.
inline Vec3 heading_direction(double heading_deg) {
  const double h = deg_to_rad(heading_deg);
  return {std::sin(h), 0.0, -std::cos(h)};
}

/// Rigid placement with uniform scale: p' = translation + R_y(yaw) * (scale * p).
struct Transform {
  Vec3 translation;
  double yaw = 0.0;
  double scale = 1.0;

  Vec3 apply(Vec3 p) const {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    const Vec3 q = p * scale;
    return {translation.x + c * q.x + s * q.z, translation.y + q.y,
            translation.z - s * q.x + c * q.z};
  }

  Vec3 rotate(Vec3 n) const {
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    return {c * n.x + s * n.z, n.y, -s * n.x + c * n.z};
  }

  /// Column-major 4x4 matrix.
  std::array<double, 16> matrix() const {
    const double c = std::cos(yaw) * scale;
    const double s = std::sin(yaw) * scale;
    return {c,   0.0, -s,  0.0,  //
            0.0, scale, 0.0, 0.0,  //
            s,   0.0, c,   0.0,  //
            translation.x, translation.y, translation.z, 1.0};
  }
};

struct Box2 {
  Vec2 min{0.0, 0.0};
  Vec2 max{0.0, 0.0};

  bool empty() const { return max.x < min.x || max.y < min.y; }
  Vec2 center() const { return (min + max) * 0.5; }
  double diagonal() const { return length(max - min); }

  static Box2 inverted() { return {{1e300, 1e300}, {-1e300, -1e300}}; }
  void expand(Vec2 p) {
    min = {std::min(min.x, p.x), std::min(min.y, p.y)};
    max = {std::max(max.x, p.x), std::max(max.y, p.y)};
  }
};

/// Signed shoelace area; positive for counter-clockwise vertex order.
inline double signed_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * acc;
}

inline double polyline_length(const Polyline& line) {
  double acc = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) acc += length(line[i] - line[i - 1]);
  return acc;
}

}  // namespace sumoviz
