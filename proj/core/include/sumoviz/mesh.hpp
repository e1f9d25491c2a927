#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sumoviz/geometry.hpp"
#include "sumoviz/image.hpp"

namespace sumoviz {

enum class MaterialKind { flat_color, textured };

struct MaterialRef {
  MaterialKind kind = MaterialKind::flat_color;
  Rgb color{200, 200, 200};
  std::string texture_name;  // required when textured
  bool double_sided = false;  // disables back-face culling
  bool emissive = false;      // skips lighting

  static MaterialRef flat(Rgb c, bool double_sided = false) {
    return {MaterialKind::flat_color, c, {}, double_sided, false};
  }
};

struct Vertex {
  Vec3 position;
  Vec3 normal{0.0, 1.0, 0.0};
  Vec2 uv;
};

using Triangle = std::array<std::uint32_t, 3>;

/// Minimum triangle area kept by every mesh builder.
inline constexpr double kMinTriangleArea = 1e-12;

struct Mesh {
  std::vector<Vertex> vertices;
  std::vector<Triangle> triangles;
  MaterialRef material;
  bool has_uv = false;

  bool empty() const { return triangles.empty(); }
  std::size_t triangle_count() const { return triangles.size(); }

  /// Appends `other`'s geometry; the material of *this is kept.
  void append(const Mesh& other);

  /// Adds a triangle if its area exceeds kMinTriangleArea. Returns whether it
  /// was added.
  bool add_triangle(const Vertex& a, const Vertex& b, const Vertex& c);

  double triangle_area(std::size_t i) const;
  double area() const;

  /// Moves every vertex up by dy.
  void lift(double dy);

  /// Throws ContractError on an out-of-range index or a degenerate triangle.
  void validate() const;
};

}  // namespace sumoviz
