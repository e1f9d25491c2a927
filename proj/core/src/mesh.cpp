#include "sumoviz/mesh.hpp"

#include "sumoviz/error.hpp"

namespace sumoviz {

void Mesh::append(const Mesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  triangles.reserve(triangles.size() + other.triangles.size());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  has_uv = has_uv || other.has_uv;
}

bool Mesh::add_triangle(const Vertex& a, const Vertex& b, const Vertex& c) {
  if (0.5 * length(cross(b.position - a.position, c.position - a.position)) <= kMinTriangleArea)
    return false;
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.push_back(a);
  vertices.push_back(b);
  vertices.push_back(c);
  triangles.push_back({base, base + 1, base + 2});
  return true;
}

double Mesh::triangle_area(std::size_t i) const {
  const auto& t = triangles[i];
  const Vec3 a = vertices[t[0]].position;
  return 0.5 * length(cross(vertices[t[1]].position - a, vertices[t[2]].position - a));
}

double Mesh::area() const {
  double total = 0.0;
  for (std::size_t i = 0; i < triangles.size(); ++i) total += triangle_area(i);
  return total;
}

void Mesh::lift(double dy) {
  for (auto& v : vertices) v.position.y += dy;
}

void Mesh::validate() const {
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    for (auto index : triangles[i]) {
      if (index >= vertices.size())
        throw ContractError("mesh triangle " + std::to_string(i) + " has an out-of-range index");
    }
    if (!(triangle_area(i) > kMinTriangleArea))
      throw ContractError("mesh triangle " + std::to_string(i) + " is degenerate");
  }
  if (material.kind == MaterialKind::textured && material.texture_name.empty())
    throw ContractError("textured material without a texture name");
}

}  // namespace sumoviz
