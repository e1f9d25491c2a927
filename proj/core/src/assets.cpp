#include "sumoviz/assets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"

namespace sumoviz {
namespace {

// ---------------------------------------------------------------- textures

std::uint32_t hash3(std::int32_t x, std::int32_t y, std::uint32_t seed) {
  std::uint32_t h = seed * 0x9E3779B1u;
  h ^= static_cast<std::uint32_t>(x) * 0x85EBCA6Bu;
  h = (h << 13) | (h >> 19);
  h ^= static_cast<std::uint32_t>(y) * 0xC2B2AE35u;
  h ^= h >> 16;
  h *= 0x7FEB352Du;
  h ^= h >> 15;
  h *= 0x846CA68Bu;
  h ^= h >> 16;
  return h;
}

double hash_unit(std::int32_t x, std::int32_t y, std::uint32_t seed) {
  return static_cast<double>(hash3(x, y, seed) >> 8) / static_cast<double>(1u << 24);
}

/// Tileable value noise; `period` lattice cells across the unit square.
double value_noise(double u, double v, int period, std::uint32_t seed) {
  const double x = u * period;
  const double y = v * period;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto lattice = [&](int i, int j) {
    return hash_unit(((i % period) + period) % period, ((j % period) + period) % period, seed);
  };
  const double sx = fx * fx * (3.0 - 2.0 * fx);
  const double sy = fy * fy * (3.0 - 2.0 * fy);
  const double top = lattice(x0, y0) + sx * (lattice(x0 + 1, y0) - lattice(x0, y0));
  const double bottom = lattice(x0, y0 + 1) + sx * (lattice(x0 + 1, y0 + 1) - lattice(x0, y0 + 1));
  return top + sy * (bottom - top);
}

double fbm(double u, double v, int base_period, std::uint32_t seed) {
  double sum = 0.0;
  double amplitude = 0.5;
  double norm = 0.0;
  for (int octave = 0; octave < 4; ++octave) {
    sum += amplitude * value_noise(u, v, base_period << octave, seed + octave);
    norm += amplitude;
    amplitude *= 0.5;
  }
  return sum / norm;
}

Rgb mix(Rgb a, Rgb b, double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * t));
  };
  return {lerp(a.r, b.r), lerp(a.g, b.g), lerp(a.b, b.b)};
}

Rgb scale(Rgb c, double f) {
  auto s = [f](std::uint8_t x) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(x * f), 0L, 255L));
  };
  return {s(c.r), s(c.g), s(c.b)};
}

struct SkyStyle {
  Rgb zenith;
  Rgb horizon;
  Rgb below;
  double clouds = 0.0;  // coverage in [0, 1]
  Rgb cloud_color{255, 255, 255};
  double stars = 0.0;   // probability per texel
  std::uint32_t seed = 1;
};

Texture make_sky(const SkyStyle& style) {
  constexpr int kW = 512;
  constexpr int kH = 256;
  Texture tex(kW, kH);
  for (int y = 0; y < kH; ++y) {
    const double v = (y + 0.5) / kH;  // 0 = zenith, 0.5 = horizon, 1 = nadir
    for (int x = 0; x < kW; ++x) {
      const double u = (x + 0.5) / kW;
      Rgb c = v < 0.5 ? mix(style.zenith, style.horizon, std::pow(v / 0.5, 1.5))
                      : mix(style.horizon, style.below, (v - 0.5) / 0.5);
      if (v < 0.5 && style.clouds > 0.0) {
        const double n = fbm(u, v * 2.0, 8, style.seed);
        const double density = std::clamp((n - (1.0 - style.clouds)) * 3.0, 0.0, 1.0);
        c = mix(c, style.cloud_color, density * (1.0 - std::pow(v / 0.5, 4.0)));
      }
      if (v < 0.48 && style.stars > 0.0 && hash_unit(x, y, style.seed + 99) < style.stars) {
        c = mix(c, {255, 255, 240}, 0.5 + 0.5 * hash_unit(x, y, style.seed + 7));
      }
      tex.set(x, y, c);
    }
  }
  return tex;
}

Texture make_noise_ground(Rgb dark, Rgb light, int period, std::uint32_t seed) {
  constexpr int kSize = 256;
  Texture tex(kSize, kSize);
  for (int y = 0; y < kSize; ++y)
    for (int x = 0; x < kSize; ++x)
      tex.set(x, y, mix(dark, light, fbm((x + 0.5) / kSize, (y + 0.5) / kSize, period, seed)));
  return tex;
}

Texture make_checker(int cells, Rgb a, Rgb b) {
  constexpr int kSize = 256;
  Texture tex(kSize, kSize);
  const int cell = kSize / cells;
  for (int y = 0; y < kSize; ++y)
    for (int x = 0; x < kSize; ++x) tex.set(x, y, ((x / cell + y / cell) % 2 == 0) ? a : b);
  return tex;
}

Texture make_stone() {
  constexpr int kSize = 256;
  Texture tex = make_noise_ground({105, 105, 100}, {170, 168, 160}, 16, 41);
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const int row = y / 32;
      const int offset = (row % 2) * 32;
      if (y % 32 < 2 || (x + offset) % 64 < 2) tex.set(x, y, scale(tex.at(x, y), 0.6));
    }
  }
  return tex;
}

// ------------------------------------------------------------------ models

void add_quad(Mesh& mesh, Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 outward) {
  Vec3 n = normalized(cross(b - a, c - a));
  if (dot(n, outward) < 0.0) {
    std::swap(b, d);
    n = -n;
  }
  mesh.add_triangle({a, n, {}}, {b, n, {}}, {c, n, {}});
  mesh.add_triangle({a, n, {}}, {c, n, {}}, {d, n, {}});
}

void add_box(Mesh& mesh, Vec3 lo, Vec3 hi) {
  const Vec3 p[8] = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                     {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                     {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
  add_quad(mesh, p[0], p[1], p[2], p[3], {0, 0, -1});
  add_quad(mesh, p[4], p[5], p[6], p[7], {0, 0, 1});
  add_quad(mesh, p[0], p[4], p[7], p[3], {-1, 0, 0});
  add_quad(mesh, p[1], p[5], p[6], p[2], {1, 0, 0});
  add_quad(mesh, p[3], p[2], p[6], p[7], {0, 1, 0});
  add_quad(mesh, p[0], p[1], p[5], p[4], {0, -1, 0});
}

void add_tri_outward(Mesh& mesh, Vec3 a, Vec3 b, Vec3 c, Vec3 outward) {
  Vec3 n = normalized(cross(b - a, c - a));
  if (dot(n, outward) < 0.0) {
    std::swap(b, c);
    n = -n;
  }
  mesh.add_triangle({a, n, {}}, {b, n, {}}, {c, n, {}});
}

void add_cone(Mesh& mesh, Vec3 base, double radius, double height, int sides) {
  const Vec3 apex = base + Vec3{0, height, 0};
  for (int i = 0; i < sides; ++i) {
    const double a0 = 2.0 * std::numbers::pi * i / sides;
    const double a1 = 2.0 * std::numbers::pi * (i + 1) / sides;
    const Vec3 p0 = base + Vec3{radius * std::cos(a0), 0, radius * std::sin(a0)};
    const Vec3 p1 = base + Vec3{radius * std::cos(a1), 0, radius * std::sin(a1)};
    const double am = 0.5 * (a0 + a1);
    add_tri_outward(mesh, p0, p1, apex, {std::cos(am), 0.3, std::sin(am)});
    add_tri_outward(mesh, base, p0, p1, {0, -1, 0});
  }
}

ModelPart part(Rgb color, PartRole role = PartRole::body, int segment = -1) {
  ModelPart p;
  p.mesh.material = MaterialRef::flat(color);
  p.role = role;
  p.segment = segment;
  return p;
}

Model make_tree() {
  Model m{"tree", {}};
  auto trunk = part({110, 80, 50});
  add_box(trunk.mesh, {-0.15, 0.0, -0.15}, {0.15, 2.0, 0.15});
  auto crown = part({50, 120, 45});
  add_cone(crown.mesh, {0, 1.5, 0}, 1.8, 3.0, 8);
  add_cone(crown.mesh, {0, 3.2, 0}, 1.3, 2.6, 8);
  m.parts = {std::move(trunk), std::move(crown)};
  return m;
}

Model make_fence() {
  Model m{"fence", {}};
  auto p = part({150, 150, 145});
  for (double x : {-2.0, 0.0, 2.0}) add_box(p.mesh, {x - 0.05, 0.0, -0.05}, {x + 0.05, 1.2, 0.05});
  add_box(p.mesh, {-2.0, 0.45, -0.03}, {2.0, 0.6, 0.03});
  add_box(p.mesh, {-2.0, 0.9, -0.03}, {2.0, 1.05, 0.03});
  m.parts = {std::move(p)};
  return m;
}

Model make_building(std::string name, Vec3 half, Rgb wall, Rgb roof, bool gable) {
  Model m{std::move(name), {}};
  auto walls = part(wall);
  add_box(walls.mesh, {-half.x, 0.0, -half.z}, {half.x, half.y, half.z});
  auto top = part(roof);
  if (gable) {
    const double h = half.y;
    const double ridge = h + 0.6 * half.x;
    const Vec3 a{-half.x, h, -half.z}, b{half.x, h, -half.z}, c{half.x, h, half.z},
        d{-half.x, h, half.z}, r0{0, ridge, -half.z}, r1{0, ridge, half.z};
    add_quad(top.mesh, a, r0, r1, d, {-1, 1, 0});
    add_quad(top.mesh, b, r0, r1, c, {1, 1, 0});
    add_tri_outward(top.mesh, a, b, r0, {0, 0, -1});
    add_tri_outward(top.mesh, d, c, r1, {0, 0, 1});
  } else {
    add_box(top.mesh, {-half.x - 0.2, half.y, -half.z - 0.2}, {half.x + 0.2, half.y + 0.3, half.z + 0.2});
  }
  m.parts = {std::move(walls), std::move(top)};
  return m;
}

Model make_shop() {
  Model m = make_building("shop", {5.0, 4.0, 4.0}, {215, 200, 170}, {90, 90, 95}, false);
  auto awning = part({190, 40, 40});
  add_box(awning.mesh, {-4.5, 2.6, -5.2}, {4.5, 2.8, -4.0});
  m.parts.push_back(std::move(awning));
  return m;
}

Model make_marker() {
  Model m{"marker", {}};
  auto p = part({220, 0, 220});
  add_box(p.mesh, {-0.1, 0.0, -0.1}, {0.1, 1.5, 0.1});
  add_cone(p.mesh, {0, 1.5, 0}, 0.4, 0.8, 4);
  m.parts = {std::move(p)};
  return m;
}

// Seven-segment geometry on a digit cell of width w, height h, centred at cx.
void add_segment_parts(Model& m, double cx, double cy, double z, int digit) {
  constexpr double w = 0.16, h = 0.30, t = 0.03;
  const Vec2 centres[7] = {{0, h / 2}, {w / 2, h / 4}, {w / 2, -h / 4}, {0, -h / 2},
                           {-w / 2, -h / 4}, {-w / 2, h / 4}, {0, 0}};
  for (int s = 0; s < 7; ++s) {
    auto seg = part({60, 60, 60}, PartRole::segment, digit * 7 + s);
    const bool horizontal = s == 0 || s == 3 || s == 6;
    const double hx = horizontal ? w / 2 : t / 2;
    const double hy = horizontal ? t / 2 : h / 4;
    const double x = cx + centres[s].x;
    const double y = cy + centres[s].y;
    add_box(seg.mesh, {x - hx, y - hy, z - 0.02}, {x + hx, y + hy, z});
    m.parts.push_back(std::move(seg));
  }
}

Model make_traffic_light(std::string name, int lamps, bool countdown) {
  Model m{std::move(name), {}};
  auto pole = part({70, 70, 70});
  add_box(pole.mesh, {-0.06, 0.0, -0.06}, {0.06, 3.0, 0.06});
  const double housing_h = 0.35 * lamps + 0.1 + (countdown ? 0.45 : 0.0);
  add_box(pole.mesh, {-0.22, 3.0, -0.3}, {0.22, 3.0 + housing_h, 0.0});
  m.parts.push_back(std::move(pole));

  const PartRole roles3[3] = {PartRole::lamp_red, PartRole::lamp_yellow, PartRole::lamp_green};
  const PartRole roles2[2] = {PartRole::lamp_red, PartRole::lamp_green};
  double y = 3.0 + housing_h - 0.225;
  for (int i = 0; i < lamps; ++i) {
    auto lamp = part({40, 40, 40}, lamps == 3 ? roles3[i] : roles2[i]);
    lamp.mesh.material.emissive = true;
    add_box(lamp.mesh, {-0.13, y - 0.13, -0.36}, {0.13, y + 0.13, -0.3});
    m.parts.push_back(std::move(lamp));
    y -= 0.35;
  }
  if (countdown) {
    const double cy = 3.0 + 0.3;
    add_segment_parts(m, -0.1, cy, -0.3, 0);
    add_segment_parts(m, 0.1, cy, -0.3, 1);
    for (auto& p : m.parts)
      if (p.role == PartRole::segment) p.mesh.material.emissive = true;
  }
  return m;
}

struct CarStyle {
  Rgb paint;
  double length, width, body_height, cabin_height, cabin_front, cabin_back;
};

Model make_car(int index) {
  static const CarStyle styles[kCarModelCount] = {
      {{200, 30, 30}, 4.5, 1.8, 0.8, 0.6, 0.3, 0.9},    // sedan
      {{30, 60, 180}, 4.0, 1.75, 0.8, 0.65, 0.4, 0.3},  // hatchback
      {{230, 230, 230}, 4.7, 1.9, 0.95, 0.75, 0.5, 0.3},  // suv
      {{30, 30, 30}, 4.9, 1.85, 0.75, 0.55, 0.2, 1.1},  // saloon
      {{240, 200, 40}, 4.6, 1.8, 0.8, 0.6, 0.3, 0.9},   // taxi
      {{60, 140, 70}, 5.2, 1.95, 1.0, 0.9, 0.7, 0.2},   // van
      {{140, 140, 150}, 5.3, 1.9, 0.9, 0.7, 0.4, 2.2},  // pickup
      {{240, 120, 30}, 3.6, 1.65, 0.75, 0.6, 0.5, 0.4}, // city car
      {{100, 40, 120}, 4.4, 1.85, 0.7, 0.5, 0.2, 1.0},  // coupe
      {{180, 160, 130}, 4.8, 1.85, 0.85, 0.65, 0.35, 0.35}};  // estate
  const CarStyle& s = styles[index];
  Model m{car_model_name(index), {}};
  const double hl = s.length / 2, hw = s.width / 2;
  auto body = part(s.paint);
  add_box(body.mesh, {-hw, 0.3, -hl}, {hw, 0.3 + s.body_height, hl});
  add_box(body.mesh, {-hw + 0.08, 0.3 + s.body_height, -hl + s.cabin_front + 0.8},
          {hw - 0.08, 0.3 + s.body_height + s.cabin_height, hl - s.cabin_back});
  auto wheels = part({25, 25, 25});
  for (double sx : {-1.0, 1.0})
    for (double sz : {-1.0, 1.0}) {
      const double cx = sx * (hw - 0.12), cz = sz * (hl - 0.8);
      add_box(wheels.mesh, {cx - 0.13, 0.0, cz - 0.33}, {cx + 0.13, 0.62, cz + 0.33});
    }
  auto lights = part({255, 250, 210});
  lights.mesh.material.emissive = true;
  for (double sx : {-1.0, 1.0})
    add_box(lights.mesh, {sx * (hw - 0.35) - 0.15, 0.75, -hl - 0.03}, {sx * (hw - 0.35) + 0.15, 0.9, -hl});
  m.parts = {std::move(body), std::move(wheels), std::move(lights)};
  return m;
}

}  // namespace

std::string car_model_name(int index) { return "car" + std::to_string(index); }

std::size_t Model::triangle_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.mesh.triangle_count();
  return n;
}

Texture make_procedural_texture(std::string_view name) {
  if (name == "sky_blue") return make_sky({{60, 115, 210}, {175, 205, 240}, {150, 165, 185}});
  if (name == "sky_daycloud1")
    return make_sky({{70, 125, 205}, {185, 205, 230}, {150, 160, 175}, 0.35, {250, 250, 250}, 0, 11});
  if (name == "sky_daycloud2")
    return make_sky({{90, 130, 190}, {190, 200, 215}, {150, 155, 165}, 0.55, {240, 240, 245}, 0, 12});
  if (name == "sky_daycloud3")
    return make_sky({{120, 135, 160}, {195, 200, 205}, {145, 148, 155}, 0.8, {215, 218, 222}, 0, 13});
  if (name == "sky_night1") return make_sky({{5, 8, 25}, {25, 35, 70}, {15, 18, 30}, 0, {}, 0.004, 21});
  if (name == "sky_night2") return make_sky({{8, 10, 35}, {40, 45, 85}, {20, 22, 35}, 0.2, {60, 65, 90}, 0.002, 22});
  if (name == "sky_night3") return make_sky({{2, 2, 12}, {15, 18, 40}, {8, 8, 15}, 0, {}, 0.01, 23});
  if (name == "sky_halloween")
    return make_sky({{45, 10, 60}, {235, 110, 20}, {40, 15, 20}, 0.3, {30, 20, 30}, 0.001, 31});
  if (name == "ground_grass") return make_noise_ground({45, 95, 35}, {105, 160, 70}, 8, 51);
  if (name == "ground_stone") return make_stone();
  if (name == "ground_sand") return make_noise_ground({185, 160, 110}, {230, 210, 160}, 8, 53);
  if (name == "ground_chess") return make_checker(8, {30, 30, 30}, {225, 225, 225});
  if (name == "ground_chesslarge") return make_checker(2, {30, 30, 30}, {225, 225, 225});
  if (name == "ground_halloween") return make_noise_ground({25, 15, 10}, {170, 80, 15}, 8, 57);
  throw AssetError("no procedural texture named '" + std::string(name) + "'");
}

Model make_procedural_model(std::string_view name) {
  if (name == "tree") return make_tree();
  if (name == "fence") return make_fence();
  if (name == "trafficlight2") return make_traffic_light("trafficlight2", 2, false);
  if (name == "trafficlight3") return make_traffic_light("trafficlight3", 3, false);
  if (name == "trafficlight_countdown") return make_traffic_light("trafficlight_countdown", 2, true);
  if (name == "shop") return make_shop();
  if (name == "home") return make_building("home", {4.0, 3.0, 5.0}, {230, 215, 190}, {150, 60, 45}, true);
  if (name == "block") return make_building("block", {10.0, 24.0, 15.0}, {160, 165, 175}, {80, 80, 85}, false);
  if (name == "marker") return make_marker();
  for (int i = 0; i < kCarModelCount; ++i)
    if (name == car_model_name(i)) return make_car(i);
  throw AssetError("no procedural model named '" + std::string(name) + "'");
}

AssetLibrary AssetLibrary::procedural() {
  AssetLibrary lib;
  for (auto name : kSkyTextureNames) lib.textures_.emplace(name, make_procedural_texture(name));
  for (auto name : kGroundTextureNames) lib.textures_.emplace(name, make_procedural_texture(name));
  for (auto name : kStaticModelNames) lib.models_.emplace(name, make_procedural_model(name));
  for (int i = 0; i < kCarModelCount; ++i)
    lib.models_.emplace(car_model_name(i), make_procedural_model(car_model_name(i)));
  return lib;
}

AssetLibrary AssetLibrary::load(const std::optional<std::filesystem::path>& override_dir) {
  AssetLibrary lib = procedural();
  if (!override_dir) return lib;
  if (!std::filesystem::is_directory(*override_dir))
    throw AssetError("asset directory '" + override_dir->string() + "' does not exist");

  for (auto& [name, texture] : lib.textures_) {
    const auto path = *override_dir / "textures" / (name + ".png");
    if (std::filesystem::exists(path)) texture = read_png(path.string());
  }
  for (auto& [name, model] : lib.models_) {
    const auto path = *override_dir / "models" / (name + ".obj");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    if (!in) throw AssetError("cannot open '" + path.string() + "'");
    Model replacement = read_model_text(in, name);
    // Keep the signal lamp parts so replaced traffic-light bodies still light up.
    for (auto& p : model.parts)
      if (p.role != PartRole::body) replacement.parts.push_back(std::move(p));
    model = std::move(replacement);
  }
  return lib;
}

std::optional<std::filesystem::path> AssetLibrary::override_dir_from_env() {
  const char* value = std::getenv(kAssetDirEnv);
  if (!value || !*value) return std::nullopt;
  return std::filesystem::path(value);
}

bool AssetLibrary::has_texture(std::string_view name) const { return textures_.contains(name); }
bool AssetLibrary::has_model(std::string_view name) const { return models_.contains(name); }

const Texture& AssetLibrary::texture(std::string_view name) const {
  const auto it = textures_.find(name);
  if (it == textures_.end()) throw AssetError("unknown texture '" + std::string(name) + "'");
  return it->second;
}

const Model& AssetLibrary::model(std::string_view name) const {
  const auto it = models_.find(name);
  if (it == models_.end()) throw AssetError("unknown model '" + std::string(name) + "'");
  return it->second;
}

Model read_model_text(std::istream& in, const std::string& name) {
  std::vector<Vec3> positions;
  ModelPart body = part({180, 180, 180});
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag.front() == '#') continue;
    auto fail = [&](const std::string& why) {
      throw AssetError("model '" + name + "' line " + std::to_string(line_no) + ": " + why);
    };
    if (tag == "v") {
      Vec3 p;
      if (!(fields >> p.x >> p.y >> p.z)) fail("expected 'v x y z'");
      positions.push_back(p);
    } else if (tag == "f") {
      long i = 0, j = 0, k = 0;
      if (!(fields >> i >> j >> k)) fail("expected 'f i j k'");
      for (long idx : {i, j, k})
        if (idx < 1 || static_cast<std::size_t>(idx) > positions.size()) fail("face index out of range");
      const Vec3 a = positions[i - 1], b = positions[j - 1], c = positions[k - 1];
      const Vec3 n = normalized(cross(b - a, c - a));
      body.mesh.add_triangle({a, n, {}}, {b, n, {}}, {c, n, {}});
    } else if (tag == "color") {
      int r = 0, g = 0, b = 0;
      if (!(fields >> r >> g >> b) || r < 0 || g < 0 || b < 0 || r > 255 || g > 255 || b > 255)
        fail("expected 'color r g b' with components in 0..255");
      body.mesh.material.color = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                  static_cast<std::uint8_t>(b)};
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  Model m{name, {}};
  m.parts.push_back(std::move(body));
  return m;
}

}  // namespace sumoviz
