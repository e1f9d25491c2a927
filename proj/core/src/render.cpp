#include "sumoviz/render.hpp"

#include <cmath>

#include "sumoviz/error.hpp"

namespace sumoviz {
namespace {

struct LampColors {
  Rgb lit;
  Rgb dim;
};

constexpr LampColors kRedLamp{{235, 35, 30}, {60, 22, 20}};
constexpr LampColors kYellowLamp{{245, 190, 30}, {62, 52, 18}};
constexpr LampColors kGreenLamp{{40, 225, 90}, {20, 58, 30}};
constexpr Rgb kSegmentOff{35, 35, 35};

// Seven-segment masks for digits 0-9, bit s = segment a..g.
constexpr std::uint8_t kDigitSegments[10] = {0x3F, 0x06, 0x5B, 0x4F, 0x66,
                                             0x6D, 0x7D, 0x07, 0x7F, 0x6F};

class FrameRenderer {
public:
  FrameRenderer(const SceneGraph& scene, const Camera& camera, int width, int height,
                RenderStats& stats)
      : scene_(scene), camera_(camera), fb_(width, height, camera.near, camera.far), stats_(stats) {
    focal_ = 1.0 / std::tan(deg_to_rad(camera.vertical_fov_deg) * 0.5);
  }

  RasterVertex project(Vec3 world, Vec2 uv = {}) const {
    const Vec3 v = camera_.to_view(world);
    return {v.x * focal_ / camera_.aspect, v.y * focal_, v.z, uv};
  }

  void draw_mesh(const Mesh& mesh, const Transform* transform, const MaterialRef& material,
                 const Texture* texture = nullptr) {
    RasterMaterial rm;
    rm.color = material.color;
    rm.texture = texture;
    rm.cull_back = !material.double_sided;
    for (const auto& tri : mesh.triangles) {
      std::array<RasterVertex, 3> rv;
      for (int k = 0; k < 3; ++k) {
        const Vertex& vx = mesh.vertices[tri[k]];
        const Vec3 p = transform ? transform->apply(vx.position) : vx.position;
        rv[k] = project(p, vx.uv);
      }
      const Vec3 normal = transform ? transform->rotate(mesh.vertices[tri[0]].normal)
                                    : mesh.vertices[tri[0]].normal;
      rm.shade = material.emissive ? 1.0 : lambert(normal, scene_.light.direction, scene_.light.intensity);
      rasterize_triangle(fb_, rv, rm);
      ++stats_.triangles_submitted;
    }
  }

  void draw_model(const Model& model, const Transform& transform) {
    for (const auto& part : model.parts) draw_mesh(part.mesh, &transform, part.mesh.material);
  }

  void draw_ground() {
    const auto& g = scene_.ground;
    const Texture& tex = scene_.assets->texture(g.texture);
    const Vec2 lo = g.extent.min;
    const Vec2 hi = g.extent.max;
    // A grid keeps each triangle small relative to the view.
    constexpr int kCells = 8;
    Mesh mesh;
    mesh.has_uv = true;
    for (int j = 0; j < kCells; ++j) {
      for (int i = 0; i < kCells; ++i) {
        const Vec2 a{lo.x + (hi.x - lo.x) * i / kCells, lo.y + (hi.y - lo.y) * j / kCells};
        const Vec2 b{lo.x + (hi.x - lo.x) * (i + 1) / kCells, lo.y + (hi.y - lo.y) * (j + 1) / kCells};
        auto vertex = [&](Vec2 p) {
          return Vertex{to_world(p, 0.0), {0, 1, 0}, {p.x / g.tile_size, -p.y / g.tile_size}};
        };
        mesh.add_triangle(vertex(a), vertex({b.x, a.y}), vertex(b));
        mesh.add_triangle(vertex(a), vertex(b), vertex({a.x, b.y}));
      }
    }
    MaterialRef material{MaterialKind::textured, {255, 255, 255}, g.texture, true, false};
    draw_mesh(mesh, nullptr, material, &tex);
  }

  void draw_signal_head(const SignalHead& head, double t, const SignalDisplay& signals) {
    const Model& model = scene_.assets->model(head.model);
    SignalColor color = SignalColor::dark;
    int remaining = 0;
    if (!head.dark && signals.timeline && signals.timeline->link(head.tls_id, head.link_index)) {
      color = display_state_at(*signals.timeline, head.tls_id, head.link_index, t, head.design,
                               signals.yellow_duration);
      if (head.design == HeadDesign::countdown)
        remaining = countdown_at(*signals.timeline, head.tls_id, head.link_index, t);
    }
    const Rgb segment_on = color == SignalColor::green    ? kGreenLamp.lit
                           : color == SignalColor::yellow ? kYellowLamp.lit
                                                          : kRedLamp.lit;
    const int shown = std::clamp(remaining, 0, 99);

    for (const auto& part : model.parts) {
      MaterialRef material = part.mesh.material;
      switch (part.role) {
        case PartRole::body:
          break;
        case PartRole::lamp_red:
          // A head without a yellow lamp shows yellow on red.
          material.color = (color == SignalColor::red ||
                            (color == SignalColor::yellow && head.design == HeadDesign::countdown))
                               ? kRedLamp.lit : kRedLamp.dim;
          break;
        case PartRole::lamp_yellow:
          material.color = color == SignalColor::yellow ? kYellowLamp.lit : kYellowLamp.dim;
          break;
        case PartRole::lamp_green:
          material.color = color == SignalColor::green ? kGreenLamp.lit : kGreenLamp.dim;
          break;
        case PartRole::segment: {
          const int digit = part.segment / 7;
          const int segment = part.segment % 7;
          const int value = digit == 0 ? shown / 10 : shown % 10;
          const bool blank = color == SignalColor::dark || (digit == 0 && shown < 10);
          const bool on = !blank && (kDigitSegments[value] >> segment) & 1;
          material.color = on ? segment_on : kSegmentOff;
          break;
        }
      }
      draw_mesh(part.mesh, &head.transform, material);
    }
  }

  void fill_sky() {
    const Texture& tex = scene_.assets->texture(scene_.sky.texture);
    const double tan_half = std::tan(deg_to_rad(camera_.vertical_fov_deg) * 0.5);
    for (int y = 0; y < fb_.height; ++y) {
      const double ndc_y = 1.0 - 2.0 * (y + 0.5) / fb_.height;
      for (int x = 0; x < fb_.width; ++x) {
        if (fb_.written(x, y)) continue;
        const double ndc_x = 2.0 * (x + 0.5) / fb_.width - 1.0;
        const Vec3 dir = camera_.forward + camera_.right * (ndc_x * tan_half * camera_.aspect) +
                         camera_.up * (ndc_y * tan_half);
        fb_.color.set(x, y, sample_sky(tex, dir));
      }
    }
  }

  FrameBuffer finish() { return std::move(fb_); }

private:
  const SceneGraph& scene_;
  const Camera& camera_;
  FrameBuffer fb_;
  RenderStats& stats_;
  double focal_ = 1.0;
};

}  // namespace

FrameBuffer render_frame(const SceneGraph& scene, const Camera& camera, double t,
                         const SignalDisplay& signals, int width, int height, RenderStats* stats) {
  if (!scene.assets) throw ContractError("render_frame: scene has no asset library");
  if (width <= 0 || height <= 0) throw ContractError("render_frame: image size must be positive");
  camera.validate();

  RenderStats local;
  RenderStats& s = stats ? *stats : local;
  s = {};
  FrameRenderer r(scene, camera, width, height, s);

  r.draw_ground();
  r.draw_mesh(scene.road.surface, nullptr, scene.road.surface.material);
  r.draw_mesh(scene.road.markings, nullptr, scene.road.markings.material);
  for (const auto& obj : scene.static_objects) {
    r.draw_model(scene.assets->model(obj.model), obj.transform);
    ++s.static_objects_drawn;
  }
  for (const auto& head : scene.signal_heads) {
    r.draw_signal_head(head, t, signals);
    ++s.signal_heads_drawn;
  }
  for (const auto& vehicle : scene.vehicles) {
    const TrackSample* sample = vehicle.track.sample_at(t);
    if (!sample) continue;
    Transform transform{to_world({sample->x, sample->y}, 0.0), heading_to_yaw(sample->heading_deg), 1.0};
    r.draw_model(scene.assets->model(car_model_name(vehicle.model_index)), transform);
    ++s.vehicles_drawn;
  }
  r.fill_sky();
  return r.finish();
}

}  // namespace sumoviz
