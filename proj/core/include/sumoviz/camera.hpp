#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sumoviz/error.hpp"
#include "sumoviz/geometry.hpp"

namespace sumoviz {

struct SceneGraph;

/// Pinhole camera in the render frame. forward/right/up form an orthonormal
/// basis; view depth is measured along forward.
struct Camera {
  Vec3 position;
  Vec3 right{1.0, 0.0, 0.0};
  Vec3 up{0.0, 1.0, 0.0};
  Vec3 forward{0.0, 0.0, -1.0};
  double vertical_fov_deg = 60.0;
  double aspect = 16.0 / 9.0;
  double near = 0.3;
  double far = 5000.0;

  /// Camera at `eye` looking at `target` with world +Y as the up hint.
  static Camera looking_at(Vec3 eye, Vec3 target, double vertical_fov_deg, double aspect,
                           double near, double far);

  void validate() const;

  /// View-space coordinates (x right, y up, z = depth along forward).
  Vec3 to_view(Vec3 world) const {
    const Vec3 d = world - position;
    return {dot(d, right), dot(d, up), dot(d, forward)};
  }
};

struct CinematicWaypoint {
  double t = 0.0;
  Vec3 position;
  Vec3 look_at;
};

struct CinematicPath {
  std::vector<CinematicWaypoint> waypoints;

  void validate() const;
};

/// Catmull-Rom through the waypoints (tangents from neighbouring waypoints
/// divided by their time spacing); linear for two waypoints; clamped outside
/// the time span. Returns (position, look_at).
std::pair<Vec3, Vec3> sample_cinematic_path(const CinematicPath& path, double t);

enum class CameraMode { eulerian, lagrangian, cinematic };

struct EulerianParams {
  Vec3 position{0.0, 50.0, 50.0};
  Vec3 look_at{0.0, 0.0, 0.0};
};

struct LagrangianParams {
  std::string vehicle_id;
  double distance_behind = 8.0;
  double height = 4.0;
  double look_ahead = 20.0;
  double look_height = 1.0;
};

struct CameraParams {
  CameraMode mode = CameraMode::eulerian;
  EulerianParams eulerian;
  LagrangianParams lagrangian;
  CinematicPath cinematic;
  double vertical_fov_deg = 60.0;
  double aspect = 16.0 / 9.0;
  double near = 0.3;
  double far = 5000.0;
};

/// The followed vehicle has no sample at the requested time.
class VehicleAbsentError : public RenderError {
public:
  using RenderError::RenderError;
};

Camera build_camera(const CameraParams& params, const SceneGraph& scene, double t);

}  // namespace sumoviz
