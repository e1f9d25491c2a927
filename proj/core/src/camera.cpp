#include "sumoviz/camera.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sumoviz/scene.hpp"

namespace sumoviz {

Camera Camera::looking_at(Vec3 eye, Vec3 target, double vertical_fov_deg, double aspect,
                          double near, double far) {
  Camera cam;
  cam.position = eye;
  cam.vertical_fov_deg = vertical_fov_deg;
  cam.aspect = aspect;
  cam.near = near;
  cam.far = far;
  if (length(target - eye) == 0.0) throw ContractError("camera target coincides with its position");
  const Vec3 forward = normalized(target - eye);
  Vec3 right = cross(forward, Vec3{0.0, 1.0, 0.0});
  if (length(right) < 1e-9) right = cross(forward, Vec3{0.0, 0.0, -1.0});  // looking straight up/down
  right = normalized(right);
  cam.forward = forward;
  cam.right = right;
  cam.up = normalized(cross(right, forward));
  return cam;
}

void Camera::validate() const {
  auto unit = [](Vec3 v) { return std::abs(length(v) - 1.0) <= 1e-9; };
  if (!unit(right) || !unit(up) || !unit(forward) || std::abs(dot(right, up)) > 1e-9 ||
      std::abs(dot(right, forward)) > 1e-9 || std::abs(dot(up, forward)) > 1e-9)
    throw ContractError("camera basis is not orthonormal");
  if (!(near > 0.0 && near < far)) throw ContractError("camera needs 0 < near < far");
  if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0))
    throw ContractError("camera field of view must lie in (0, 180)");
  if (!(aspect > 0.0)) throw ContractError("camera aspect must be positive");
}

void CinematicPath::validate() const {
  if (waypoints.size() < 2) throw ContractError("cinematic path needs at least 2 waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    if (!(waypoints[i].t > waypoints[i - 1].t))
      throw ContractError("cinematic waypoint times must be strictly increasing");
}

namespace {

Vec3 hermite(Vec3 p0, Vec3 m0, Vec3 p1, Vec3 m1, double s, double dt) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return p0 * h00 + m0 * (h10 * dt) + p1 * h01 + m1 * (h11 * dt);
}

template <class Get>
Vec3 tangent(const std::vector<CinematicWaypoint>& w, std::size_t i, Get get) {
  const std::size_t lo = i == 0 ? 0 : i - 1;
  const std::size_t hi = std::min(i + 1, w.size() - 1);
  return (get(w[hi]) - get(w[lo])) * (1.0 / (w[hi].t - w[lo].t));
}

}  // namespace

std::pair<Vec3, Vec3> sample_cinematic_path(const CinematicPath& path, double t) {
  path.validate();
  const auto& w = path.waypoints;
  if (t <= w.front().t) return {w.front().position, w.front().look_at};
  if (t >= w.back().t) return {w.back().position, w.back().look_at};

  std::size_t i = 0;
  while (i + 2 < w.size() && w[i + 1].t <= t) ++i;
  const double dt = w[i + 1].t - w[i].t;
  const double s = (t - w[i].t) / dt;
  if (w.size() == 2) {
    return {w[0].position + (w[1].position - w[0].position) * s,
            w[0].look_at + (w[1].look_at - w[0].look_at) * s};
  }
  auto pos = [](const CinematicWaypoint& p) { return p.position; };
  auto look = [](const CinematicWaypoint& p) { return p.look_at; };
  return {hermite(w[i].position, tangent(w, i, pos), w[i + 1].position, tangent(w, i + 1, pos), s, dt),
          hermite(w[i].look_at, tangent(w, i, look), w[i + 1].look_at, tangent(w, i + 1, look), s, dt)};
}

Camera build_camera(const CameraParams& params, const SceneGraph& scene, double t) {
  auto make = [&](Vec3 eye, Vec3 target) {
    return Camera::looking_at(eye, target, params.vertical_fov_deg, params.aspect, params.near,
                              params.far);
  };
  switch (params.mode) {
    case CameraMode::eulerian:
      return make(params.eulerian.position, params.eulerian.look_at);
    case CameraMode::cinematic: {
      const auto [position, look_at] = sample_cinematic_path(params.cinematic, t);
      return make(position, look_at);
    }
    case CameraMode::lagrangian:
      break;
  }
  const auto& lp = params.lagrangian;
  const TrackSample* sample = nullptr;
  for (const auto& v : scene.vehicles) {
    if (v.track.vehicle_id == lp.vehicle_id) {
      sample = v.track.sample_at(t);
      break;
    }
  }
  if (!sample) {
    std::ostringstream msg;
    msg << "vehicle '" << lp.vehicle_id << "' is not present at t=" << t;
    throw VehicleAbsentError(msg.str());
  }
  const Vec3 base = to_world({sample->x, sample->y}, 0.0);
  const Vec3 forward = heading_direction(sample->heading_deg);
  const Vec3 eye = base - forward * lp.distance_behind + Vec3{0.0, lp.height, 0.0};
  const Vec3 target = base + forward * lp.look_ahead + Vec3{0.0, lp.look_height, 0.0};
  return make(eye, target);
}

}  // namespace sumoviz
