#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sumoviz/camera.hpp"
#include "sumoviz/scene.hpp"

using namespace sumoviz;

namespace {

void expect_vec(Vec3 got, Vec3 want, double tol = 1e-9) {
  EXPECT_NEAR(got.x, want.x, tol);
  EXPECT_NEAR(got.y, want.y, tol);
  EXPECT_NEAR(got.z, want.z, tol);
}

SceneGraph scene_with(const std::string& id, double x, double y, double heading) {
  SceneGraph scene;
  SmoothedTrack track;
  track.vehicle_id = id;
  track.fps = 25;
  track.samples.assign(50, {x, y, heading});
  scene.vehicles.push_back({track, 0});
  return scene;
}

}  // namespace

TEST(Camera, LookingAtBuildsOrthonormalBasis) {
  const Camera c = Camera::looking_at({3, 10, 7}, {-4, 0, 1}, 60, 1.5, 0.1, 100);
  EXPECT_NO_THROW(c.validate());
  expect_vec(c.forward, normalized(Vec3{-7, -10, -6}));
  EXPECT_GT(c.up.y, 0.0);
  EXPECT_NEAR(c.right.y, 0.0, 1e-12);  // no roll
  // Right-handed: right x up = -forward.
  expect_vec(cross(c.right, c.up), -c.forward);
  const Vec3 v = c.to_view({-4, 0, 1});
  EXPECT_NEAR(v.x, 0.0, 1e-9);
  EXPECT_NEAR(v.y, 0.0, 1e-9);
  EXPECT_NEAR(v.z, std::sqrt(49.0 + 100 + 36), 1e-9);
}

TEST(Camera, StraightDownIsStillValid) {
  const Camera c = Camera::looking_at({0, 50, 0}, {0, 0, 0}, 60, 1.0, 0.1, 100);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(Camera::looking_at({1, 1, 1}, {1, 1, 1}, 60, 1, 0.1, 10), ContractError);
}

TEST(Camera, Eulerian) {
  CameraParams p;
  p.eulerian = {{10, 20, 30}, {0, 0, 0}};
  const Camera c = build_camera(p, SceneGraph{}, 5.0);
  expect_vec(c.position, {10, 20, 30});
  expect_vec(c.forward, normalized(Vec3{-10, -20, -30}));
}

TEST(Camera, LagrangianNorthbound) {
  CameraParams p;
  p.mode = CameraMode::lagrangian;
  p.lagrangian.vehicle_id = "car";
  const Camera c = build_camera(p, scene_with("car", 0, 0, 0), 0.5);
  expect_vec(c.position, {0, 4, 8});
  expect_vec(c.forward, normalized(Vec3{0, -3, -28}));
}

TEST(Camera, LagrangianRotatesWithHeading) {
  CameraParams p;
  p.mode = CameraMode::lagrangian;
  p.lagrangian.vehicle_id = "car";
  const Vec3 eye0{0, 4, 8};
  const Vec3 fwd0 = normalized(Vec3{0, -3, -28});
  for (double heading : {30.0, 90.0, 181.0, 275.0}) {
    const Camera c = build_camera(p, scene_with("car", 12, -7, heading), 0.5);
    const double yaw = -heading * std::numbers::pi / 180;
    expect_vec(c.position, to_world({12, -7}) + oracle::rotate_y(eye0, yaw));
    expect_vec(c.forward, oracle::rotate_y(fwd0, yaw));
  }
}

TEST(Camera, LagrangianAbsentVehicle) {
  CameraParams p;
  p.mode = CameraMode::lagrangian;
  p.lagrangian.vehicle_id = "car";
  const SceneGraph scene = scene_with("car", 0, 0, 0);
  EXPECT_THROW(build_camera(p, scene, 100.0), VehicleAbsentError);
  EXPECT_THROW(build_camera(p, scene, -1.0), VehicleAbsentError);
  p.lagrangian.vehicle_id = "other";
  EXPECT_THROW(build_camera(p, scene, 0.5), VehicleAbsentError);
}

TEST(Cinematic, TwoWaypointsAreLinear) {
  CinematicPath path{{{0, {0, 10, 0}, {0, 0, -10}}, {10, {20, 10, 0}, {20, 0, -10}}}};
  const auto [pos, look] = sample_cinematic_path(path, 5.0);
  expect_vec(pos, {10, 10, 0});
  expect_vec(look, {10, 0, -10});
}

TEST(Cinematic, ClampedOutsideSpan) {
  CinematicPath path{{{2, {0, 10, 0}, {0, 0, 0}}, {4, {4, 10, 0}, {1, 0, 0}}}};
  expect_vec(sample_cinematic_path(path, -5).first, {0, 10, 0});
  expect_vec(sample_cinematic_path(path, 50).first, {4, 10, 0});
}

TEST(Cinematic, InterpolatesWaypointsAndCollinearMotion) {
  // Evenly timed collinear waypoints: Catmull-Rom reproduces the straight line.
  CinematicPath path;
  for (int i = 0; i < 4; ++i)
    path.waypoints.push_back({double(i), {10.0 * i, 5, 0}, {10.0 * i, 0, -20}});
  for (int i = 0; i < 4; ++i) expect_vec(sample_cinematic_path(path, i).first, {10.0 * i, 5, 0});
  for (double t : {0.25, 1.5, 2.9}) expect_vec(sample_cinematic_path(path, t).first, {10 * t, 5, 0});
}

TEST(Cinematic, Validation) {
  CinematicPath one{{{0, {}, {0, 0, -1}}}};
  EXPECT_THROW(one.validate(), ContractError);
  CinematicPath unordered{{{1, {}, {0, 0, -1}}, {1, {}, {0, 0, -1}}}};
  EXPECT_THROW(unordered.validate(), ContractError);
}
