#include <gtest/gtest.h>

#include <map>

#include "reference_job.hpp"
#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"
#include "sumoviz/scene.hpp"
#include "sumoviz/synthetic.hpp"

using namespace sumoviz;
using testing_support::read_fixture;

namespace {

std::shared_ptr<const AssetLibrary> library() {
  static const auto lib = std::make_shared<const AssetLibrary>(AssetLibrary::procedural());
  return lib;
}

SceneGraph minimal_scene(const SceneConfig& config = {}) {
  const auto net = parse_network(read_fixture("net_minimal.net.xml"));
  return build_scene(net, {}, {}, {}, config, library());
}

}  // namespace

TEST(StaticObjects, PlacementAndBinding) {
  std::vector<std::string> warnings;
  log::ScopedCapture capture([&](log::Level level, std::string_view m) {
    if (level == log::Level::warn) warnings.emplace_back(m);
  });
  const auto objs = place_static_objects(parse_pois(read_fixture("pois_basic.add.xml")));
  ASSERT_EQ(objs.size(), 4u);

  EXPECT_EQ(objs[0].model, "tree");
  EXPECT_EQ(objs[0].transform.translation, (Vec3{5, 0, -5}));
  EXPECT_EQ(objs[0].transform.yaw, 0.0);
  EXPECT_FALSE(objs[0].signal);

  EXPECT_EQ(objs[1].kind, "gazebo");
  EXPECT_EQ(objs[1].model, "marker");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("gazebo"), std::string::npos);

  ASSERT_TRUE(objs[2].signal);
  EXPECT_EQ(objs[2].signal->tls_id, "J1");
  EXPECT_EQ(objs[2].signal->link_index, 0);

  EXPECT_EQ(objs[3].transform.scale, 1.5);
  EXPECT_NEAR(objs[3].transform.yaw, -std::numbers::pi / 2, 1e-12);
  // A model facing north turns to face east.
  const Vec3 nose = objs[3].transform.rotate({0, 0, -1});
  EXPECT_NEAR(nose.x, 1.0, 1e-12);
  EXPECT_NEAR(nose.z, 0.0, 1e-12);
}

TEST(StaticObjects, MalformedSignalIdIsUnbound) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  PoiSet pois{{{"tl:J1", "trafficlight2", {0, 0}, {}, {}},
               {"tl:A:B:3", "trafficlight3", {0, 0}, {}, {}},
               {"light", "trafficlight3", {0, 0}, {}, {}}}};
  const auto objs = place_static_objects(pois);
  EXPECT_FALSE(objs[0].signal);
  ASSERT_TRUE(objs[1].signal);
  EXPECT_EQ(objs[1].signal->tls_id, "A:B");
  EXPECT_EQ(objs[1].signal->link_index, 3);
  EXPECT_FALSE(objs[2].signal);
}

TEST(VehicleModels, DeterministicAndSeeded) {
  EXPECT_EQ(assign_vehicle_model("veh_1", 3), assign_vehicle_model("veh_1", 3));
  int differ = 0;
  for (int i = 0; i < 100; ++i) {
    const std::string id = "v" + std::to_string(i);
    const int m = assign_vehicle_model(id, 0);
    EXPECT_GE(m, 0);
    EXPECT_LT(m, kCarModelCount);
    differ += m != assign_vehicle_model(id, 1);
  }
  EXPECT_GT(differ, 50);
}

TEST(VehicleModels, NearUniform) {
  std::map<int, int> buckets;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++buckets[assign_vehicle_model("veh" + std::to_string(i), 7)];
  ASSERT_EQ(buckets.size(), static_cast<std::size_t>(kCarModelCount));
  for (const auto& [model, count] : buckets) {
    EXPECT_GE(count, n * 0.05) << model;
    EXPECT_LE(count, n * 0.13) << model;
  }
}

TEST(BuildScene, MinimalNetwork) {
  const SceneGraph scene = minimal_scene();
  EXPECT_EQ(scene.sky.texture, "sky_blue");
  EXPECT_EQ(scene.ground.texture, "ground_grass");
  EXPECT_EQ(scene.road.surface.triangle_count(), 2u);  // both junction shapes are degenerate
  EXPECT_NEAR(scene.road.surface.area(), 350.0, 1e-9);
  EXPECT_TRUE(scene.static_objects.empty());
  EXPECT_TRUE(scene.signal_heads.empty());
  EXPECT_TRUE(scene.vehicles.empty());
  // Bounds span 100 m, so the floor of 100 m applies to the diagonal.
  EXPECT_NEAR(scene.sky.radius, 1000.0, 1e-9);
  EXPECT_NEAR(scene.ground.extent.min.x, -200.0, 1e-9);
  EXPECT_NEAR(scene.ground.extent.max.x, 300.0, 1e-9);
  EXPECT_NEAR(scene.ground.extent.min.y, -200.0, 1e-9);
  EXPECT_NEAR(scene.ground.extent.max.y, 200.0, 1e-9);
}

TEST(BuildScene, LayerHeights) {
  const auto net = parse_network(read_fixture("net_two_lane_90m.net.xml"));
  const SceneGraph scene = build_scene(net, {}, {}, {}, {}, library());
  for (const auto& v : scene.road.surface.vertices) EXPECT_DOUBLE_EQ(v.position.y, kRoadSurfaceHeight);
  ASSERT_FALSE(scene.road.markings.empty());
  for (const auto& v : scene.road.markings.vertices) EXPECT_DOUBLE_EQ(v.position.y, kMarkingHeight);
  EXPECT_GT(kMarkingHeight, kRoadSurfaceHeight);
}

TEST(BuildScene, UnknownSkyNamesTheValidOnes) {
  SceneConfig config;
  config.sky = "sky_purple";
  try {
    minimal_scene(config);
    FAIL() << "expected AssetError";
  } catch (const AssetError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("sky_purple"), std::string::npos);
    for (auto name : kSkyTextureNames) EXPECT_NE(what.find(name), std::string::npos) << name;
  }
}

TEST(BuildScene, UnknownGround) {
  SceneConfig config;
  config.ground = "ground_lava";
  EXPECT_THROW(minimal_scene(config), AssetError);
}

TEST(BuildScene, InternalEdgesLeftToJunctions) {
  const auto net = parse_network(read_fixture("net_internal.net.xml"));
  const SceneGraph scene = build_scene(net, {}, {}, {}, {}, library());
  // Two 55 m lanes at the default width plus the 10 x 10 junction.
  EXPECT_NEAR(scene.road.surface.area(), 2 * 55 * kDefaultLaneWidth + 100.0, 1e-6);
}

TEST(BuildScene, SignalHeadsAndDarkness) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  const auto net = parse_network(read_fixture("net_minimal.net.xml"));
  const auto pois = parse_pois(read_fixture("pois_basic.add.xml"));
  const auto tls = parse_tls_states(read_fixture("tls_basic.xml"));
  const SceneGraph lit = build_scene(net, pois, {}, tls, {}, library());
  ASSERT_EQ(lit.signal_heads.size(), 1u);
  EXPECT_EQ(lit.signal_heads[0].tls_id, "J1");
  EXPECT_EQ(lit.signal_heads[0].design, HeadDesign::three_head);
  EXPECT_FALSE(lit.signal_heads[0].dark);
  EXPECT_EQ(lit.static_objects.size(), 3u);

  const SceneGraph unlit = build_scene(net, pois, {}, {}, {}, library());
  EXPECT_TRUE(unlit.signal_heads[0].dark);
}

TEST(BuildScene, VehiclesGetModels) {
  SmoothedTrack a;
  a.vehicle_id = "a";
  a.samples = {{0, 0, 0}};
  SceneConfig config;
  config.seed = 5;
  const SceneGraph scene = build_scene({}, {}, {a}, {}, config, library());
  ASSERT_EQ(scene.vehicles.size(), 1u);
  EXPECT_EQ(scene.vehicles[0].model_index, assign_vehicle_model("a", 5));
}

TEST(BuildScene, Deterministic) {
  const auto sc = synthetic::crossing({});
  const auto net = parse_network(sc.net);
  const auto pois = parse_pois(sc.pois);
  const auto a = build_scene(net, pois, {}, {}, {}, library());
  const auto b = build_scene(net, pois, {}, {}, {}, library());
  ASSERT_EQ(a.road.surface.vertices.size(), b.road.surface.vertices.size());
  for (std::size_t i = 0; i < a.road.surface.vertices.size(); ++i)
    EXPECT_EQ(a.road.surface.vertices[i].position, b.road.surface.vertices[i].position);
  EXPECT_EQ(a.road.surface.triangles, b.road.surface.triangles);
  EXPECT_EQ(a.static_objects.size(), b.static_objects.size());
}

TEST(BuildScene, NeedsAssets) {
  EXPECT_THROW(build_scene({}, {}, {}, {}, {}, nullptr), ContractError);
}
