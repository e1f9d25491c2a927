#pragma once

// Immutable render-ready world assembled from parsed inputs.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumoviz/assets.hpp"
#include "sumoviz/ingest.hpp"
#include "sumoviz/mesh.hpp"
#include "sumoviz/signals.hpp"
#include "sumoviz/smoothing.hpp"
#include "sumoviz/tessellation.hpp"

namespace sumoviz {

// Layer heights above the ground plane.
inline constexpr double kRoadSurfaceHeight = 0.01;
inline constexpr double kMarkingHeight = kRoadSurfaceHeight + 0.02;

inline constexpr double kGroundMargin = 200.0;
inline constexpr double kSkyRadiusFactor = 10.0;

struct SkySpec {
  std::string texture;
  double radius = 1000.0;
  Vec3 center;
};

struct GroundSpec {
  std::string texture;
  double tile_size = 8.0;
  Box2 extent;  // network frame
};

struct RoadLayers {
  Mesh surface;
  Mesh markings;
};

struct SignalBinding {
  std::string tls_id;
  int link_index = 0;
};

struct StaticObject {
  std::string kind;
  std::string model;
  Transform transform;
  std::optional<SignalBinding> signal;  // set for bound traffic-light POIs
};

struct SignalHead {
  std::string tls_id;  // empty when unbound
  int link_index = 0;
  HeadDesign design = HeadDesign::three_head;
  std::string model;
  Transform transform;
  bool dark = false;  // no timeline for this head
};

struct VehicleInstance {
  SmoothedTrack track;
  int model_index = 0;
};

struct DirectionalLight {
  Vec3 direction = normalized(Vec3{-0.4, -1.0, -0.3});  // direction the light travels
  double intensity = 1.0;
};

struct SceneConfig {
  std::string sky = "sky_blue";
  std::string ground = "ground_grass";
  double ground_tile_size = 8.0;
  std::uint64_t seed = 0;
  Rgb road_color{95, 95, 100};
  MarkingStyle markings;
};

struct SceneGraph {
  SkySpec sky;
  GroundSpec ground;
  RoadLayers road;
  std::vector<StaticObject> static_objects;
  std::vector<SignalHead> signal_heads;
  std::vector<VehicleInstance> vehicles;
  DirectionalLight light;
  std::uint64_t rng_seed = 0;
  std::shared_ptr<const AssetLibrary> assets;

  std::size_t static_triangle_count() const;
};

/// Places POIs. Traffic-light kinds whose id reads "tl:<tls>:<link>" get a
/// signal binding; unknown kinds use the marker model.
std::vector<StaticObject> place_static_objects(const PoiSet& pois);

/// Deterministic, near-uniform pick of one of the car models.
int assign_vehicle_model(std::string_view vehicle_id, std::uint64_t seed);

/// Throws AssetError when the sky or ground texture is not in the library.
SceneGraph build_scene(const RoadNetwork& network, const PoiSet& pois,
                       std::vector<SmoothedTrack> tracks, const SignalStateLog& signal_log,
                       const SceneConfig& config, std::shared_ptr<const AssetLibrary> assets);

std::optional<HeadDesign> design_for_kind(std::string_view kind);

}  // namespace sumoviz
