#include "sumoviz/scene.hpp"

#include <algorithm>

#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"
#include "xml_reader.hpp"

namespace sumoviz {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::optional<SignalBinding> parse_binding(std::string_view id) {
  // tl:<tls_id>:<link_index>; tls ids may themselves contain ':'
  if (!id.starts_with("tl:")) return std::nullopt;
  const auto last = id.rfind(':');
  if (last <= 3) return std::nullopt;
  const auto link = detail::to_int(id.substr(last + 1));
  if (!link || *link < 0) return std::nullopt;
  return SignalBinding{std::string(id.substr(3, last - 3)), *link};
}

std::string join_names(auto const& names) {
  std::string out;
  for (auto name : names) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

}  // namespace

std::optional<HeadDesign> design_for_kind(std::string_view kind) {
  if (kind == "trafficlight2") return HeadDesign::two_head;
  if (kind == "trafficlight3") return HeadDesign::three_head;
  if (kind == "trafficlight_countdown") return HeadDesign::countdown;
  return std::nullopt;
}

std::size_t SceneGraph::static_triangle_count() const {
  std::size_t n = road.surface.triangle_count() + road.markings.triangle_count() + 2;
  for (const auto& o : static_objects) n += assets->model(o.model).triangle_count();
  for (const auto& h : signal_heads) n += assets->model(h.model).triangle_count();
  return n;
}

std::vector<StaticObject> place_static_objects(const PoiSet& pois) {
  std::vector<StaticObject> objects;
  objects.reserve(pois.pois.size());
  for (const auto& poi : pois.pois) {
    StaticObject obj;
    obj.kind = poi.kind;
    const bool known = std::find(kStaticModelNames.begin(), kStaticModelNames.end(), poi.kind) !=
                       kStaticModelNames.end();
    if (known) {
      obj.model = poi.kind;
    } else {
      obj.model = "marker";
      log::warn("poi '" + poi.id + "' has unknown kind '" + poi.kind + "'; using a marker");
    }
    obj.transform.translation = to_world(poi.position, 0.0);
    obj.transform.yaw = heading_to_yaw(poi.heading_deg.value_or(0.0));
    obj.transform.scale = poi.scale.value_or(1.0);
    if (design_for_kind(poi.kind)) {
      obj.signal = parse_binding(poi.id);
      if (!obj.signal)
        log::warn("traffic light poi '" + poi.id + "' does not follow 'tl:<tls>:<link>'; shown dark");
    }
    objects.push_back(std::move(obj));
  }
  return objects;
}

int assign_vehicle_model(std::string_view vehicle_id, std::uint64_t seed) {
  const std::uint64_t h = splitmix64(fnv1a(vehicle_id) ^ splitmix64(seed));
  return static_cast<int>(h % static_cast<std::uint64_t>(kCarModelCount));
}

SceneGraph build_scene(const RoadNetwork& network, const PoiSet& pois,
                       std::vector<SmoothedTrack> tracks, const SignalStateLog& signal_log,
                       const SceneConfig& config, std::shared_ptr<const AssetLibrary> assets) {
  if (!assets) throw ContractError("build_scene: no asset library");
  if (std::find(kSkyTextureNames.begin(), kSkyTextureNames.end(), config.sky) ==
          kSkyTextureNames.end() ||
      !assets->has_texture(config.sky)) {
    throw AssetError("unknown sky texture '" + config.sky + "'; valid names: " +
                     join_names(kSkyTextureNames));
  }
  if (std::find(kGroundTextureNames.begin(), kGroundTextureNames.end(), config.ground) ==
          kGroundTextureNames.end() ||
      !assets->has_texture(config.ground)) {
    throw AssetError("unknown ground texture '" + config.ground + "'; valid names: " +
                     join_names(kGroundTextureNames));
  }
  if (!(config.ground_tile_size > 0.0)) throw ContractError("ground tile size must be positive");

  SceneGraph scene;
  scene.rng_seed = config.seed;
  scene.assets = std::move(assets);

  Box2 bounds = network.bounds;
  if (bounds.empty()) bounds = {};
  const double diagonal = std::max(bounds.diagonal(), 100.0);
  scene.sky = {config.sky, kSkyRadiusFactor * diagonal, to_world(bounds.center(), 0.0)};
  scene.ground = {config.ground, config.ground_tile_size,
                  {bounds.min - Vec2{kGroundMargin, kGroundMargin},
                   bounds.max + Vec2{kGroundMargin, kGroundMargin}}};

  scene.road.surface.material = MaterialRef::flat(config.road_color, true);
  for (const auto& edge : network.edges) {
    if (edge.function == EdgeFunction::internal) continue;
    for (const auto& lane : edge.lanes)
      scene.road.surface.append(tessellate_lane_ribbon(lane.shape, lane.width));
  }
  for (const auto& junction : network.junctions)
    if (junction.shape.size() >= 3) scene.road.surface.append(triangulate_junction(junction.shape));
  scene.road.surface.lift(kRoadSurfaceHeight);

  scene.road.markings = generate_markings(network, config.markings);
  scene.road.markings.lift(kMarkingHeight);

  const SignalTimeline timeline = SignalTimeline::build(signal_log);
  for (auto& obj : place_static_objects(pois)) {
    if (const auto design = design_for_kind(obj.kind)) {
      SignalHead head;
      head.design = *design;
      head.model = obj.model;
      head.transform = obj.transform;
      if (obj.signal) {
        head.tls_id = obj.signal->tls_id;
        head.link_index = obj.signal->link_index;
      }
      head.dark = !obj.signal || !timeline.link(head.tls_id, head.link_index);
      if (obj.signal && head.dark)
        log::warn("signal head for tls '" + head.tls_id + "' link " +
                  std::to_string(head.link_index) + " has no logged states; shown dark");
      scene.signal_heads.push_back(std::move(head));
    } else {
      scene.static_objects.push_back(std::move(obj));
    }
  }

  scene.vehicles.reserve(tracks.size());
  for (auto& track : tracks) {
    const int model = assign_vehicle_model(track.vehicle_id, config.seed);
    scene.vehicles.push_back({std::move(track), model});
  }
  return scene;
}

}  // namespace sumoviz
