#include "sumoviz/bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>

#include "sumoviz/digest.hpp"
#include "sumoviz/error.hpp"

namespace sumoviz {

static_assert(std::endian::native == std::endian::little,
              "bundle writer assumes a little-endian host");

namespace {

using nlohmann::json;

class BufferWriter {
public:
  // Appends a block aligned to 8 bytes (typed-array views need it) and
  // returns its reference.
  template <typename T>
  json put(const std::vector<T>& data) {
    while (bytes_.size() % 8 != 0) bytes_.push_back(0);
    const std::size_t offset = bytes_.size();
    const std::size_t length = data.size() * sizeof(T);
    bytes_.resize(offset + length);
    if (length > 0) std::memcpy(bytes_.data() + offset, data.data(), length);
    return {{"offset", offset}, {"length", length}};
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
  std::vector<std::uint8_t> bytes_;
};

json color_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

json material_json(const MaterialRef& m) {
  json j = {{"kind", m.kind == MaterialKind::textured ? "textured" : "flat_color"},
            {"color", color_json(m.color)},
            {"double_sided", m.double_sided},
            {"emissive", m.emissive}};
  if (m.kind == MaterialKind::textured) j["texture"] = m.texture_name;
  return j;
}

json mesh_json(BufferWriter& out, const Mesh& mesh) {
  std::vector<float> positions;
  std::vector<float> normals;
  std::vector<float> uvs;
  positions.reserve(mesh.vertices.size() * 3);
  normals.reserve(mesh.vertices.size() * 3);
  for (const Vertex& v : mesh.vertices) {
    for (double c : {v.position.x, v.position.y, v.position.z}) positions.push_back(float(c));
    for (double c : {v.normal.x, v.normal.y, v.normal.z}) normals.push_back(float(c));
    if (mesh.has_uv) {
      uvs.push_back(float(v.uv.x));
      uvs.push_back(float(v.uv.y));
    }
  }
  std::vector<std::uint32_t> indices;
  indices.reserve(mesh.triangles.size() * 3);
  for (const Triangle& t : mesh.triangles) indices.insert(indices.end(), t.begin(), t.end());

  json j = {{"vertex_count", mesh.vertices.size()},
            {"triangle_count", mesh.triangles.size()},
            {"material", material_json(mesh.material)},
            {"positions", out.put(positions)},
            {"normals", out.put(normals)},
            {"indices", out.put(indices)}};
  j["positions"]["layout"] = "f32 x,y,z";
  j["normals"]["layout"] = "f32 x,y,z";
  j["indices"]["layout"] = "u32 triangle list";
  if (mesh.has_uv) {
    j["uvs"] = out.put(uvs);
    j["uvs"]["layout"] = "f32 u,v";
  }
  return j;
}

std::string_view role_name(PartRole role) {
  switch (role) {
    case PartRole::body: return "body";
    case PartRole::lamp_red: return "lamp_red";
    case PartRole::lamp_yellow: return "lamp_yellow";
    case PartRole::lamp_green: return "lamp_green";
    case PartRole::segment: return "segment";
  }
  return "body";
}

json transforms_block(BufferWriter& out, const std::vector<Transform>& transforms) {
  std::vector<float> data;
  data.reserve(transforms.size() * 16);
  for (const Transform& t : transforms)
    for (double m : t.matrix()) data.push_back(float(m));
  json j = out.put(data);
  j["count"] = transforms.size();
  j["layout"] = "f32 4x4 column-major model matrix";
  return j;
}

int color_code(SignalColor c) { return static_cast<int>(c); }

}  // namespace

nlohmann::json write_bundle(const SceneGraph& scene, const SignalTimeline& timeline,
                            const BundleOptions& options, const std::filesystem::path& dir) {
  if (!scene.assets) throw ContractError("write_bundle: scene has no asset library");
  BufferWriter out;
  json m;
  m["format"] = "sumoviz-bundle";
  m["version"] = kBundleVersion;
  m["frame"] = {{"x", "east"}, {"y", "up"}, {"z", "south"}, {"units", "m"},
                {"heading", "compass degrees, clockwise from north; yaw = -heading about +y"}};
  m["time_span"] = json::array({options.begin, options.end});
  m["sky"] = {{"texture", scene.sky.texture},
              {"radius", scene.sky.radius},
              {"center", vec3_json(scene.sky.center)},
              {"mapping", "equirectangular; u = atan2(d.x, -d.z) / 2pi, v = 0.5 - elevation / pi"}};
  const Box2& g = scene.ground.extent;
  m["ground"] = {{"texture", scene.ground.texture},
                 {"tile_size", scene.ground.tile_size},
                 {"extent", json::array({g.min.x, g.min.y, g.max.x, g.max.y})}};
  m["light"] = {{"direction", vec3_json(scene.light.direction)},
                {"intensity", scene.light.intensity},
                {"ambient", 0.35}};

  json meshes = json::array();
  json surface = mesh_json(out, scene.road.surface);
  surface["name"] = "road_surface";
  surface["layer"] = "surface";
  meshes.push_back(surface);
  json markings = mesh_json(out, scene.road.markings);
  markings["name"] = "road_markings";
  markings["layer"] = "markings";
  meshes.push_back(markings);
  m["meshes"] = meshes;

  std::set<std::string> model_names;
  std::vector<Transform> object_transforms;
  json objects = json::array();
  for (const StaticObject& o : scene.static_objects) {
    model_names.insert(o.model);
    objects.push_back({{"kind", o.kind}, {"model", o.model}, {"transform_index", object_transforms.size()}});
    object_transforms.push_back(o.transform);
  }
  m["static_objects"] = {{"items", objects}, {"transforms", transforms_block(out, object_transforms)}};

  std::vector<Transform> head_transforms;
  json heads = json::array();
  for (const SignalHead& h : scene.signal_heads) {
    model_names.insert(h.model);
    heads.push_back({{"tls_id", h.tls_id},
                     {"link_index", h.link_index},
                     {"design", to_string(h.design)},
                     {"model", h.model},
                     {"dark", h.dark},
                     {"transform_index", head_transforms.size()}});
    head_transforms.push_back(h.transform);
  }
  m["signal_heads"] = {{"items", heads},
                       {"transforms", transforms_block(out, head_transforms)},
                       {"yellow_duration", options.yellow_duration}};

  json timelines = json::array();
  for (const auto& [tls_id, links] : timeline.links()) {
    for (std::size_t li = 0; li < links.size(); ++li) {
      // 16 bytes per interval: f64 t_start, u32 colour, u32 padding.
      std::vector<std::uint8_t> raw;
      raw.reserve(links[li].intervals.size() * 16);
      for (const ColorInterval& iv : links[li].intervals) {
        std::uint8_t rec[16] = {};
        const std::uint32_t code = static_cast<std::uint32_t>(color_code(iv.color));
        std::memcpy(rec, &iv.t_start, 8);
        std::memcpy(rec + 8, &code, 4);
        raw.insert(raw.end(), rec, rec + 16);
      }
      json ref = out.put(raw);
      ref["count"] = links[li].intervals.size();
      ref["layout"] = "f64 t_start, u32 color (0 green, 1 yellow, 2 red, 3 dark), u32 pad";
      timelines.push_back({{"tls_id", tls_id},
                           {"link_index", li},
                           {"logged_yellow", links[li].logged_yellow},
                           {"intervals", ref}});
    }
  }
  m["signal_timelines"] = timelines;

  json vehicles = json::array();
  for (const VehicleInstance& v : scene.vehicles) {
    const std::string model = car_model_name(v.model_index);
    model_names.insert(model);
    std::vector<float> samples;
    samples.reserve(v.track.samples.size() * 3);
    for (const TrackSample& s : v.track.samples) {
      samples.push_back(float(s.x));
      samples.push_back(float(s.y));
      samples.push_back(float(s.heading_deg));
    }
    json ref = out.put(samples);
    ref["layout"] = "f32 x,y (network frame, m), heading_deg";
    vehicles.push_back({{"id", v.track.vehicle_id},
                        {"model", model},
                        {"fps", v.track.fps},
                        {"t0", v.track.t0},
                        {"frame_count", v.track.samples.size()},
                        {"samples", ref}});
  }
  m["vehicles"] = vehicles;

  json models = json::array();
  for (const std::string& name : model_names) {
    const Model& model = scene.assets->model(name);
    json parts = json::array();
    for (const ModelPart& p : model.parts) {
      json part = mesh_json(out, p.mesh);
      part["role"] = role_name(p.role);
      if (p.role == PartRole::segment) part["segment"] = p.segment;
      parts.push_back(part);
    }
    models.push_back({{"name", name}, {"parts", parts}});
  }
  m["models"] = models;

  json textures = json::array();
  for (const std::string& name : {scene.sky.texture, scene.ground.texture}) {
    const Texture& tex = scene.assets->texture(name);
    json ref = out.put(tex.pixels);
    textures.push_back({{"name", name},
                        {"width", tex.width},
                        {"height", tex.height},
                        {"format", "rgb8, row 0 = top"},
                        {"data", ref}});
  }
  m["textures"] = textures;

  const auto& bytes = out.bytes();
  m["buffer"] = {{"uri", kBundleBufferName},
                 {"byte_length", bytes.size()},
                 {"sha256", sha256_hex(std::span<const std::uint8_t>(bytes))}};

  std::filesystem::create_directories(dir);
  {
    std::ofstream bin(dir / kBundleBufferName, std::ios::binary);
    bin.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!bin) throw RenderError("cannot write " + (dir / kBundleBufferName).string());
  }
  {
    std::ofstream js(dir / kBundleManifestName, std::ios::binary);
    js << m.dump(2) << '\n';
    if (!js) throw RenderError("cannot write " + (dir / kBundleManifestName).string());
  }
  return m;
}

std::span<const std::uint8_t> Bundle::block(const nlohmann::json& ref) const {
  const auto offset = ref.at("offset").get<std::size_t>();
  const auto length = ref.at("length").get<std::size_t>();
  if (offset > buffer.size() || length > buffer.size() - offset)
    throw ValidationError("bundle block [" + std::to_string(offset) + ", +" +
                          std::to_string(length) + ") outside buffer");
  return {buffer.data() + offset, length};
}

Bundle read_bundle(const std::filesystem::path& dir) {
  Bundle b;
  std::ifstream js(dir / kBundleManifestName, std::ios::binary);
  if (!js) throw ValidationError("missing " + (dir / kBundleManifestName).string());
  try {
    b.manifest = json::parse(js);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bundle manifest: ") + e.what());
  }
  if (b.manifest.value("version", -1) != kBundleVersion)
    throw ValidationError("unsupported bundle version");

  std::ifstream bin(dir / kBundleBufferName, std::ios::binary);
  if (!bin) throw ValidationError("missing " + (dir / kBundleBufferName).string());
  b.buffer.assign(std::istreambuf_iterator<char>(bin), std::istreambuf_iterator<char>());
  const json& info = b.manifest.at("buffer");
  if (info.at("byte_length").get<std::size_t>() != b.buffer.size())
    throw ValidationError("bundle buffer length mismatch");
  if (info.at("sha256").get<std::string>() != sha256_hex(std::span<const std::uint8_t>(b.buffer)))
    throw ValidationError("bundle buffer digest mismatch");
  return b;
}

}  // namespace sumoviz
