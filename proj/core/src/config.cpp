#include "sumoviz/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "sumoviz/assets.hpp"
#include "sumoviz/ingest.hpp"

namespace sumoviz {
namespace {

template <typename T>
const char* type_label() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else if constexpr (std::is_floating_point_v<T>) return "a number";
  else return "a string";
}

// Map node whose keys are checked against the ones actually read.
class Section {
public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError("'" + label() + "' must be a mapping");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  YAML::Node node(const std::string& key) {
    known_.insert(key);
    return node_.IsMap() ? node_[key] : YAML::Node();
  }

  Section section(const std::string& key) { return {node(key), qualified(key)}; }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const YAML::Node n = node_[key];
    try {
      if (!n.IsScalar()) throw YAML::BadConversion(n.Mark());
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("'" + qualified(key) + "' must be " + type_label<T>());
    }
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (auto v = get<T>(key)) out = *v;
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    return *get<T>(key);
  }

  Vec3 vec3(const std::string& key) {
    const YAML::Node n = node(key);
    if (!n.IsSequence() || n.size() != 3)
      throw ConfigError("'" + qualified(key) + "' must be a list [x, y, height]");
    double v[3];
    for (std::size_t i = 0; i < 3; ++i) {
      try {
        v[i] = n[i].as<double>();
      } catch (const YAML::Exception&) {
        throw ConfigError("'" + qualified(key) + "' must contain numbers");
      }
    }
    return to_world({v[0], v[1]}, v[2]);
  }

  // Unknown keys are an error: a typo should not silently become a default.
  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!known_.contains(key)) {
        std::string expected;
        for (const auto& k : known_) expected += (expected.empty() ? "" : ", ") + k;
        throw ConfigError("unknown key '" + qualified(key) + "' (expected one of: " + expected +
                          ")");
      }
    }
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> known_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

template <std::size_t N>
void check_name(const std::string& key, const std::string& value,
                const std::array<std::string_view, N>& names) {
  if (std::find(names.begin(), names.end(), value) != names.end()) return;
  std::string list;
  for (auto n : names) list += (list.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("'" + key + "': unknown texture '" + value + "' (valid: " + list + ")");
}

void read_inputs(Section s, const std::filesystem::path& base, InputPaths& in) {
  in.net = resolve(base, s.require<std::string>("net"));
  in.fcd = resolve(base, s.require<std::string>("fcd"));
  if (auto p = s.get<std::string>("tls")) in.tls = resolve(base, *p);
  if (auto p = s.get<std::string>("pois")) in.pois = resolve(base, *p);
  s.finish();
}

void read_camera(Section s, CameraParams& cam) {
  switch (cam.mode) {
    case CameraMode::eulerian:
      if (!s.has("position")) throw ConfigError("render.camera.position required for eulerian mode");
      if (!s.has("look_at")) throw ConfigError("render.camera.look_at required for eulerian mode");
      cam.eulerian.position = s.vec3("position");
      cam.eulerian.look_at = s.vec3("look_at");
      break;
    case CameraMode::lagrangian:
      if (!s.has("vehicle")) throw ConfigError("render.camera.vehicle required for lagrangian mode");
      cam.lagrangian.vehicle_id = *s.get<std::string>("vehicle");
      break;
    case CameraMode::cinematic: {
      const YAML::Node path = s.node("path");
      if (!path || !path.IsSequence() || path.size() < 2)
        throw ConfigError("render.camera.path required for cinematic mode (at least 2 waypoints)");
      for (std::size_t i = 0; i < path.size(); ++i) {
        Section wp(path[i], "render.camera.path[" + std::to_string(i) + "]");
        CinematicWaypoint w;
        w.t = wp.require<double>("t");
        if (!wp.has("position") || !wp.has("look_at"))
          throw ConfigError("'" + wp.qualified("position") + "' and look_at are required");
        w.position = wp.vec3("position");
        w.look_at = wp.vec3("look_at");
        wp.finish();
        cam.cinematic.waypoints.push_back(w);
      }
      break;
    }
  }
  // Keys belonging to other modes are accepted so one file can switch modes.
  for (const char* key : {"position", "look_at", "vehicle", "path"}) s.node(key);
  s.read("distance_behind", cam.lagrangian.distance_behind);
  s.read("height", cam.lagrangian.height);
  s.read("look_ahead", cam.lagrangian.look_ahead);
  s.read("look_height", cam.lagrangian.look_height);
  s.finish();
}

std::optional<CameraMode> mode_from_string(std::string_view text) {
  if (text == "eulerian") return CameraMode::eulerian;
  if (text == "lagrangian") return CameraMode::lagrangian;
  if (text == "cinematic") return CameraMode::cinematic;
  return std::nullopt;
}

void read_render(Section s, const std::filesystem::path& base, RenderJob& job) {
  const auto mode_text = s.require<std::string>("mode");
  const auto mode = mode_from_string(mode_text);
  if (!mode)
    throw ConfigError("'render.mode': unknown mode '" + mode_text +
                      "' (valid: eulerian, lagrangian, cinematic)");
  job.camera.mode = *mode;

  VisualParams& v = job.visual;
  s.read("width", v.width);
  s.read("height", v.height);
  s.read("sky", v.sky);
  s.read("ground", v.ground);
  s.read("ground_tile", v.ground_tile);
  s.read("seed", v.seed);
  s.read("yellow_duration", v.yellow_duration);
  if (auto dir = s.get<std::string>("asset_dir")) v.asset_dir = resolve(base, *dir);
  s.read("fov", job.camera.vertical_fov_deg);
  s.read("near", job.camera.near);
  s.read("far", job.camera.far);
  s.read("threads", job.threads);

  if (v.width <= 0 || v.height <= 0) throw ConfigError("render.width/height must be positive");
  if (!(v.ground_tile > 0.0)) throw ConfigError("render.ground_tile must be positive");
  if (!(v.yellow_duration >= 0.0)) throw ConfigError("render.yellow_duration must be >= 0");
  if (!(job.camera.vertical_fov_deg > 0.0 && job.camera.vertical_fov_deg < 180.0))
    throw ConfigError("render.fov must lie in (0, 180) degrees");
  if (!(job.camera.near > 0.0 && job.camera.far > job.camera.near))
    throw ConfigError("render.near/far must satisfy 0 < near < far");
  check_name("render.sky", v.sky, kSkyTextureNames);
  check_name("render.ground", v.ground, kGroundTextureNames);
  job.camera.aspect = static_cast<double>(v.width) / v.height;

  read_camera(s.section("camera"), job.camera);
  try {
    if (job.camera.mode == CameraMode::cinematic) job.camera.cinematic.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("render.camera.path: ") + e.what());
  }
  s.finish();
}

void read_output(Section s, const std::filesystem::path& base, OutputSpec& out) {
  if (auto p = s.get<std::string>("frames_dir")) out.frames_dir = resolve(base, *p);
  else out.frames_dir = resolve(base, out.frames_dir.string());
  if (auto p = s.get<std::string>("manifest")) out.manifest = resolve(base, *p);
  if (auto p = s.get<std::string>("bundle")) out.bundle = resolve(base, *p);
  if (auto p = s.get<std::string>("tracks_csv")) out.tracks_csv = resolve(base, *p);
  s.read("raw_stream", out.raw_stream);
  s.read("encoder", out.encoder);
  s.read("write_frames", out.write_frames);
  s.finish();
}

}  // namespace

std::string_view to_string(CameraMode mode) {
  switch (mode) {
    case CameraMode::eulerian: return "eulerian";
    case CameraMode::lagrangian: return "lagrangian";
    case CameraMode::cinematic: return "cinematic";
  }
  return "?";
}

RenderJob load_config(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("config is not valid YAML: " + e.msg + " (line " +
                      std::to_string(e.mark.line + 1) + ")");
  }
  if (!root || root.IsNull()) throw ConfigError("config is empty; missing required section 'inputs'");

  RenderJob job;
  Section top(root, "");
  if (!top.has("inputs")) throw ConfigError("missing required section 'inputs'");
  read_inputs(top.section("inputs"), base_dir, job.inputs);

  Section time = top.section("time");
  if (auto b = time.get<double>("begin")) job.time.begin = *b;
  if (auto e = time.get<double>("end")) job.time.end = *e;
  time.read("fps", job.smoothing.fps);
  time.finish();
  if (job.time.begin && job.time.end && !(*job.time.end >= *job.time.begin))
    throw ConfigError("time.end must not precede time.begin");

  Section smoothing = top.section("smoothing");
  smoothing.read("window", job.smoothing.window);
  smoothing.read("heading_window", job.smoothing.heading_window);
  smoothing.read("min_step", job.smoothing.min_step);
  smoothing.finish();
  try {
    job.smoothing.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("smoothing: ") + e.what());
  }

  if (!top.has("render")) throw ConfigError("missing required section 'render' (render.mode)");
  read_render(top.section("render"), base_dir, job);
  read_output(top.section("output"), base_dir, job.output);
  top.finish();
  return job;
}

RenderJob load_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path.string());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return load_config(text, path.parent_path());
}

}  // namespace sumoviz
