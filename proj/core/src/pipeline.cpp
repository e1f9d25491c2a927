#include "sumoviz/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "sumoviz/bundle.hpp"
#include "sumoviz/camera.hpp"
#include "sumoviz/digest.hpp"
#include "sumoviz/image.hpp"
#include "sumoviz/log.hpp"
#include "sumoviz/render.hpp"
#include "sumoviz/smoothing.hpp"

namespace sumoviz {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Camera coordinates are reported in the network frame, as configured.
json network_point(Vec3 v) { return json::array({v.x, -v.z, v.y}); }

json parameters_json(const RenderJob& job, double begin, double end) {
  const auto& cam = job.camera;
  json camera = {{"mode", to_string(cam.mode)},
                 {"fov", cam.vertical_fov_deg},
                 {"near", cam.near},
                 {"far", cam.far}};
  switch (cam.mode) {
    case CameraMode::eulerian:
      camera["position"] = network_point(cam.eulerian.position);
      camera["look_at"] = network_point(cam.eulerian.look_at);
      break;
    case CameraMode::lagrangian:
      camera["vehicle"] = cam.lagrangian.vehicle_id;
      camera["distance_behind"] = cam.lagrangian.distance_behind;
      camera["height"] = cam.lagrangian.height;
      camera["look_ahead"] = cam.lagrangian.look_ahead;
      camera["look_height"] = cam.lagrangian.look_height;
      break;
    case CameraMode::cinematic: {
      json path = json::array();
      for (const auto& w : cam.cinematic.waypoints)
        path.push_back({{"t", w.t},
                        {"position", network_point(w.position)},
                        {"look_at", network_point(w.look_at)}});
      camera["path"] = path;
      break;
    }
  }
  const auto& v = job.visual;
  return {{"time", {{"begin", begin}, {"end", end}, {"fps", job.fps()}}},
          {"smoothing",
           {{"window", job.smoothing.window},
            {"heading_window", job.smoothing.heading_window},
            {"min_step", job.smoothing.min_step}}},
          {"render",
           {{"width", v.width},
            {"height", v.height},
            {"sky", v.sky},
            {"ground", v.ground},
            {"ground_tile", v.ground_tile},
            {"seed", v.seed},
            {"yellow_duration", v.yellow_duration},
            {"camera", camera}}}};
}

json input_digest(const std::filesystem::path& path) {
  return {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

// Ordered sink for raw RGB24 frames: stdout or a child encoder's stdin.
class RawStream {
public:
  explicit RawStream(const std::string& encoder) {
    if (encoder.empty()) {
      file_ = stdout;
    } else {
      file_ = popen(encoder.c_str(), "w");
      if (!file_) throw RenderError("cannot start encoder '" + encoder + "'");
      pipe_ = true;
    }
  }
  RawStream(const RawStream&) = delete;
  RawStream& operator=(const RawStream&) = delete;
  ~RawStream() {
    if (file_ && pipe_) pclose(file_);
  }

  void write(const Image& image) {
    if (std::fwrite(image.pixels.data(), 1, image.pixels.size(), file_) != image.pixels.size())
      throw RenderError("raw frame stream write failed");
  }

  void close() {
    std::fflush(file_);
    if (pipe_) {
      const int status = pclose(file_);
      file_ = nullptr;
      if (status != 0) throw RenderError("encoder exited with status " + std::to_string(status));
    }
  }

private:
  std::FILE* file_ = nullptr;
  bool pipe_ = false;
};

const VehicleInstance* find_vehicle(const SceneGraph& scene, const std::string& id) {
  for (const auto& v : scene.vehicles)
    if (v.track.vehicle_id == id) return &v;
  return nullptr;
}

struct FrameRecord {
  enum class State { pending, written, skipped, failed } state = State::pending;
  double t = 0.0;
  std::string png_sha256;
  std::string rgb_sha256;
  std::string reason;
};

}  // namespace

std::vector<double> frame_times(double begin, double end, double fps) {
  if (!(fps > 0.0)) throw ContractError("fps must be positive");
  if (end < begin) return {};
  const std::size_t n = frame_count(begin, end, fps);
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = begin + static_cast<double>(i) / fps;
  return times;
}

std::string frame_file_name(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%06zu.png", index);
  return name;
}

LoadedInputs load_inputs(const RenderJob& job) {
  LoadedInputs in;
  in.digests = json::object();
  in.network = parse_network(read_text_file(job.inputs.net.string()));
  in.digests["net"] = input_digest(job.inputs.net);
  in.fcd = parse_fcd(read_text_file(job.inputs.fcd.string()));
  in.digests["fcd"] = input_digest(job.inputs.fcd);
  if (job.inputs.tls) {
    in.tls = parse_tls_states(read_text_file(job.inputs.tls->string()));
    in.digests["tls"] = input_digest(*job.inputs.tls);
  }
  if (job.inputs.pois) {
    in.pois = parse_pois(read_text_file(job.inputs.pois->string()));
    in.digests["pois"] = input_digest(*job.inputs.pois);
  }
  return in;
}

PreparedJob prepare_job(const RenderJob& job) {
  PreparedJob p;
  auto start = Clock::now();
  p.inputs = load_inputs(job);
  p.load_seconds = seconds_since(start);

  start = Clock::now();
  const unsigned threads = resolve_threads(job.threads);
  std::vector<SmoothedTrack> tracks = smooth_log(p.inputs.fcd, job.smoothing, threads);
  if (job.output.tracks_csv) {
    std::ofstream csv(*job.output.tracks_csv);
    if (!csv) throw RenderError("cannot write " + job.output.tracks_csv->string());
    write_tracks_csv(csv, tracks);
  }

  double first = 0.0;
  double last = 0.0;
  bool any = false;
  for (const auto& t : tracks) {
    first = any ? std::min(first, t.t0) : t.t0;
    last = any ? std::max(last, t.end_time()) : t.end_time();
    any = true;
  }
  p.begin = job.time.begin.value_or(first);
  p.end = job.time.end.value_or(std::max(last, p.begin));

  SceneConfig sc;
  sc.sky = job.visual.sky;
  sc.ground = job.visual.ground;
  sc.ground_tile_size = job.visual.ground_tile;
  sc.seed = job.visual.seed;
  auto dir = job.visual.asset_dir ? job.visual.asset_dir : AssetLibrary::override_dir_from_env();
  auto assets = std::make_shared<const AssetLibrary>(AssetLibrary::load(dir));
  p.timeline = SignalTimeline::build(p.inputs.tls);
  p.scene = build_scene(p.inputs.network, p.inputs.pois, std::move(tracks), p.inputs.tls, sc,
                        std::move(assets));
  p.build_seconds = seconds_since(start);

  const auto& n = p.inputs.network;
  log::info("scene: " + std::to_string(n.edges.size()) + " edges, " +
            std::to_string(p.scene.static_triangle_count()) + " static triangles, " +
            std::to_string(p.scene.vehicles.size()) + " vehicles");
  return p;
}

SequenceResult render_sequence(const RenderJob& job) {
  const auto wall_start = Clock::now();
  PreparedJob prep = prepare_job(job);
  const std::vector<double> times = frame_times(prep.begin, prep.end, job.fps());

  const VehicleInstance* followed = nullptr;
  if (job.camera.mode == CameraMode::lagrangian) {
    followed = find_vehicle(prep.scene, job.camera.lagrangian.vehicle_id);
    const bool present = followed && std::any_of(times.begin(), times.end(), [&](double t) {
                           return followed->track.sample_at(t) != nullptr;
                         });
    if (!present)
      throw RenderError("vehicle '" + job.camera.lagrangian.vehicle_id +
                        "' is absent for the whole time window");
  }

  const auto& out = job.output;
  if (out.write_frames) std::filesystem::create_directories(out.frames_dir);
  std::optional<RawStream> raw;
  if (out.raw_stream) raw.emplace(out.encoder);

  const SignalDisplay signals{&prep.timeline, job.visual.yellow_duration};
  std::vector<FrameRecord> records(times.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> rendered{0};
  std::mutex order_mutex;
  std::condition_variable order_cv;
  std::size_t next_to_stream = 0;

  // Raw frames must leave in order; a worker holding frame i waits for i-1.
  auto stream_in_order = [&](std::size_t i, const Image* image) {
    std::unique_lock lock(order_mutex);
    order_cv.wait(lock, [&] { return next_to_stream == i; });
    try {
      if (image) raw->write(*image);
    } catch (...) {
      ++next_to_stream;
      order_cv.notify_all();
      throw;
    }
    ++next_to_stream;
    order_cv.notify_all();
  };

  const auto render_start = Clock::now();
  auto worker = [&] {
    for (std::size_t i = next++; i < times.size(); i = next++) {
      FrameRecord& rec = records[i];
      rec.t = times[i];
      bool streamed = false;
      try {
        Camera camera;
        try {
          camera = build_camera(job.camera, prep.scene, rec.t);
        } catch (const VehicleAbsentError& e) {
          rec.state = FrameRecord::State::skipped;
          rec.reason = e.what();
          if (raw) {
            streamed = true;
            stream_in_order(i, nullptr);
          }
          continue;
        }
        FrameBuffer fb = render_frame(prep.scene, camera, rec.t, signals, job.visual.width,
                                      job.visual.height);
        rec.rgb_sha256 = sha256_hex(std::span<const std::uint8_t>(fb.color.pixels));
        if (out.write_frames) {
          const auto png = encode_png(fb.color);
          rec.png_sha256 = sha256_hex(std::span<const std::uint8_t>(png));
          const auto path = out.frames_dir / frame_file_name(i);
          std::ofstream file(path, std::ios::binary);
          file.write(reinterpret_cast<const char*>(png.data()),
                     static_cast<std::streamsize>(png.size()));
          if (!file) throw RenderError("cannot write " + path.string());
        }
        if (raw) {
          streamed = true;
          stream_in_order(i, &fb.color);
        }
        rec.state = FrameRecord::State::written;
        ++rendered;
      } catch (const std::exception& e) {
        rec.state = FrameRecord::State::failed;
        rec.reason = e.what();
        log::error("frame " + std::to_string(i) + ": " + e.what());
        if (raw && !streamed) stream_in_order(i, nullptr);
      }
    }
  };

  const unsigned threads =
      std::min<unsigned>(resolve_threads(job.threads), std::max<std::size_t>(1, times.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  const double render_seconds = seconds_since(render_start);

  SequenceResult result;
  result.frame_count = times.size();
  result.frames_rendered = rendered.load();
  json frames = json::array();
  json skipped = json::array();
  json failed = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const FrameRecord& r = records[i];
    switch (r.state) {
      case FrameRecord::State::written: {
        json f = {{"index", i}, {"t", r.t}, {"rgb_sha256", r.rgb_sha256}};
        if (out.write_frames) {
          f["file"] = frame_file_name(i);
          f["sha256"] = r.png_sha256;
        }
        frames.push_back(f);
        break;
      }
      case FrameRecord::State::skipped:
        result.skipped.push_back({i, r.t, r.reason});
        skipped.push_back({{"index", i}, {"t", r.t}, {"reason", r.reason}});
        break;
      case FrameRecord::State::failed:
      case FrameRecord::State::pending:
        result.failed.push_back({i, r.t, r.reason});
        failed.push_back({{"index", i}, {"t", r.t}, {"reason", r.reason}});
        break;
    }
  }
  if (raw) {
    try {
      raw->close();
    } catch (const std::exception& e) {
      result.failed.push_back({times.size(), prep.end, e.what()});
      failed.push_back({{"stream", e.what()}});
    }
  }

  json& m = result.manifest;
  m["tool"] = "sumoviz";
  m["inputs"] = prep.inputs.digests;
  m["parameters"] = parameters_json(job, prep.begin, prep.end);
  m["frame_count"] = result.frame_count;
  m["frames_rendered"] = result.frames_rendered;
  m["frames"] = frames;
  m["skipped"] = skipped;
  m["failed"] = failed;
  m["timing"] = {{"load_s", prep.load_seconds},
                 {"build_s", prep.build_seconds},
                 {"render_s", render_seconds},
                 {"wall_s", seconds_since(wall_start)}};

  const auto manifest_path = out.manifest.value_or(out.frames_dir / "manifest.json");
  if (manifest_path.has_parent_path()) std::filesystem::create_directories(manifest_path.parent_path());
  std::ofstream mf(manifest_path);
  mf << m.dump(2) << '\n';
  if (!mf) throw RenderError("cannot write " + manifest_path.string());
  return result;
}

json export_bundle(const RenderJob& job) {
  if (!job.output.bundle) throw ConfigError("output.bundle is required for export");
  PreparedJob prep = prepare_job(job);
  return write_bundle(prep.scene, prep.timeline,
                      {prep.begin, prep.end, job.visual.yellow_duration}, *job.output.bundle);
}

void print_info(const RenderJob& job, std::ostream& out) {
  const LoadedInputs in = load_inputs(job);
  const auto& n = in.network;
  std::size_t internal = 0;
  for (const auto& e : n.edges) internal += e.function == EdgeFunction::internal ? 1 : 0;
  out << std::fixed << std::setprecision(2);
  out << "network: " << n.edges.size() << " edges (" << internal << " internal), "
      << n.lane_count() << " lanes, " << n.junctions.size() << " junctions, "
      << n.signal_programs.size() << " signal programs\n";
  out << "  bounds: [" << n.bounds.min.x << ", " << n.bounds.min.y << "] - [" << n.bounds.max.x
      << ", " << n.bounds.max.y << "]\n";

  std::size_t samples = 0;
  double first = 0.0;
  double last = 0.0;
  bool any = false;
  for (const auto& [id, list] : in.fcd.vehicles) {
    samples += list.size();
    if (list.empty()) continue;
    first = any ? std::min(first, list.front().t) : list.front().t;
    last = any ? std::max(last, list.back().t) : list.back().t;
    any = true;
  }
  out << "trajectories: " << in.fcd.vehicles.size() << " vehicles, " << samples
      << " samples, t = [" << first << ", " << last << "] s, step " << in.fcd.time_step << " s\n";

  if (job.inputs.tls) {
    std::map<std::string, std::size_t> per_tls;
    for (const auto& e : in.tls.entries) ++per_tls[e.tls_id];
    out << "signal states: " << in.tls.entries.size() << " entries, " << per_tls.size()
        << " signals\n";
  }
  if (job.inputs.pois) {
    std::map<std::string, std::size_t> kinds;
    for (const auto& p : in.pois.pois) ++kinds[p.kind];
    out << "pois: " << in.pois.pois.size();
    for (const auto& [kind, count] : kinds) out << ", " << kind << " " << count;
    out << '\n';
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e)) return 2;
  return 3;
}

}  // namespace sumoviz
