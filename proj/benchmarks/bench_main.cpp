#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "sumoviz/log.hpp"
#include "sumoviz/render.hpp"
#include "sumoviz/scene.hpp"
#include "sumoviz/smoothing.hpp"
#include "sumoviz/synthetic.hpp"
#include "sumoviz/tessellation.hpp"

using namespace sumoviz;

namespace {

std::vector<RawSample> wandering_track(int seconds) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> turn(-10.0, 10.0);
  std::vector<RawSample> raw;
  double x = 0, y = 0, heading = 0;
  for (int k = 0; k <= seconds; ++k) {
    raw.push_back({double(k), x, y, normalize_degrees(heading), 12.0});
    heading += turn(rng);
    x += 12.0 * std::sin(deg_to_rad(heading));
    y += 12.0 * std::cos(deg_to_rad(heading));
  }
  return raw;
}

std::shared_ptr<const AssetLibrary> assets() {
  static const auto lib = std::make_shared<const AssetLibrary>(AssetLibrary::procedural());
  return lib;
}

struct Desk {
  SceneGraph scene;
  SignalTimeline timeline;
};

// 50 vehicles on the crossing plus dense scenery.
const Desk& desk() {
  static const Desk d = [] {
    synthetic::CrossingOptions opt;
    opt.vehicles = 50;
    opt.duration = 40.0;
    opt.departure_spread = 8.0;
    opt.trees = 220;
    opt.seed = 11;
    const auto sc = synthetic::crossing(opt);
    const auto tls = parse_tls_states(sc.tls);
    Desk out;
    out.scene = build_scene(parse_network(sc.net), parse_pois(sc.pois),
                            smooth_log(parse_fcd(sc.fcd), {}, 1), tls, {}, assets());
    out.timeline = SignalTimeline::build(tls);
    return out;
  }();
  return d;
}

void BM_SmoothTrack(benchmark::State& state) {
  const auto raw = wandering_track(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(smooth_track(raw, {}, "v"));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(raw.size()));
}
BENCHMARK(BM_SmoothTrack)->Arg(60)->Arg(600)->Arg(3600);

void BM_LaneRibbon(benchmark::State& state) {
  Polyline line;
  for (int i = 0; i < state.range(0); ++i) line.push_back({5.0 * i, 3.0 * std::sin(0.3 * i)});
  for (auto _ : state) benchmark::DoNotOptimize(tessellate_lane_ribbon(line, 3.2));
}
BENCHMARK(BM_LaneRibbon)->Arg(16)->Arg(256);

void BM_CorridorScene(benchmark::State& state) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  const auto net = parse_network(synthetic::corridor_network());
  for (auto _ : state) benchmark::DoNotOptimize(build_scene(net, {}, {}, {}, {}, assets()));
}
BENCHMARK(BM_CorridorScene)->Unit(benchmark::kMillisecond);

void BM_RenderDeskFrame(benchmark::State& state) {
  const Desk& d = desk();
  const int w = static_cast<int>(state.range(0));
  const int h = w * 9 / 16;
  const Camera cam = Camera::looking_at(to_world({-90.0, -80.0}, 45.0), to_world({10.0, 10.0}, 0.0),
                                        60.0, 16.0 / 9.0, 0.3, 5000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(render_frame(d.scene, cam, 12.0, {&d.timeline, 3.0}, w, h));
  state.counters["static_triangles"] = static_cast<double>(d.scene.static_triangle_count());
}
BENCHMARK(BM_RenderDeskFrame)->Arg(320)->Arg(1280)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
