#include <gtest/gtest.h>

#include <fstream>

#include "reference_job.hpp"
#include "sumoviz/error.hpp"
#include "sumoviz/digest.hpp"
#include "sumoviz/image.hpp"
#include "sumoviz/log.hpp"
#include "sumoviz/pipeline.hpp"

using namespace sumoviz;
using testing_support::TempDir;

namespace {

RenderJob fixture_job(const std::string& fcd, const TempDir& dir) {
  RenderJob job = load_config_file(testing_support::fixture_path("job_minimal.yaml"));
  job.inputs.fcd = testing_support::fixture_path(fcd);
  job.visual.width = 64;
  job.visual.height = 36;
  job.camera.aspect = 64.0 / 36.0;
  job.output.frames_dir = dir.path() / "frames";
  job.threads = 1;
  return job;
}

}  // namespace

TEST(Pipeline, FrameTimes) {
  const auto times = frame_times(10.0, 15.0, 25.0);
  EXPECT_EQ(times.size(), 126u);
  EXPECT_DOUBLE_EQ(times.back(), 15.0);
  EXPECT_EQ(frame_times(0.0, 0.99, 25.0).size(), 25u);
  EXPECT_TRUE(frame_times(2.0, 1.0, 25.0).empty());
  EXPECT_EQ(frame_file_name(7), "frame_000007.png");
}

TEST(Pipeline, RendersFramesAndManifest) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("pipe");
  RenderJob job = fixture_job("fcd_interleaved.xml", dir);
  job.time.begin = 0.0;
  job.time.end = 0.2;
  const auto result = render_sequence(job);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result.frame_count, 6u);
  EXPECT_EQ(result.frames_rendered, 6u);

  const auto& m = result.manifest;
  EXPECT_EQ(m["tool"], "sumoviz");
  EXPECT_EQ(m["frame_count"], 6);
  EXPECT_EQ(m["frames"].size(), 6u);
  EXPECT_TRUE(m["inputs"].contains("net"));
  EXPECT_EQ(m["inputs"]["net"]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(m["parameters"]["render"]["width"], 64);
  EXPECT_EQ(m["parameters"]["time"]["fps"], 25.0);
  for (const char* key : {"load_s", "build_s", "render_s", "wall_s"})
    EXPECT_TRUE(m["timing"].contains(key)) << key;

  const auto& f0 = m["frames"][0];
  const auto png = dir.path() / "frames" / f0["file"].get<std::string>();
  ASSERT_TRUE(std::filesystem::exists(png));
  const Image img = read_png(png.string());
  EXPECT_EQ(img.width, 64);
  EXPECT_EQ(img.height, 36);
  EXPECT_EQ(sha256_hex(std::span<const std::uint8_t>(img.pixels)), f0["rgb_sha256"]);
  EXPECT_EQ(sha256_file(png), f0["sha256"]);

  std::ifstream written(dir.path() / "frames" / "manifest.json");
  EXPECT_EQ(nlohmann::json::parse(written), m);
}

TEST(Pipeline, WindowDefaultsToTrackSpan) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("span");
  const auto prep = prepare_job(fixture_job("fcd_interleaved.xml", dir));
  EXPECT_EQ(prep.begin, 0.0);
  EXPECT_EQ(prep.end, 9.0);
  EXPECT_EQ(prep.scene.vehicles.size(), 3u);
}

TEST(Pipeline, LagrangianSkipsFramesWithoutVehicle) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("skip");
  RenderJob job = fixture_job("fcd_interleaved.xml", dir);
  job.camera.mode = CameraMode::lagrangian;
  job.camera.lagrangian.vehicle_id = "late";
  job.time.begin = 2.8;
  job.time.end = 3.2;
  const auto result = render_sequence(job);
  EXPECT_TRUE(result.ok());
  EXPECT_EQ(result.frame_count, 11u);
  EXPECT_EQ(result.skipped.size() + result.frames_rendered, 11u);
  EXPECT_EQ(result.frames_rendered, 6u);  // 3.0 .. 3.2
  EXPECT_EQ(result.manifest["skipped"].size(), 5u);
}

TEST(Pipeline, AbsentVehicleFailsBeforeRendering) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("absent");
  RenderJob job = fixture_job("fcd_interleaved.xml", dir);
  job.camera.mode = CameraMode::lagrangian;
  job.camera.lagrangian.vehicle_id = "nobody";
  try {
    render_sequence(job);
    FAIL();
  } catch (const RenderError& e) {
    EXPECT_EQ(exit_code_for(e), 3);
    EXPECT_NE(std::string(e.what()).find("nobody"), std::string::npos);
  }
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "frames"));
}

TEST(Pipeline, ReferenceJobIsDeterministic) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("ref");
  RenderJob job = testing_support::reference_job(dir.path());
  job.time.end = 10.2;
  job.threads = 1;
  const auto a = render_sequence(job);
  job.threads = 3;
  job.output.frames_dir = dir.path() / "frames_b";
  const auto b = render_sequence(job);
  ASSERT_EQ(a.manifest["frames"].size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(a.manifest["frames"][i]["rgb_sha256"], b.manifest["frames"][i]["rgb_sha256"]);
    EXPECT_EQ(a.manifest["frames"][i]["sha256"], b.manifest["frames"][i]["sha256"]);
  }
  EXPECT_EQ(a.manifest["inputs"], b.manifest["inputs"]);
}

TEST(Pipeline, RawStreamThroughEncoder) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("raw");
  RenderJob job = fixture_job("fcd_interleaved.xml", dir);
  job.time.begin = 0.0;
  job.time.end = 0.12;
  job.threads = 2;
  job.output.raw_stream = true;
  job.output.write_frames = false;
  const auto sink = dir.path() / "stream.rgb";
  job.output.encoder = "cat > '" + sink.string() + "'";
  const auto result = render_sequence(job);
  ASSERT_TRUE(result.ok());
  ASSERT_EQ(result.frame_count, 4u);
  std::ifstream in(sink, std::ios::binary);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 4u * 64 * 36 * 3);
  for (std::size_t i = 0; i < 4; ++i) {
    const std::span<const std::uint8_t> frame(bytes.data() + i * 64 * 36 * 3, 64 * 36 * 3);
    EXPECT_EQ(sha256_hex(frame), result.manifest["frames"][i]["rgb_sha256"]);
  }
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "frames" / frame_file_name(0)));
}

TEST(Pipeline, TracksCsv) {
  log::ScopedCapture quiet([](log::Level, std::string_view) {});
  TempDir dir("csv");
  RenderJob job = fixture_job("fcd_interleaved.xml", dir);
  job.output.tracks_csv = dir.path() / "tracks.csv";
  prepare_job(job);
  std::ifstream in(*job.output.tracks_csv);
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("vehicle"), std::string::npos);
}

TEST(Pipeline, ExitCodes) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 1);
  EXPECT_EQ(exit_code_for(ParseError("x", 3)), 2);
  EXPECT_EQ(exit_code_for(ValidationError("x")), 2);
  EXPECT_EQ(exit_code_for(RenderError("x")), 3);
  EXPECT_EQ(exit_code_for(AssetError("x")), 3);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 3);
}

TEST(Pipeline, MissingInputIsParseError) {
  TempDir dir("missing");
  RenderJob job = fixture_job("fcd_single.xml", dir);
  job.inputs.net = dir.path() / "nope.net.xml";
  EXPECT_THROW(load_inputs(job), ParseError);
}
