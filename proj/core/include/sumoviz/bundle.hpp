#pragma once

// Portable scene bundle: manifest.json plus one little-endian binary buffer
// (buffers.bin). Every binary block is referenced from the manifest by
// {offset, length} in bytes, with its element layout spelled out next to it.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sumoviz/scene.hpp"
#include "sumoviz/signals.hpp"

namespace sumoviz {

inline constexpr int kBundleVersion = 1;
inline constexpr const char* kBundleManifestName = "manifest.json";
inline constexpr const char* kBundleBufferName = "buffers.bin";

struct BundleOptions {
  double begin = 0.0;
  double end = 0.0;
  double yellow_duration = 3.0;
};

/// Writes the bundle into `dir` (created if needed) and returns the manifest.
nlohmann::json write_bundle(const SceneGraph& scene, const SignalTimeline& timeline,
                            const BundleOptions& options, const std::filesystem::path& dir);

struct Bundle {
  nlohmann::json manifest;
  std::vector<std::uint8_t> buffer;

  /// Bytes of a block reference ({"offset", "length"}). Throws
  /// ValidationError when it lies outside the buffer.
  std::span<const std::uint8_t> block(const nlohmann::json& ref) const;
};

/// Reads and checks a bundle: known version, buffer length and digest.
Bundle read_bundle(const std::filesystem::path& dir);

}  // namespace sumoviz
