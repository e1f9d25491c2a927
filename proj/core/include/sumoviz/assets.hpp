#pragma once

// Named textures and models. Built-in entries are procedural stand-ins; an
// asset directory can replace any of them:
//
//   <dir>/textures/<name>.png
//   <dir>/models/<name>.obj     lines "v x y z", "f i j k" (1-based),
//                               optional "color r g b" (0-255), '#' comments
//
// Models are authored in metres, origin at ground level, facing north (-Z).

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumoviz/image.hpp"
#include "sumoviz/mesh.hpp"

namespace sumoviz {

inline constexpr std::array<std::string_view, 8> kSkyTextureNames = {
    "sky_blue",   "sky_daycloud1", "sky_daycloud2", "sky_daycloud3",
    "sky_night1", "sky_night2",    "sky_night3",    "sky_halloween"};

inline constexpr std::array<std::string_view, 6> kGroundTextureNames = {
    "ground_grass", "ground_stone",      "ground_sand",
    "ground_chess", "ground_chesslarge", "ground_halloween"};

inline constexpr std::array<std::string_view, 9> kStaticModelNames = {
    "tree",  "fence", "trafficlight2", "trafficlight3", "trafficlight_countdown",
    "shop",  "home",  "block",         "marker"};

inline constexpr int kCarModelCount = 10;

inline constexpr const char* kAssetDirEnv = "SUMOVIZ_ASSET_DIR";

std::string car_model_name(int index);

enum class PartRole { body, lamp_red, lamp_yellow, lamp_green, segment };

struct ModelPart {
  Mesh mesh;
  PartRole role = PartRole::body;
  int segment = -1;  // countdown display: digit * 7 + segment (a..g)
};

struct Model {
  std::string name;
  std::vector<ModelPart> parts;

  std::size_t triangle_count() const;
};

class AssetLibrary {
public:
  /// Built-in procedural assets only.
  static AssetLibrary procedural();

  /// Built-ins, with files from `override_dir` replacing same-named entries.
  static AssetLibrary load(const std::optional<std::filesystem::path>& override_dir);

  /// Directory named by SUMOVIZ_ASSET_DIR, if set and non-empty.
  static std::optional<std::filesystem::path> override_dir_from_env();

  bool has_texture(std::string_view name) const;
  bool has_model(std::string_view name) const;
  const Texture& texture(std::string_view name) const;
  const Model& model(std::string_view name) const;

  const std::map<std::string, Texture, std::less<>>& textures() const { return textures_; }
  const std::map<std::string, Model, std::less<>>& models() const { return models_; }

private:
  std::map<std::string, Texture, std::less<>> textures_;
  std::map<std::string, Model, std::less<>> models_;
};

/// Parses the minimal mesh text format into a single-part model.
Model read_model_text(std::istream& in, const std::string& name);

Texture make_procedural_texture(std::string_view name);
Model make_procedural_model(std::string_view name);

}  // namespace sumoviz
