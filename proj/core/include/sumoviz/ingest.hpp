#pragma once

// Readers for the SUMO file family consumed by the pipeline: plain-XML
// network, FCD export, TLS state export and additional (POI) files.
// All coordinates stay in the network frame as stored in the file.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumoviz/geometry.hpp"

namespace sumoviz {

inline constexpr double kDefaultLaneWidth = 3.2;

enum class EdgeFunction { normal, internal };

struct Lane {
  std::string id;
  int index = 0;
  double width = kDefaultLaneWidth;
  double speed_limit = 0.0;
  Polyline shape;
};

struct Edge {
  std::string id;
  EdgeFunction function = EdgeFunction::normal;
  std::vector<Lane> lanes;  // sorted by index, indices 0..n-1
};

struct Junction {
  std::string id;
  Vec2 position;
  Polygon shape;  // empty when the file carries no usable polygon
  std::vector<std::string> incoming_lane_ids;
};

struct SignalPhase {
  double duration = 0.0;
  std::string state;
};

struct SignalProgram {
  std::string id;
  std::string program_id;
  std::vector<SignalPhase> phases;
};

struct RoadNetwork {
  std::vector<Edge> edges;
  std::vector<Junction> junctions;
  std::vector<SignalProgram> signal_programs;
  Vec2 net_offset;
  Box2 bounds;

  std::size_t lane_count() const;
  const Edge* find_edge(std::string_view id) const;
};

struct RawSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double angle_deg = 0.0;  // compass, [0, 360)
  std::optional<double> speed;
};

struct TrajectoryLog {
  std::map<std::string, std::vector<RawSample>> vehicles;
  double time_step = 0.0;  // 0 when fewer than two timesteps
  double begin = 0.0;
  double end = 0.0;

  std::size_t sample_count() const;
};

struct SignalStateEntry {
  double t = 0.0;
  std::string tls_id;
  std::string state;
};

struct SignalStateLog {
  std::vector<SignalStateEntry> entries;
};

struct Poi {
  std::string id;
  std::string kind;
  Vec2 position;
  std::optional<double> heading_deg;
  std::optional<double> scale;
};

struct PoiSet {
  std::vector<Poi> pois;
};

/// True for the per-link characters accepted in TLS state strings.
bool is_signal_state_char(char c) noexcept;

RoadNetwork parse_network(std::string_view xml_text);
TrajectoryLog parse_fcd(std::string_view xml_text);
SignalStateLog parse_tls_states(std::string_view xml_text);
PoiSet parse_pois(std::string_view xml_text);

/// Reads a whole file; throws ParseError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace sumoviz
