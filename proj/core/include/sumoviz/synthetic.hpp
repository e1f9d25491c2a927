#pragma once

// Generators for SUMO-format test scenarios: a signalised four-arm crossing
// with traffic and scenery, and a long multi-lane corridor with on-ramps.

#include <cstdint>
#include <filesystem>
#include <string>

namespace sumoviz::synthetic {

struct CrossingOptions {
  int vehicles = 10;
  double duration = 60.0;  // s of trajectory and signal log
  double step = 1.0;       // FCD / TLS sampling interval, s
  double departure_spread = 20.0;
  int trees = 12;
  std::uint64_t seed = 1;
};

/// Text of the four input files.
struct Scenario {
  std::string net;
  std::string fcd;
  std::string tls;
  std::string pois;
};

/// Four 2-lane approach/exit edges around junction "J1" (200 m arms).
/// Traffic drives west->east and south->north; signal "J1" alternates 45 s
/// green / 15 s red for the east-bound links 0,1 and the inverse for 2,3.
Scenario crossing(const CrossingOptions& options = {});

struct CorridorOptions {
  double length = 6500.0;
  int lanes_per_direction = 3;
  int ramps = 5;
  double point_spacing = 50.0;
};

std::string corridor_network(const CorridorOptions& options = {});

/// Writes net.net.xml, fcd.xml, tls.xml and pois.add.xml into dir.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace sumoviz::synthetic
