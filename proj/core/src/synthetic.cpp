#include "sumoviz/synthetic.hpp"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "sumoviz/error.hpp"
#include "sumoviz/geometry.hpp"

namespace sumoviz::synthetic {
namespace {

constexpr double kLaneWidth = 3.2;
constexpr double kArm = 200.0;
constexpr double kCore = 12.0;  // half-size of the junction square

// Uniform [0, 1) from the raw engine output so values do not depend on the
// standard library's distribution implementation.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string shape_text(const Polyline& pts) {
  std::ostringstream s;
  s.precision(10);
  for (std::size_t i = 0; i < pts.size(); ++i)
    s << (i ? " " : "") << pts[i].x << ',' << pts[i].y;
  return s.str();
}

void write_edge(std::ostringstream& out, const std::string& id, const std::vector<Polyline>& lanes,
                double speed, bool internal = false) {
  out << "    <edge id=\"" << id << '"' << (internal ? " function=\"internal\"" : "") << ">\n";
  for (std::size_t i = 0; i < lanes.size(); ++i)
    out << "        <lane id=\"" << id << '_' << i << "\" index=\"" << i << "\" speed=\"" << speed
        << "\" length=\"" << polyline_length(lanes[i]) << "\" width=\"" << kLaneWidth
        << "\" shape=\"" << shape_text(lanes[i]) << "\"/>\n";
  out << "    </edge>\n";
}

// Lane i of a straight two-lane edge running from a to b; lane 0 is the
// rightmost.
Polyline straight_lane(Vec2 a, Vec2 b, int index) {
  const Vec2 dir = normalized(b - a);
  const Vec2 right{dir.y, -dir.x};
  const double off = (1.5 - index) * kLaneWidth;  // lane 0 outermost
  return {a + right * off, b + right * off};
}

struct Route {
  Vec2 start;
  Vec2 end;
  std::string lane_prefix;
  int lane;
  double angle;
};

}  // namespace

Scenario crossing(const CrossingOptions& options) {
  if (options.vehicles < 0 || !(options.duration > 0.0) || !(options.step > 0.0))
    throw ContractError("crossing: invalid options");
  Scenario sc;
  std::mt19937_64 rng(options.seed);

  // Edge end points; each edge carries two lanes, lane 0 on the right.
  const Vec2 w_in_a{-kArm, 0}, w_in_b{-kCore, 0};
  const Vec2 e_out_a{kCore, 0}, e_out_b{kArm, 0};
  const Vec2 s_in_a{0, -kArm}, s_in_b{0, -kCore};
  const Vec2 n_out_a{0, kCore}, n_out_b{0, kArm};

  std::ostringstream net;
  net << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<net version=\"1.16\">\n";
  net << "    <location netOffset=\"0.00,0.00\" convBoundary=\"" << -kArm << ',' << -kArm << ','
      << kArm << ',' << kArm << "\" origBoundary=\"0,0,0,0\" projParameter=\"!\"/>\n";
  write_edge(net, ":J1_0",
             {straight_lane(w_in_b, e_out_a, 0), straight_lane(w_in_b, e_out_a, 1)}, 13.89, true);
  write_edge(net, "in_w", {straight_lane(w_in_a, w_in_b, 0), straight_lane(w_in_a, w_in_b, 1)},
             13.89);
  write_edge(net, "out_e", {straight_lane(e_out_a, e_out_b, 0), straight_lane(e_out_a, e_out_b, 1)},
             13.89);
  write_edge(net, "in_s", {straight_lane(s_in_a, s_in_b, 0), straight_lane(s_in_a, s_in_b, 1)},
             13.89);
  write_edge(net, "out_n", {straight_lane(n_out_a, n_out_b, 0), straight_lane(n_out_a, n_out_b, 1)},
             13.89);
  net << "    <tlLogic id=\"J1\" type=\"static\" programID=\"0\" offset=\"0\">\n"
         "        <phase duration=\"42\" state=\"GGrr\"/>\n"
         "        <phase duration=\"3\"  state=\"yyrr\"/>\n"
         "        <phase duration=\"12\" state=\"rrGG\"/>\n"
         "        <phase duration=\"3\"  state=\"rryy\"/>\n"
         "    </tlLogic>\n";
  const Polygon square{{-kCore, -kCore}, {kCore, -kCore}, {kCore, kCore}, {-kCore, kCore},
                       {-kCore, -kCore}};
  net << "    <junction id=\"J1\" type=\"traffic_light\" x=\"0.00\" y=\"0.00\" "
         "incLanes=\"in_w_0 in_w_1 in_s_0 in_s_1\" intLanes=\":J1_0_0 :J1_0_1\" shape=\""
      << shape_text(square) << "\"/>\n";
  for (const auto& [id, p] : {std::pair{"W", w_in_a}, {"E", e_out_b}, {"S", s_in_a}, {"N", n_out_b}})
    net << "    <junction id=\"" << id << "\" type=\"dead_end\" x=\"" << p.x << "\" y=\"" << p.y
        << "\" incLanes=\"\" intLanes=\"\" shape=\"\"/>\n";
  net << "</net>\n";
  sc.net = net.str();

  // Straight runs through the junction; no car following.
  std::vector<Route> routes;
  for (int lane = 0; lane < 2; ++lane) {
    const double off = (1.5 - lane) * kLaneWidth;
    routes.push_back({{-kArm + 5, -off}, {kArm - 5, -off}, "in_w", lane, 90.0});
    routes.push_back({{off, -kArm + 5}, {off, kArm - 5}, "in_s", lane, 0.0});
  }
  struct Trip {
    Route route;
    double depart;
    double speed;
  };
  std::vector<Trip> trips;
  for (int i = 0; i < options.vehicles; ++i) {
    const double depart = options.vehicles > 1
                              ? options.departure_spread * i / (options.vehicles - 1)
                              : 0.0;
    trips.push_back({routes[static_cast<std::size_t>(i) % routes.size()],
                     std::round(depart / options.step) * options.step, 10.0 + 4.0 * uniform(rng)});
  }

  std::ostringstream fcd;
  fcd << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<fcd-export>\n";
  fcd.setf(std::ios::fixed);
  const auto steps = static_cast<long>(std::floor(options.duration / options.step + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double t = k * options.step;
    fcd << std::setprecision(2) << "    <timestep time=\"" << t << "\">\n";
    for (std::size_t i = 0; i < trips.size(); ++i) {
      const Trip& trip = trips[i];
      if (t + 1e-9 < trip.depart) continue;
      const double total = length(trip.route.end - trip.route.start);
      const double s = (t - trip.depart) * trip.speed;
      if (s > total) continue;
      const Vec2 p = trip.route.start + normalized(trip.route.end - trip.route.start) * s;
      fcd << "        <vehicle id=\"veh" << i << "\" x=\"" << p.x << "\" y=\"" << p.y
          << "\" angle=\"" << trip.route.angle << "\" type=\"DEFAULT_VEHTYPE\" speed=\""
          << trip.speed << "\" pos=\"" << s << "\" lane=\"" << trip.route.lane_prefix << '_'
          << trip.route.lane << "\" slope=\"0.00\"/>\n";
    }
    fcd << "    </timestep>\n";
  }
  fcd << "</fcd-export>\n";
  sc.fcd = fcd.str();

  // One state line per interval, 45 s / 15 s cycle.
  std::ostringstream tls;
  tls << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<tlsStates>\n";
  tls.setf(std::ios::fixed);
  for (long k = 0; k <= steps; ++k) {
    const double t = k * options.step;
    const bool east_green = std::fmod(t, 60.0) < 45.0;
    tls << std::setprecision(2) << "    <tlsState time=\"" << t
        << "\" id=\"J1\" programID=\"0\" phase=\"" << (east_green ? 0 : 2) << "\" state=\""
        << (east_green ? "GGrr" : "rrGG") << "\"/>\n";
  }
  tls << "</tlsStates>\n";
  sc.tls = tls.str();

  std::ostringstream pois;
  pois << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<additional>\n";
  pois.setf(std::ios::fixed);
  pois << std::setprecision(2);
  // Heads face the approaching traffic.
  pois << "    <poi id=\"tl:J1:0\" type=\"trafficlight3\" color=\"0,0,0\" x=\"-14.00\" "
          "y=\"-9.00\" angle=\"270.00\"/>\n";
  pois << "    <poi id=\"tl:J1:2\" type=\"trafficlight_countdown\" color=\"0,0,0\" x=\"9.00\" "
          "y=\"-14.00\" angle=\"180.00\"/>\n";
  pois << "    <poi id=\"tl:J1:1\" type=\"trafficlight2\" color=\"0,0,0\" x=\"-14.00\" "
          "y=\"-13.00\" angle=\"270.00\"/>\n";
  const char* buildings[] = {"home", "shop", "block"};
  int b = 0;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) {
      pois << "    <poi id=\"bld" << b << "\" type=\"" << buildings[b % 3]
           << "\" color=\"0,0,0\" x=\"" << sx * 40.0 << "\" y=\"" << sy * 40.0
           << "\" angle=\"" << 90.0 * b << "\"/>\n";
      ++b;
    }
  pois << "    <poi id=\"fence0\" type=\"fence\" color=\"0,0,0\" x=\"-60.00\" y=\"20.00\"/>\n";
  for (int i = 0; i < options.trees; ++i) {
    // Keep trees off the carriageways.
    Vec2 p;
    do {
      p = {-kArm + 2 * kArm * uniform(rng), -kArm + 2 * kArm * uniform(rng)};
    } while (std::abs(p.x) < 15.0 || std::abs(p.y) < 15.0);
    pois << "    <poi id=\"tree" << i << "\" type=\"tree\" color=\"0,128,0\" x=\"" << p.x
         << "\" y=\"" << p.y << "\"><param key=\"scale\" value=\""
         << 0.8 + 0.5 * uniform(rng) << "\"/></poi>\n";
  }
  pois << "</additional>\n";
  sc.pois = pois.str();
  return sc;
}

std::string corridor_network(const CorridorOptions& options) {
  if (!(options.length > 0.0) || options.lanes_per_direction < 1 || options.ramps < 0 ||
      !(options.point_spacing > 0.0))
    throw ContractError("corridor: invalid options");
  const double amplitude = 40.0;
  const double wavelength = 2000.0;
  auto centre = [&](double s) {
    return Vec2{s, amplitude * std::sin(2.0 * std::numbers::pi * s / wavelength)};
  };
  auto left_normal = [&](double s) {
    const double dy = amplitude * 2.0 * std::numbers::pi / wavelength *
                      std::cos(2.0 * std::numbers::pi * s / wavelength);
    const Vec2 tangent = normalized(Vec2{1.0, dy});
    return Vec2{-tangent.y, tangent.x};
  };
  const int n = options.lanes_per_direction;
  const double median = 1.0;

  // Segment boundaries at the ramp merge points.
  std::vector<double> cuts{0.0};
  for (int r = 1; r <= options.ramps; ++r) cuts.push_back(options.length * r / (options.ramps + 1));
  cuts.push_back(options.length);

  auto sample = [&](double a, double b) {
    std::vector<double> s;
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / options.point_spacing)));
    for (int i = 0; i <= steps; ++i) s.push_back(a + (b - a) * i / steps);
    return s;
  };

  std::ostringstream net;
  net.precision(10);
  net << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<net version=\"1.16\">\n";
  const double half = median + n * kLaneWidth + 20.0;
  net << "    <location netOffset=\"0.00,0.00\" convBoundary=\"0.00," << -amplitude - half - 300.0
      << ',' << options.length << ',' << amplitude + half << "\" origBoundary=\"0,0,0,0\" "
      << "projParameter=\"!\"/>\n";

  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const auto s = sample(cuts[k] + 8.0 * (k > 0), cuts[k + 1] - 8.0 * (k + 2 < cuts.size()));
    std::vector<Polyline> fwd(n), bwd(n);
    for (double si : s) {
      const Vec2 c = centre(si);
      const Vec2 nl = left_normal(si);
      for (int i = 0; i < n; ++i) {
        // Forward traffic runs +x on the right (south) side; lane 0 outermost.
        fwd[i].push_back(c - nl * (median + (n - 1 - i + 0.5) * kLaneWidth));
        bwd[i].push_back(c + nl * (median + (n - 1 - i + 0.5) * kLaneWidth));
      }
    }
    for (auto& lane : bwd) std::reverse(lane.begin(), lane.end());
    write_edge(net, "fwd" + std::to_string(k), fwd, 33.33);
    write_edge(net, "bwd" + std::to_string(k), bwd, 33.33);
  }

  for (int r = 1; r <= options.ramps; ++r) {
    const double at = cuts[r];
    const Vec2 c = centre(at - 8.0);
    const Vec2 nl = left_normal(at - 8.0);
    const Vec2 merge = c - nl * (median + (n + 0.5) * kLaneWidth);
    Polyline ramp;
    for (int i = 0; i <= 6; ++i) {
      const double f = i / 6.0;
      ramp.push_back(merge + Vec2{-300.0 * (1.0 - f), -120.0 * (1.0 - f) * (1.0 - f)});
    }
    write_edge(net, "ramp" + std::to_string(r), {ramp}, 22.22);
  }

  for (std::size_t k = 1; k + 1 < cuts.size(); ++k) {
    const Vec2 c = centre(cuts[k]);
    const Vec2 nl = left_normal(cuts[k]);
    const Vec2 along{nl.y, -nl.x};
    const double w = median + (n + 1) * kLaneWidth;
    const Polygon shape{c - nl * w - along * 8.0, c - nl * w + along * 8.0,
                        c + nl * w + along * 8.0, c + nl * w - along * 8.0,
                        c - nl * w - along * 8.0};
    net << "    <junction id=\"M" << k << "\" type=\"priority\" x=\"" << c.x << "\" y=\"" << c.y
        << "\" incLanes=\"fwd" << k - 1 << "_0 ramp" << k << "_0\" intLanes=\"\" shape=\""
        << shape_text(shape) << "\"/>\n";
  }
  net << "</net>\n";
  return net.str();
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw Error("cannot write " + (dir / name).string());
  };
  put("net.net.xml", scenario.net);
  put("fcd.xml", scenario.fcd);
  put("tls.xml", scenario.tls);
  put("pois.add.xml", scenario.pois);
}

}  // namespace sumoviz::synthetic
