#include "sumoviz/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"
#include "xml_reader.hpp"

namespace sumoviz {

using detail::Attributes;
using detail::XmlReader;

namespace {

std::string at_line(const XmlReader& reader) {
  return " (line " + std::to_string(reader.line()) + ")";
}

std::string required(const Attributes& attrs, std::string_view name, std::string_view element,
                     const XmlReader& reader) {
  const auto v = attrs.get(name);
  if (!v) {
    throw ValidationError("<" + std::string(element) + "> missing attribute '" +
                          std::string(name) + "'" + at_line(reader));
  }
  return std::string(*v);
}

/// Drops consecutive duplicate points.
Polyline to_polyline(const std::vector<std::pair<double, double>>& points) {
  Polyline out;
  out.reserve(points.size());
  for (const auto& [x, y] : points) {
    const Vec2 p{x, y};
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  return out;
}

std::optional<Polyline> shape_attr(const Attributes& attrs) {
  const auto raw = attrs.get("shape");
  if (!raw) return std::nullopt;
  const auto points = detail::to_points(*raw);
  if (!points) return std::nullopt;
  return to_polyline(*points);
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string token; in >> token;) out.push_back(token);
  return out;
}

}  // namespace

std::size_t RoadNetwork::lane_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.lanes.size();
  return n;
}

const Edge* RoadNetwork::find_edge(std::string_view id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

std::size_t TrajectoryLog::sample_count() const {
  std::size_t n = 0;
  for (const auto& [id, samples] : vehicles) n += samples.size();
  return n;
}

bool is_signal_state_char(char c) noexcept {
  switch (c) {
    case 'G': case 'g': case 'y': case 'r': case 'u': case 'o': case 'O':
      return true;
    default:
      return false;
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RoadNetwork parse_network(std::string_view xml_text) {
  RoadNetwork net;
  bool have_boundary = false;
  Edge* edge = nullptr;
  SignalProgram* program = nullptr;
  std::unordered_set<std::string> edge_ids;

  XmlReader reader(nullptr);
  reader = XmlReader(
      [&](std::string_view name, const Attributes& attrs) {
        if (name == "location") {
          if (const auto off = attrs.get("netOffset")) {
            const auto pts = detail::to_points(*off);
            if (!pts || pts->size() != 1)
              throw ValidationError("<location> has malformed netOffset" + at_line(reader));
            net.net_offset = {pts->front().first, pts->front().second};
          }
          if (const auto conv = attrs.get("convBoundary")) {
            // "x1,y1,x2,y2" is a single token with four numbers
            std::string text(*conv);
            std::replace(text.begin(), text.end(), ',', ' ');
            std::istringstream in(text);
            double v[4];
            if (!(in >> v[0] >> v[1] >> v[2] >> v[3]))
              throw ValidationError("<location> has malformed convBoundary" + at_line(reader));
            net.bounds = {{v[0], v[1]}, {v[2], v[3]}};
            have_boundary = true;
          }
        } else if (name == "edge") {
          Edge e;
          e.id = required(attrs, "id", name, reader);
          if (!edge_ids.insert(e.id).second)
            throw ValidationError("duplicate edge id '" + e.id + "'" + at_line(reader));
          if (const auto fn = attrs.get("function"); fn && *fn == "internal")
            e.function = EdgeFunction::internal;
          net.edges.push_back(std::move(e));
          edge = &net.edges.back();
        } else if (name == "lane") {
          if (!edge) throw ValidationError("<lane> outside of <edge>" + at_line(reader));
          Lane lane;
          lane.id = required(attrs, "id", name, reader);
          const auto index = detail::to_int(required(attrs, "index", name, reader));
          if (!index || *index < 0)
            throw ValidationError("lane '" + lane.id + "' has invalid index" + at_line(reader));
          lane.index = *index;
          if (const auto w = attrs.get("width")) {
            const auto width = detail::to_double(*w);
            if (!width || *width <= 0.0)
              throw ValidationError("lane '" + lane.id + "' has invalid width" + at_line(reader));
            lane.width = *width;
          }
          if (const auto s = attrs.get("speed")) {
            const auto speed = detail::to_double(*s);
            if (!speed) throw ValidationError("lane '" + lane.id + "' has invalid speed" + at_line(reader));
            lane.speed_limit = *speed;
          }
          auto shape = shape_attr(attrs);
          if (!shape || shape->size() < 2) {
            throw ValidationError("lane '" + lane.id +
                                  "' needs a shape with at least 2 distinct points" +
                                  at_line(reader));
          }
          lane.shape = std::move(*shape);
          edge->lanes.push_back(std::move(lane));
        } else if (name == "junction") {
          Junction j;
          j.id = required(attrs, "id", name, reader);
          const auto x = detail::to_double(required(attrs, "x", name, reader));
          const auto y = detail::to_double(required(attrs, "y", name, reader));
          if (!x || !y)
            throw ValidationError("junction '" + j.id + "' has non-numeric position" + at_line(reader));
          j.position = {*x, *y};
          if (attrs.has("shape")) {
            auto shape = shape_attr(attrs);
            if (!shape) throw ValidationError("junction '" + j.id + "' has malformed shape" + at_line(reader));
            // SUMO closes polygons by repeating the first point.
            if (shape->size() > 1 && shape->front() == shape->back()) shape->pop_back();
            if (shape->size() >= 3 && std::abs(signed_area(*shape)) > 1e-9) {
              j.shape = std::move(*shape);
            } else if (!shape->empty()) {
              log::warn("junction '" + j.id + "' has a degenerate shape; ignored");
            }
          }
          if (const auto inc = attrs.get("incLanes")) j.incoming_lane_ids = split_ws(*inc);
          net.junctions.push_back(std::move(j));
        } else if (name == "tlLogic") {
          SignalProgram p;
          p.id = required(attrs, "id", name, reader);
          p.program_id = std::string(attrs.get("programID").value_or(""));
          net.signal_programs.push_back(std::move(p));
          program = &net.signal_programs.back();
        } else if (name == "phase" && program) {
          SignalPhase phase;
          const auto d = detail::to_double(required(attrs, "duration", name, reader));
          if (!d || *d < 0.0)
            throw ValidationError("tlLogic '" + program->id + "' has invalid phase duration" + at_line(reader));
          phase.duration = *d;
          phase.state = required(attrs, "state", name, reader);
          net.signal_programs.back().phases.push_back(std::move(phase));
        }
      },
      [&](std::string_view name) {
        if (name == "edge") edge = nullptr;
        if (name == "tlLogic") program = nullptr;
      });
  reader.parse(xml_text);

  for (auto& e : net.edges) {
    std::sort(e.lanes.begin(), e.lanes.end(),
              [](const Lane& a, const Lane& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < e.lanes.size(); ++i) {
      if (e.lanes[i].index != static_cast<int>(i)) {
        throw ValidationError("edge '" + e.id + "' lane indices are not contiguous from 0 (lane '" +
                              e.lanes[i].id + "')");
      }
    }
  }

  if (!have_boundary) {
    Box2 box = Box2::inverted();
    for (const auto& e : net.edges)
      for (const auto& l : e.lanes)
        for (const auto& p : l.shape) box.expand(p);
    for (const auto& j : net.junctions) {
      box.expand(j.position);
      for (const auto& p : j.shape) box.expand(p);
    }
    net.bounds = box.empty() ? Box2{} : box;
  }
  return net;
}

TrajectoryLog parse_fcd(std::string_view xml_text) {
  TrajectoryLog log;
  std::vector<double> step_times;
  std::optional<double> current_time;
  std::size_t timestep_index = 0;

  XmlReader reader(nullptr);
  reader = XmlReader(
      [&](std::string_view name, const Attributes& attrs) {
        if (name == "timestep") {
          const auto raw = attrs.get("time");
          if (!raw) {
            throw ValidationError("timestep #" + std::to_string(timestep_index) +
                                  " missing 'time' attribute" + at_line(reader));
          }
          const auto t = detail::to_double(*raw);
          if (!t) {
            throw ValidationError("timestep #" + std::to_string(timestep_index) +
                                  " has non-numeric time '" + std::string(*raw) + "'" +
                                  at_line(reader));
          }
          current_time = *t;
          step_times.push_back(*t);
          ++timestep_index;
        } else if (name == "vehicle") {
          if (!current_time) throw ValidationError("<vehicle> outside of <timestep>" + at_line(reader));
          const std::string id = required(attrs, "id", name, reader);
          auto coordinate = [&](std::string_view key) {
            const auto raw = attrs.get(key);
            const auto value = raw ? detail::to_double(*raw) : std::nullopt;
            if (!value) {
              std::ostringstream msg;
              msg << "vehicle '" << id << "' at time " << *current_time
                  << (raw ? " has non-numeric '" : " missing '") << key << "'" << at_line(reader);
              throw ValidationError(msg.str());
            }
            return *value;
          };
          RawSample s;
          s.t = *current_time;
          s.x = coordinate("x");
          s.y = coordinate("y");
          if (attrs.has("angle")) s.angle_deg = normalize_degrees(coordinate("angle"));
          if (attrs.has("speed")) s.speed = coordinate("speed");
          log.vehicles[id].push_back(s);
        }
      },
      [&](std::string_view name) {
        if (name == "timestep") current_time.reset();
      });
  reader.parse(xml_text);

  for (auto& [id, samples] : log.vehicles) {
    std::stable_sort(samples.begin(), samples.end(),
                     [](const RawSample& a, const RawSample& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (!(samples[i].t > samples[i - 1].t)) {
        std::ostringstream msg;
        msg << "vehicle '" << id << "' has more than one sample at time " << samples[i].t;
        throw ValidationError(msg.str());
      }
    }
  }

  if (!step_times.empty()) {
    std::sort(step_times.begin(), step_times.end());
    log.begin = step_times.front();
    log.end = step_times.back();
    // time_step is the most frequent positive delta, rounded to microseconds
    std::map<long long, std::size_t> histogram;
    for (std::size_t i = 1; i < step_times.size(); ++i) {
      const double dt = step_times[i] - step_times[i - 1];
      if (dt > 0.0) ++histogram[std::llround(dt * 1e6)];
    }
    std::size_t best = 0;
    for (const auto& [key, count] : histogram) {
      if (count > best) {
        best = count;
        log.time_step = static_cast<double>(key) * 1e-6;
      }
    }
  }
  return log;
}

SignalStateLog parse_tls_states(std::string_view xml_text) {
  SignalStateLog log;
  if (xml_text.find_first_not_of(" \t\r\n") == std::string_view::npos) return log;

  std::unordered_map<std::string, double> last_time;
  XmlReader reader(nullptr);
  reader = XmlReader([&](std::string_view name, const Attributes& attrs) {
    if (name != "tlsState") return;
    const std::size_t index = log.entries.size();
    SignalStateEntry entry;
    const auto t = detail::to_double(required(attrs, "time", name, reader));
    if (!t) {
      throw ValidationError("tlsState entry #" + std::to_string(index) + " has non-numeric time" +
                            at_line(reader));
    }
    entry.t = *t;
    entry.tls_id = required(attrs, "id", name, reader);
    entry.state = required(attrs, "state", name, reader);
    if (entry.state.empty()) {
      throw ValidationError("tlsState entry #" + std::to_string(index) + " has an empty state" +
                            at_line(reader));
    }
    for (char c : entry.state) {
      if (!is_signal_state_char(c)) {
        throw ValidationError("tlsState entry #" + std::to_string(index) + " (tls '" +
                              entry.tls_id + "') has unknown state character '" +
                              std::string(1, c) + "'" + at_line(reader));
      }
    }
    if (auto it = last_time.find(entry.tls_id); it != last_time.end() && entry.t < it->second) {
      std::ostringstream msg;
      msg << "tlsState entry #" << index << " for tls '" << entry.tls_id << "' at time " << entry.t
          << " is earlier than the preceding entry at " << it->second << at_line(reader);
      throw ValidationError(msg.str());
    }
    last_time[entry.tls_id] = entry.t;
    log.entries.push_back(std::move(entry));
  });
  reader.parse(xml_text);
  std::stable_sort(log.entries.begin(), log.entries.end(),
                   [](const SignalStateEntry& a, const SignalStateEntry& b) { return a.t < b.t; });
  return log;
}

PoiSet parse_pois(std::string_view xml_text) {
  PoiSet set;
  XmlReader reader(nullptr);
  reader = XmlReader(
      [&](std::string_view name, const Attributes& attrs) {
        if (name == "param" && !set.pois.empty() && attrs.get("key") == std::string_view("scale")) {
          if (const auto v = detail::to_double(attrs.get("value").value_or("")))
            set.pois.back().scale = *v;
          return;
        }
        if (name != "poi") return;
        Poi poi;
        poi.id = required(attrs, "id", name, reader);
        const auto x = attrs.get("x");
        const auto y = attrs.get("y");
        if (!x || !y) {
          throw ValidationError("poi '" + poi.id + "' is missing its x or y coordinate" +
                                at_line(reader));
        }
        const auto px = detail::to_double(*x);
        const auto py = detail::to_double(*y);
        if (!px || !py)
          throw ValidationError("poi '" + poi.id + "' has non-numeric coordinates" + at_line(reader));
        poi.position = {*px, *py};
        poi.kind = std::string(attrs.get("type").value_or(""));
        if (poi.kind.empty())
          throw ValidationError("poi '" + poi.id + "' has no type" + at_line(reader));
        if (const auto a = attrs.get("angle")) {
          const auto angle = detail::to_double(*a);
          if (!angle) throw ValidationError("poi '" + poi.id + "' has non-numeric angle" + at_line(reader));
          poi.heading_deg = normalize_degrees(*angle);
        }
        if (const auto s = attrs.get("scale")) {
          const auto scale = detail::to_double(*s);
          if (!scale || *scale <= 0.0)
            throw ValidationError("poi '" + poi.id + "' has invalid scale" + at_line(reader));
          poi.scale = *scale;
        }
        set.pois.push_back(std::move(poi));
      });
  reader.parse(xml_text);
  return set;
}

}  // namespace sumoviz
