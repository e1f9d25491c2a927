#pragma once

// Road geometry: lane ribbons, junction polygons and lane markings. All
// output lies in the ground plane (height 0) of the render frame.

#include <vector>

#include "sumoviz/geometry.hpp"
#include "sumoviz/ingest.hpp"
#include "sumoviz/mesh.hpp"

namespace sumoviz {

/// Quads per segment plus round fans on the outer side of each bend.
Mesh tessellate_lane_ribbon(const Polyline& shape, double width);

/// Ear clipping; self-intersecting input falls back to a centroid fan.
Mesh triangulate_junction(const Polygon& shape);

struct MarkingStyle {
  double dash_length = 3.0;
  double gap_length = 6.0;
  double line_width = 0.15;
};

struct MarkingLayout {
  std::vector<Polyline> solid;   // outer lane borders
  std::vector<Polyline> dashes;  // one polyline per dash
};

MarkingLayout layout_markings(const RoadNetwork& network, const MarkingStyle& style = {});
Mesh generate_markings(const RoadNetwork& network, const MarkingStyle& style = {});

/// Offsets a polyline sideways (positive = left of travel) with mitred joins.
Polyline offset_polyline(const Polyline& line, double distance);

/// The portion of `line` between arc lengths s0 and s1.
Polyline sub_polyline(const Polyline& line, double s0, double s1);

}  // namespace sumoviz
