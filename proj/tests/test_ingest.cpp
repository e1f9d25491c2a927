#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "reference_job.hpp"
#include "sumoviz/error.hpp"
#include "sumoviz/ingest.hpp"
#include "sumoviz/log.hpp"
#include "sumoviz/synthetic.hpp"

using namespace sumoviz;
using testing_support::read_fixture;

TEST(ParseNetwork, MinimalEdge) {
  const auto net = parse_network(read_fixture("net_minimal.net.xml"));
  ASSERT_EQ(net.edges.size(), 1u);
  ASSERT_EQ(net.edges[0].lanes.size(), 1u);
  const Lane& lane = net.edges[0].lanes[0];
  EXPECT_EQ(lane.id, "e0_0");
  EXPECT_DOUBLE_EQ(lane.width, 3.5);
  ASSERT_EQ(lane.shape.size(), 2u);
  EXPECT_EQ(lane.shape[0], (Vec2{0, 0}));
  EXPECT_EQ(lane.shape[1], (Vec2{100, 0}));
}

TEST(ParseNetwork, InternalEdgesFlaggedAndRetained) {
  const auto net = parse_network(read_fixture("net_internal.net.xml"));
  ASSERT_EQ(net.edges.size(), 3u);
  const Edge* internal = net.find_edge(":J1_0");
  ASSERT_NE(internal, nullptr);
  EXPECT_EQ(internal->function, EdgeFunction::internal);
  EXPECT_EQ(net.find_edge("in")->function, EdgeFunction::normal);
}

TEST(ParseNetwork, CoordinatesAreNotReOffset) {
  const auto net = parse_network(read_fixture("net_internal.net.xml"));
  EXPECT_EQ(net.net_offset, (Vec2{-500, -200}));
  EXPECT_EQ(net.find_edge("in")->lanes[0].shape[0], (Vec2{0.0, -1.6}));
}

TEST(ParseNetwork, DefaultLaneWidth) {
  const auto net = parse_network(read_fixture("net_two_lane_90m.net.xml"));
  for (const auto& lane : net.edges[0].lanes) EXPECT_DOUBLE_EQ(lane.width, 3.2);
}

TEST(ParseNetwork, SignalProgramsAndJunctions) {
  const auto net = parse_network(read_fixture("net_internal.net.xml"));
  ASSERT_EQ(net.signal_programs.size(), 1u);
  EXPECT_EQ(net.signal_programs[0].id, "J1");
  ASSERT_EQ(net.signal_programs[0].phases.size(), 3u);
  EXPECT_EQ(net.signal_programs[0].phases[1].state, "y");
  EXPECT_DOUBLE_EQ(net.signal_programs[0].phases[0].duration, 42.0);
  ASSERT_EQ(net.junctions.size(), 1u);
  EXPECT_EQ(net.junctions[0].shape.size(), 4u);  // closing point dropped
  EXPECT_EQ(net.junctions[0].incoming_lane_ids, std::vector<std::string>{"in_0"});
}

TEST(ParseNetwork, MalformedXmlReportsLine) {
  try {
    parse_network(read_fixture("net_malformed.net.xml"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
  }
}

TEST(ParseNetwork, ShortLaneNamesLane) {
  try {
    parse_network(read_fixture("net_short_lane.net.xml"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("e0_0"), std::string::npos);
  }
}

TEST(ParseNetwork, InvariantViolationsAreTypedErrors) {
  EXPECT_THROW(parse_network(read_fixture("net_lane_gap.net.xml")), ValidationError);
  EXPECT_THROW(parse_network(read_fixture("net_duplicate_edge.net.xml")), ValidationError);
  EXPECT_THROW(parse_network(read_fixture("net_bad_shape.net.xml")), Error);
}

TEST(ParseNetwork, EmptyNetwork) {
  const auto net = parse_network(read_fixture("net_empty.net.xml"));
  EXPECT_TRUE(net.edges.empty());
  EXPECT_TRUE(net.junctions.empty());
}

TEST(ParseNetwork, DegenerateJunctionShapeDropped) {
  log::ScopedCapture capture([](log::Level, std::string_view) {});
  const auto net = parse_network(read_fixture("net_minimal.net.xml"));
  ASSERT_EQ(net.junctions.size(), 2u);
  for (const auto& j : net.junctions) EXPECT_TRUE(j.shape.empty());
}

// Every corpus file either parses or fails with a library error.
TEST(ParseNetwork, TotalOnCorpus) {
  for (const auto& entry : std::filesystem::directory_iterator(SUMOVIZ_FIXTURE_DIR)) {
    if (entry.path().extension() != ".xml") continue;
    const std::string text = read_text_file(entry.path().string());
    log::ScopedCapture capture([](log::Level, std::string_view) {});
    for (auto* parser : {+[](std::string_view s) { (void)parse_network(s); },
                         +[](std::string_view s) { (void)parse_fcd(s); },
                         +[](std::string_view s) { (void)parse_tls_states(s); },
                         +[](std::string_view s) { (void)parse_pois(s); }}) {
      try {
        parser(text);
      } catch (const Error&) {
      } catch (const std::exception& e) {
        ADD_FAILURE() << entry.path() << ": untyped error " << e.what();
      }
    }
  }
}

TEST(ParseNetwork, ElementCountsMatchTextScan) {
  for (const char* name : {"net_minimal.net.xml", "net_internal.net.xml",
                           "net_two_lane_90m.net.xml", "net_junctions.net.xml"}) {
    const std::string text = read_fixture(name);
    log::ScopedCapture capture([](log::Level, std::string_view) {});
    const auto net = parse_network(text);
    EXPECT_EQ(net.edges.size(), oracle::count_elements(text, "edge")) << name;
    EXPECT_EQ(net.lane_count(), oracle::count_elements(text, "lane")) << name;
    EXPECT_EQ(net.junctions.size(), oracle::count_elements(text, "junction")) << name;
  }
  const auto corridor = synthetic::corridor_network();
  const auto net = parse_network(corridor);
  EXPECT_EQ(net.edges.size(), oracle::count_elements(corridor, "edge"));
  EXPECT_EQ(net.lane_count(), oracle::count_elements(corridor, "lane"));
}

TEST(ParseFcd, SingleSample) {
  const auto log = parse_fcd(read_fixture("fcd_single.xml"));
  ASSERT_EQ(log.vehicles.size(), 1u);
  const auto& s = log.vehicles.at("v0");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].x, 10.5);
  EXPECT_DOUBLE_EQ(s[0].y, 20.0);
  EXPECT_DOUBLE_EQ(s[0].angle_deg, 90.0);
  EXPECT_DOUBLE_EQ(s[0].speed.value(), 0.0);
}

TEST(ParseFcd, LifespanPassThrough) {
  const auto log = parse_fcd(read_fixture("fcd_interleaved.xml"));
  const auto& late = log.vehicles.at("late");
  ASSERT_EQ(late.size(), 3u);
  EXPECT_DOUBLE_EQ(late.front().t, 3.0);
  EXPECT_DOUBLE_EQ(late.back().t, 5.0);
}

TEST(ParseFcd, TimeStepIsModeOfDeltas) {
  const auto log = parse_fcd(read_fixture("fcd_interleaved.xml"));
  EXPECT_DOUBLE_EQ(log.time_step, 1.0);
  EXPECT_DOUBLE_EQ(log.begin, 0.0);
  EXPECT_DOUBLE_EQ(log.end, 9.0);
}

TEST(ParseFcd, TimesStrictlyIncreasing) {
  for (const char* name : {"fcd_single.xml", "fcd_interleaved.xml", "fcd_no_angle.xml"}) {
    const auto log = parse_fcd(read_fixture(name));
    for (const auto& [id, samples] : log.vehicles)
      for (std::size_t k = 1; k < samples.size(); ++k) EXPECT_LT(samples[k - 1].t, samples[k].t);
  }
}

TEST(ParseFcd, MissingTimeNamesTimestep) {
  try {
    parse_fcd(read_fixture("fcd_missing_time.xml"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("timestep #1"), std::string::npos) << e.what();
  }
}

TEST(ParseFcd, BadCoordinateNamesVehicleAndTime) {
  try {
    parse_fcd(read_fixture("fcd_bad_coord.xml"));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("v7"), std::string::npos) << msg;
    EXPECT_NE(msg.find("time 1"), std::string::npos) << msg;
  }
}

TEST(ParseFcd, MissingAngleIsZeroAndAnglesNormalised) {
  const auto log = parse_fcd(read_fixture("fcd_no_angle.xml"));
  const auto& s = log.vehicles.at("v0");
  EXPECT_DOUBLE_EQ(s[0].angle_deg, 0.0);
  EXPECT_DOUBLE_EQ(s[1].angle_deg, 270.0);
}

TEST(ParseFcd, MalformedXml) { EXPECT_THROW(parse_fcd(read_fixture("fcd_malformed.xml")), ParseError); }

TEST(ParseTls, TwoEntries) {
  const auto log = parse_tls_states(read_fixture("tls_basic.xml"));
  ASSERT_EQ(log.entries.size(), 2u);
  EXPECT_EQ(log.entries[0].tls_id, "J1");
  EXPECT_EQ(log.entries[0].state[1], 'G');
  EXPECT_EQ(log.entries[1].state[3], 'G');
  EXPECT_DOUBLE_EQ(log.entries[1].t, 45.0);
}

TEST(ParseTls, EmptyBody) {
  EXPECT_TRUE(parse_tls_states(read_fixture("tls_empty.xml")).entries.empty());
  EXPECT_TRUE(parse_tls_states("").entries.empty());
}

TEST(ParseTls, OutOfOrderRejected) {
  EXPECT_THROW(parse_tls_states(read_fixture("tls_out_of_order.xml")), ValidationError);
}

TEST(ParseTls, UnknownCharacterNamed) {
  try {
    parse_tls_states(read_fixture("tls_bad_char.xml"));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("1"), std::string::npos) << msg;
  }
}

TEST(ParsePois, KindsVerbatim) {
  const auto set = parse_pois(read_fixture("pois_basic.add.xml"));
  ASSERT_EQ(set.pois.size(), 4u);
  EXPECT_EQ(set.pois[0].id, "tree1");
  EXPECT_EQ(set.pois[0].kind, "tree");
  EXPECT_EQ(set.pois[0].position, (Vec2{5, 5}));
  EXPECT_EQ(set.pois[1].kind, "gazebo");
  EXPECT_DOUBLE_EQ(set.pois[1].heading_deg.value(), 45.0);
  EXPECT_DOUBLE_EQ(set.pois[3].scale.value(), 1.5);
  EXPECT_FALSE(set.pois[0].heading_deg.has_value());
}

TEST(ParsePois, MissingCoordinateNamesId) {
  try {
    parse_pois(read_fixture("pois_missing_xy.add.xml"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("lost"), std::string::npos);
  }
}

TEST(ParsePois, ThousandPoisKeepFileOrder) {
  std::ostringstream xml;
  xml << "<additional>\n";
  for (int i = 0; i < 1000; ++i)
    xml << "  <poi id=\"p" << (i * 7919) % 1000 << "_" << i << "\" type=\"tree\" x=\"" << i
        << "\" y=\"" << -i << "\"/>\n";
  xml << "</additional>\n";
  const auto set = parse_pois(xml.str());
  ASSERT_EQ(set.pois.size(), 1000u);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(set.pois[i].id, "p" + std::to_string((i * 7919) % 1000) + "_" + std::to_string(i));
    EXPECT_DOUBLE_EQ(set.pois[i].position.x, i);
  }
}
