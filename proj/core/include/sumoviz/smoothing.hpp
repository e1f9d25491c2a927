#pragma once

// Turns low-rate trajectory samples into per-frame smoothed tracks:
// unwrap -> linear resample -> centred moving average -> motion-based
// heading estimate -> second moving average on the heading.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sumoviz/ingest.hpp"

namespace sumoviz {

struct SmoothingParams {
  double fps = 25.0;
  int window = 21;          // position/angle moving-average width, frames (odd)
  int heading_window = 41;  // heading moving-average width, frames (odd)
  double min_step = 0.03;   // metres per frame below which motion heading is unreliable

  /// Throws ContractError when a field is out of range.
  void validate() const;
};

struct TrackSample {
  double x = 0.0;
  double y = 0.0;
  double heading_deg = 0.0;  // compass, [0, 360)
};

struct SmoothedTrack {
  std::string vehicle_id;
  double fps = 25.0;
  double t0 = 0.0;
  std::vector<TrackSample> samples;
  double first_raw_t = 0.0;
  double last_raw_t = 0.0;

  double frame_time(std::size_t frame) const { return t0 + static_cast<double>(frame) / fps; }
  double end_time() const { return samples.empty() ? t0 : frame_time(samples.size() - 1); }
  bool covers(double t) const;
  /// Sample at the last frame time not after t; nullptr outside the lifespan.
  const TrackSample* sample_at(double t) const;
};

template <std::size_t N>
using Sample = std::array<double, N>;

template <std::size_t N>
struct TimedSample {
  double t = 0.0;
  Sample<N> value{};
};

/// Number of frames spanning [first, last] at the given rate, inclusive.
std::size_t frame_count(double first, double last, double fps);

std::vector<double> unwrap_angles(std::span<const double> angles_deg);

template <std::size_t N>
std::vector<Sample<N>> resample_linear(std::span<const TimedSample<N>> raw, double fps);

template <std::size_t N>
std::vector<Sample<N>> rolling_mean(std::span<const Sample<N>> seq, int window);

std::vector<double> estimate_headings(std::span<const Vec2> positions,
                                      std::span<const double> fallback_deg,
                                      const SmoothingParams& params);

SmoothedTrack smooth_track(std::span<const RawSample> raw, const SmoothingParams& params,
                           std::string vehicle_id = {});

/// Smooths every vehicle of the log; order follows the log's vehicle ids.
std::vector<SmoothedTrack> smooth_log(const TrajectoryLog& log, const SmoothingParams& params,
                                      unsigned threads = 1);

/// Debug dump: vehicle_id,frame,t,x,y,heading_deg.
void write_tracks_csv(std::ostream& out, std::span<const SmoothedTrack> tracks);

extern template std::vector<Sample<1>> resample_linear<1>(std::span<const TimedSample<1>>, double);
extern template std::vector<Sample<2>> resample_linear<2>(std::span<const TimedSample<2>>, double);
extern template std::vector<Sample<3>> resample_linear<3>(std::span<const TimedSample<3>>, double);
extern template std::vector<Sample<1>> rolling_mean<1>(std::span<const Sample<1>>, int);
extern template std::vector<Sample<2>> rolling_mean<2>(std::span<const Sample<2>>, int);
extern template std::vector<Sample<3>> rolling_mean<3>(std::span<const Sample<3>>, int);

}  // namespace sumoviz
