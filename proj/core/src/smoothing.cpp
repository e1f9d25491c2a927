#include "sumoviz/smoothing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "sumoviz/error.hpp"

namespace sumoviz {
namespace {

// Frame indices are computed from products like (t - t0) * fps that should be
// integral; this absorbs the rounding error of that product.
constexpr double kFrameEpsilon = 1e-7;

/// Shifts `angle` by whole turns onto the branch closest to `reference`,
/// so that angle - reference lies in (-180, 180].
double continue_branch(double angle, double reference) {
  double delta = std::fmod(angle - reference, 360.0);
  if (delta > 180.0) delta -= 360.0;
  if (delta <= -180.0) delta += 360.0;
  return reference + delta;
}

}  // namespace

void SmoothingParams::validate() const {
  if (!(fps > 0.0) || !std::isfinite(fps)) throw ContractError("smoothing fps must be > 0");
  if (window < 1 || window % 2 == 0) throw ContractError("smoothing window must be odd and >= 1");
  if (heading_window < 1 || heading_window % 2 == 0)
    throw ContractError("heading window must be odd and >= 1");
  if (!(min_step >= 0.0)) throw ContractError("min_step must be >= 0");
}

bool SmoothedTrack::covers(double t) const {
  return !samples.empty() && t >= t0 - kFrameEpsilon / fps &&
         t <= end_time() + kFrameEpsilon / fps;
}

const TrackSample* SmoothedTrack::sample_at(double t) const {
  if (!covers(t)) return nullptr;
  const double frame = std::floor((t - t0) * fps + kFrameEpsilon);
  const auto index = static_cast<std::size_t>(std::clamp(frame, 0.0, double(samples.size() - 1)));
  return &samples[index];
}

std::size_t frame_count(double first, double last, double fps) {
  if (last < first) return 0;
  return static_cast<std::size_t>(std::floor((last - first) * fps + kFrameEpsilon)) + 1;
}

std::vector<double> unwrap_angles(std::span<const double> angles_deg) {
  if (angles_deg.empty()) throw ContractError("unwrap_angles: empty input");
  std::vector<double> out;
  out.reserve(angles_deg.size());
  if (!std::isfinite(angles_deg.front())) throw ContractError("unwrap_angles: non-finite angle");
  out.push_back(angles_deg.front());
  for (std::size_t i = 1; i < angles_deg.size(); ++i) {
    if (!std::isfinite(angles_deg[i])) throw ContractError("unwrap_angles: non-finite angle");
    // Continue from the previous *unwrapped* value, keeping the jump from the
    // previous raw value in (-180, 180].
    double step = std::fmod(angles_deg[i] - angles_deg[i - 1], 360.0);
    if (step > 180.0) step -= 360.0;
    if (step <= -180.0) step += 360.0;
    out.push_back(out.back() + step);
  }
  return out;
}

template <std::size_t N>
std::vector<Sample<N>> resample_linear(std::span<const TimedSample<N>> raw, double fps) {
  if (raw.empty()) throw ContractError("resample_linear: no samples");
  if (!(fps > 0.0)) throw ContractError("resample_linear: fps must be > 0");
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!(raw[i].t > raw[i - 1].t))
      throw ContractError("resample_linear: sample times must be strictly increasing");
  }

  const double t0 = raw.front().t;
  const std::size_t frames = frame_count(t0, raw.back().t, fps);
  std::vector<Sample<N>> out;
  out.reserve(frames);

  std::size_t k = 0;
  for (std::size_t n = 0; n < frames; ++n) {
    const double t = t0 + static_cast<double>(n) / fps;
    while (k + 1 < raw.size() && raw[k + 1].t <= t) ++k;
    if (k + 1 == raw.size()) {
      out.push_back(raw.back().value);
      continue;
    }
    const auto& a = raw[k];
    const auto& b = raw[k + 1];
    const double ratio = (t - a.t) / (b.t - a.t);
    Sample<N> v;
    for (std::size_t c = 0; c < N; ++c) v[c] = a.value[c] + ratio * (b.value[c] - a.value[c]);
    out.push_back(v);
  }
  return out;
}

template <std::size_t N>
std::vector<Sample<N>> rolling_mean(std::span<const Sample<N>> seq, int window) {
  if (window < 1 || window % 2 == 0)
    throw ContractError("rolling_mean: window must be odd and >= 1");
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(seq.size());
  std::vector<Sample<N>> out(seq.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, t + half);
    Sample<N> sum{};
    for (std::ptrdiff_t j = lo; j <= hi; ++j)
      for (std::size_t c = 0; c < N; ++c) sum[c] += seq[j][c];
    const double count = static_cast<double>(hi - lo + 1);
    for (std::size_t c = 0; c < N; ++c) out[t][c] = sum[c] / count;
  }
  return out;
}

template std::vector<Sample<1>> resample_linear<1>(std::span<const TimedSample<1>>, double);
template std::vector<Sample<2>> resample_linear<2>(std::span<const TimedSample<2>>, double);
template std::vector<Sample<3>> resample_linear<3>(std::span<const TimedSample<3>>, double);
template std::vector<Sample<1>> rolling_mean<1>(std::span<const Sample<1>>, int);
template std::vector<Sample<2>> rolling_mean<2>(std::span<const Sample<2>>, int);
template std::vector<Sample<3>> rolling_mean<3>(std::span<const Sample<3>>, int);

std::vector<double> estimate_headings(std::span<const Vec2> positions,
                                      std::span<const double> fallback_deg,
                                      const SmoothingParams& params) {
  params.validate();
  if (positions.size() != fallback_deg.size())
    throw ContractError("estimate_headings: positions and fallback differ in length");
  if (positions.empty()) throw ContractError("estimate_headings: empty input");

  const std::size_t n = positions.size();
  std::vector<Sample<1>> candidates(n);

  // Candidate at index t uses the step (t-1 -> t); index 0 borrows the step 0 -> 1.
  auto candidate = [&](std::size_t t, std::size_t step_to) -> std::pair<double, bool> {
    if (n < 2) return {fallback_deg[t], false};
    const Vec2 d = positions[step_to] - positions[step_to - 1];
    if (std::hypot(d.x, d.y) > params.min_step)
      return {90.0 - rad_to_deg(std::atan2(d.y, d.x)), true};
    return {fallback_deg[t], false};
  };

  {
    const auto [value, from_motion] = candidate(0, 1);
    candidates[0][0] = from_motion ? continue_branch(value, fallback_deg[0]) : value;
  }
  for (std::size_t t = 1; t < n; ++t) {
    candidates[t][0] = continue_branch(candidate(t, t).first, candidates[t - 1][0]);
  }

  const auto smoothed = rolling_mean<1>(candidates, params.heading_window);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = smoothed[t][0];
  return out;
}

SmoothedTrack smooth_track(std::span<const RawSample> raw, const SmoothingParams& params,
                           std::string vehicle_id) {
  params.validate();
  if (raw.empty()) throw ContractError("smooth_track: no samples");

  std::vector<double> angles(raw.size());
  std::transform(raw.begin(), raw.end(), angles.begin(),
                 [](const RawSample& s) { return s.angle_deg; });
  const auto unwrapped = unwrap_angles(angles);

  std::vector<TimedSample<3>> timed(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    timed[i] = {raw[i].t, {raw[i].x, raw[i].y, unwrapped[i]}};

  const auto interpolated = resample_linear<3>(timed, params.fps);
  const auto smoothed = rolling_mean<3>(interpolated, params.window);

  std::vector<Vec2> positions(smoothed.size());
  std::vector<double> fallback(smoothed.size());
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    positions[i] = {smoothed[i][0], smoothed[i][1]};
    fallback[i] = smoothed[i][2];
  }
  const auto headings = estimate_headings(positions, fallback, params);

  SmoothedTrack track;
  track.vehicle_id = std::move(vehicle_id);
  track.fps = params.fps;
  track.t0 = raw.front().t;
  track.first_raw_t = raw.front().t;
  track.last_raw_t = raw.back().t;
  track.samples.resize(smoothed.size());
  for (std::size_t i = 0; i < smoothed.size(); ++i)
    track.samples[i] = {positions[i].x, positions[i].y, normalize_degrees(headings[i])};
  return track;
}

std::vector<SmoothedTrack> smooth_log(const TrajectoryLog& log, const SmoothingParams& params,
                                      unsigned threads) {
  params.validate();
  std::vector<const std::pair<const std::string, std::vector<RawSample>>*> jobs;
  for (const auto& entry : log.vehicles)
    if (!entry.second.empty()) jobs.push_back(&entry);

  std::vector<SmoothedTrack> tracks(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < jobs.size(); i = next++)
        tracks[i] = smooth_track(jobs[i]->second, params, jobs[i]->first);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = jobs.size();
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return tracks;
}

void write_tracks_csv(std::ostream& out, std::span<const SmoothedTrack> tracks) {
  out << "vehicle_id,frame,t,x,y,heading_deg\n";
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& track : tracks) {
    for (std::size_t f = 0; f < track.samples.size(); ++f) {
      const auto& s = track.samples[f];
      out << track.vehicle_id << ',' << f << ',' << track.frame_time(f) << ',' << s.x << ','
          << s.y << ',' << s.heading_deg << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace sumoviz
