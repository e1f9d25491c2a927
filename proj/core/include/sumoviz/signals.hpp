#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumoviz/ingest.hpp"

namespace sumoviz {

enum class SignalColor { green, yellow, red, dark };
enum class HeadDesign { two_head, three_head, countdown };

/// g/G green, y yellow, r/u red, o/O dark.
SignalColor color_from_state_char(char c);

std::string_view to_string(SignalColor color);
std::string_view to_string(HeadDesign design);
std::optional<HeadDesign> head_design_from_string(std::string_view text);

struct ColorInterval {
  double t_start = 0.0;
  SignalColor color = SignalColor::dark;
};

/// Per-link colour history. Consecutive entries with the same colour are
/// merged, so every interval boundary is a real colour change. The last
/// interval extends without bound.
struct LinkTimeline {
  std::vector<ColorInterval> intervals;
  bool logged_yellow = false;
};

class SignalTimeline {
public:
  static SignalTimeline build(const SignalStateLog& log);

  bool has_tls(std::string_view tls_id) const;
  std::size_t link_count(std::string_view tls_id) const;
  const LinkTimeline* link(std::string_view tls_id, int link_index) const;
  const std::map<std::string, std::vector<LinkTimeline>, std::less<>>& links() const { return links_; }

  /// Logged colour at t; dark before the first entry or for unknown links.
  SignalColor raw_color_at(std::string_view tls_id, int link_index, double t) const;

  /// Time of the next logged colour change strictly after t, if any.
  std::optional<double> next_switch(std::string_view tls_id, int link_index, double t) const;

private:
  std::map<std::string, std::vector<LinkTimeline>, std::less<>> links_;
};

SignalTimeline build_signal_timeline(const SignalStateLog& log);

SignalColor display_state_at(const SignalTimeline& timeline, std::string_view tls_id,
                             int link_index, double t, HeadDesign design,
                             double yellow_duration);

/// Whole seconds until the next logged colour change (ceiling); 0 when no
/// further change is logged.
int countdown_at(const SignalTimeline& timeline, std::string_view tls_id, int link_index,
                 double t);

}  // namespace sumoviz
