#include "sumoviz/signals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sumoviz/error.hpp"
#include "sumoviz/log.hpp"

namespace sumoviz {
namespace {

const ColorInterval* interval_at(const LinkTimeline& link, double t, std::size_t* index = nullptr) {
  const auto& iv = link.intervals;
  auto it = std::upper_bound(iv.begin(), iv.end(), t,
                             [](double value, const ColorInterval& c) { return value < c.t_start; });
  if (it == iv.begin()) return nullptr;
  --it;
  if (index) *index = static_cast<std::size_t>(it - iv.begin());
  return &*it;
}

void warn_unknown(std::string_view tls_id, int link_index) {
  std::ostringstream msg;
  msg << "no signal timeline for tls '" << tls_id << "' link " << link_index;
  log::warn(msg.str());
}

}  // namespace

SignalColor color_from_state_char(char c) {
  switch (c) {
    case 'G': case 'g': return SignalColor::green;
    case 'y': return SignalColor::yellow;
    case 'r': case 'u': return SignalColor::red;
    case 'o': case 'O': return SignalColor::dark;
    default:
      throw ValidationError(std::string("unknown signal state character '") + c + "'");
  }
}

std::string_view to_string(SignalColor color) {
  switch (color) {
    case SignalColor::green: return "green";
    case SignalColor::yellow: return "yellow";
    case SignalColor::red: return "red";
    case SignalColor::dark: return "dark";
  }
  return "dark";
}

std::string_view to_string(HeadDesign design) {
  switch (design) {
    case HeadDesign::two_head: return "two_head";
    case HeadDesign::three_head: return "three_head";
    case HeadDesign::countdown: return "countdown";
  }
  return "three_head";
}

std::optional<HeadDesign> head_design_from_string(std::string_view text) {
  if (text == "two_head") return HeadDesign::two_head;
  if (text == "three_head") return HeadDesign::three_head;
  if (text == "countdown") return HeadDesign::countdown;
  return std::nullopt;
}

SignalTimeline SignalTimeline::build(const SignalStateLog& log) {
  SignalTimeline timeline;
  for (const auto& entry : log.entries) {
    auto& links = timeline.links_[entry.tls_id];
    if (links.empty()) {
      links.resize(entry.state.size());
    } else if (links.size() != entry.state.size()) {
      std::ostringstream msg;
      msg << "tls '" << entry.tls_id << "' state at time " << entry.t << " has "
          << entry.state.size() << " links, earlier entries have " << links.size();
      throw ValidationError(msg.str());
    }
    for (std::size_t i = 0; i < entry.state.size(); ++i) {
      const SignalColor color = color_from_state_char(entry.state[i]);
      auto& link = links[i];
      if (color == SignalColor::yellow) link.logged_yellow = true;
      auto& iv = link.intervals;
      if (!iv.empty() && iv.back().t_start > entry.t) {
        throw ValidationError("tls '" + entry.tls_id + "' entries are not sorted by time");
      }
      if (!iv.empty() && iv.back().t_start == entry.t) iv.pop_back();  // later entry wins
      if (iv.empty() || iv.back().color != color) iv.push_back({entry.t, color});
    }
  }
  return timeline;
}

bool SignalTimeline::has_tls(std::string_view tls_id) const { return links_.contains(tls_id); }

std::size_t SignalTimeline::link_count(std::string_view tls_id) const {
  const auto it = links_.find(tls_id);
  return it == links_.end() ? 0 : it->second.size();
}

const LinkTimeline* SignalTimeline::link(std::string_view tls_id, int link_index) const {
  const auto it = links_.find(tls_id);
  if (it == links_.end() || link_index < 0 ||
      static_cast<std::size_t>(link_index) >= it->second.size())
    return nullptr;
  return &it->second[static_cast<std::size_t>(link_index)];
}

SignalColor SignalTimeline::raw_color_at(std::string_view tls_id, int link_index, double t) const {
  const LinkTimeline* l = link(tls_id, link_index);
  if (!l) return SignalColor::dark;
  const ColorInterval* current = interval_at(*l, t);
  return current ? current->color : SignalColor::dark;
}

std::optional<double> SignalTimeline::next_switch(std::string_view tls_id, int link_index,
                                                  double t) const {
  const LinkTimeline* l = link(tls_id, link_index);
  if (!l) return std::nullopt;
  auto it = std::upper_bound(l->intervals.begin(), l->intervals.end(), t,
                             [](double value, const ColorInterval& c) { return value < c.t_start; });
  if (it == l->intervals.end()) return std::nullopt;
  return it->t_start;
}

SignalTimeline build_signal_timeline(const SignalStateLog& log) { return SignalTimeline::build(log); }

SignalColor display_state_at(const SignalTimeline& timeline, std::string_view tls_id,
                             int link_index, double t, HeadDesign design,
                             double yellow_duration) {
  if (!(yellow_duration >= 0.0)) throw ContractError("yellow_duration must be >= 0");
  const LinkTimeline* l = timeline.link(tls_id, link_index);
  if (!l) {
    warn_unknown(tls_id, link_index);
    return SignalColor::dark;
  }
  std::size_t index = 0;
  const ColorInterval* current = interval_at(*l, t, &index);
  if (!current) return SignalColor::dark;

  switch (design) {
    case HeadDesign::two_head:
      return current->color == SignalColor::yellow ? SignalColor::red : current->color;
    case HeadDesign::countdown:
      return current->color;
    case HeadDesign::three_head:
      break;
  }
  if (current->color == SignalColor::green && !l->logged_yellow &&
      index + 1 < l->intervals.size()) {
    const ColorInterval& next = l->intervals[index + 1];
    if (next.color == SignalColor::red && t >= next.t_start - yellow_duration)
      return SignalColor::yellow;
  }
  return current->color;
}

int countdown_at(const SignalTimeline& timeline, std::string_view tls_id, int link_index,
                 double t) {
  if (!timeline.link(tls_id, link_index)) {
    warn_unknown(tls_id, link_index);
    return 0;
  }
  const auto next = timeline.next_switch(tls_id, link_index, t);
  if (!next) return 0;
  // Frame times carry rounding noise; 15.000000001 s is still 15.
  return static_cast<int>(std::ceil(*next - t - 1e-9));
}

}  // namespace sumoviz
