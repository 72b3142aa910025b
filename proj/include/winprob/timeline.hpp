#pragma once

#include <string>
#include <vector>

#include "winprob/date.hpp"

namespace winprob {

/// Length of regulation in seconds; valid game times are 0..2399.
inline constexpr int kRegulationSeconds = 2400;
inline constexpr int kLastSecond = kRegulationSeconds - 1;
/// Largest |home lead| represented on the (t, lead) plane.
inline constexpr int kDefaultLeadBound = 104;
/// No single possession scores more than four points.
inline constexpr int kMaxLeadStep = 4;

struct ScoreEvent {
  int t = 0;     ///< elapsed seconds
  int lead = 0;  ///< home minus away after `t` seconds
  bool operator==(const ScoreEvent&) const = default;
};

/// One game's home-lead step function over regulation plus its outcome.
struct ScoreTimeline {
  std::string game_id;
  std::string season;
  Date date{};
  std::string home_team;
  std::string away_team;
  std::vector<ScoreEvent> events;
  int home_final = 0;
  int away_final = 0;
  bool went_ot = false;
  int y = 0;  ///< 1 when the home team wins

  bool operator==(const ScoreTimeline&) const = default;
};

/// Lead of the last event at or before `t`. Throws std::out_of_range unless 0 <= t <= 2399.
int lead_at(const ScoreTimeline& game, int t);

/// Dense per-second leads, index t in [0, 2400).
std::vector<int> per_second_leads(const ScoreTimeline& game);

/// Calls `fn(t, lead)` for every second in [0, 2400) in order.
template <typename Fn>
void for_each_second(const ScoreTimeline& game, Fn&& fn) {
  const auto& ev = game.events;
  std::size_t k = 0;
  int lead = ev.empty() ? 0 : ev.front().lead;
  for (int t = 0; t < kRegulationSeconds; ++t) {
    while (k < ev.size() && ev[k].t <= t) lead = ev[k++].lead;
    fn(t, lead);
  }
}

/// Throws ValidationError when `game` breaks a timeline invariant.
void validate(const ScoreTimeline& game);

}  // namespace winprob
