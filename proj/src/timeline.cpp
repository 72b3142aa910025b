#include "winprob/timeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "winprob/error.hpp"

namespace winprob {

int lead_at(const ScoreTimeline& game, int t) {
  if (t < 0 || t > kLastSecond)
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, 2399]");
  auto it = std::upper_bound(game.events.begin(), game.events.end(), t,
                             [](int v, const ScoreEvent& e) { return v < e.t; });
  return it == game.events.begin() ? 0 : std::prev(it)->lead;
}

std::vector<int> per_second_leads(const ScoreTimeline& game) {
  std::vector<int> out;
  out.reserve(kRegulationSeconds);
  for_each_second(game, [&](int, int lead) { out.push_back(lead); });
  return out;
}

void validate(const ScoreTimeline& game) {
  auto bad = [&](const std::string& what) {
    throw ValidationError("game " + game.game_id + ": " + what);
  };
  const auto& ev = game.events;
  if (ev.empty()) bad("no events");
  if (ev.front().t != 0 || ev.front().lead != 0) bad("first event must be (0,0)");
  for (std::size_t i = 1; i < ev.size(); ++i) {
    if (ev[i].t <= ev[i - 1].t) bad("event times not strictly increasing at t=" + std::to_string(ev[i].t));
    const int step = std::abs(ev[i].lead - ev[i - 1].lead);
    if (step == 0) bad("repeated lead at t=" + std::to_string(ev[i].t));
    if (step > kMaxLeadStep)
      bad("lead jumps by " + std::to_string(step) + " at t=" + std::to_string(ev[i].t));
  }
  if (ev.back().t > kLastSecond) bad("event after t=2399");
  if (game.home_final == game.away_final) bad("tied final score");
}

}  // namespace winprob
