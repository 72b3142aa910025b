#include "winprob/grid.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

#include "winprob/error.hpp"

namespace winprob {

CountGrid::CountGrid(int t_max, int lead_bound) : t_max_(t_max), lead_bound_(lead_bound) {
  if (t_max <= 0 || lead_bound < 0) throw std::invalid_argument("bad grid dimensions");
  const auto cells = static_cast<std::size_t>(t_max) * width();
  total_.assign(cells, 0);
  wins_.assign(cells, 0);
}

std::size_t CountGrid::checked(int t, int lead) const {
  if (!contains(t, lead))
    throw std::out_of_range("cell (" + std::to_string(t) + ", " + std::to_string(lead) +
                            ") outside grid");
  return index(t, lead);
}

void CountGrid::add_cell(int t, int lead, std::int64_t games, std::int64_t wins) {
  const auto i = checked(t, lead);
  total_[i] += games;
  wins_[i] += wins;
}

void CountGrid::add(const ScoreTimeline& game) {
  // Validate the whole game first so a failure leaves the grid untouched.
  int worst_t = -1;
  int worst_lead = 0;
  for_each_second(game, [&](int t, int lead) {
    if (t < t_max_ && worst_t < 0 && (lead > lead_bound_ || lead < -lead_bound_)) {
      worst_t = t;
      worst_lead = lead;
    }
  });
  if (worst_t >= 0)
    throw ValidationError("game " + game.game_id + ": lead " + std::to_string(worst_lead) +
                          " at t=" + std::to_string(worst_t) + " exceeds bound " +
                          std::to_string(lead_bound_));
  const std::int64_t y = game.y;
  for_each_second(game, [&](int t, int lead) {
    if (t >= t_max_) return;
    const auto i = index(t, lead);
    ++total_[i];
    wins_[i] += y;
  });
  ++games_;
}

CountGrid accumulate(std::span<const ScoreTimeline> games, int t_max, int lead_bound) {
  CountGrid grid(t_max, lead_bound);
  for (const auto& g : games) grid.add(g);
  return grid;
}

WindowCounts window_counts(const CountGrid& grid, int t, int lead) {
  if (!grid.contains(t, lead))
    throw std::out_of_range("window centre (" + std::to_string(t) + ", " + std::to_string(lead) +
                            ") outside grid");
  const int t0 = std::max(0, t - kWindowHalfTime);
  const int t1 = std::min(grid.t_max() - 1, t + kWindowHalfTime);
  const int l0 = std::max(-grid.lead_bound(), lead - kWindowHalfLead);
  const int l1 = std::min(grid.lead_bound(), lead + kWindowHalfLead);
  WindowCounts w;
  for (int s = t0; s <= t1; ++s) {
    for (int l = l0; l <= l1; ++l) {
      w.games += grid.total(s, l);
      w.wins += grid.wins(s, l);
    }
  }
  w.cells_covered = (t1 - t0 + 1) * (l1 - l0 + 1);
  return w;
}

CountGrid merge(const CountGrid& a, const CountGrid& b) {
  if (a.t_max() != b.t_max() || a.lead_bound() != b.lead_bound())
    throw std::invalid_argument("cannot merge grids of different dimensions");
  CountGrid out = a;
  for (int t = 0; t < b.t_max(); ++t)
    for (int l = -b.lead_bound(); l <= b.lead_bound(); ++l)
      if (b.total(t, l) || b.wins(t, l)) out.add_cell(t, l, b.total(t, l), b.wins(t, l));
  out.set_games_total(a.games_total() + b.games_total());
  return out;
}

void write_grid_csv(std::ostream& out, const CountGrid& grid) {
  out << "t,lead,N,n\n";
  for (int t = 0; t < grid.t_max(); ++t)
    for (int l = -grid.lead_bound(); l <= grid.lead_bound(); ++l)
      if (grid.total(t, l))
        out << t << ',' << l << ',' << grid.total(t, l) << ',' << grid.wins(t, l) << '\n';
}

}  // namespace winprob
