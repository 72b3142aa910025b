#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "winprob/timeline.hpp"

namespace winprob {

/// Half-widths of the pooling window: [t-3, t+3] x [lead-2, lead+2].
inline constexpr int kWindowHalfTime = 3;
inline constexpr int kWindowHalfLead = 2;
inline constexpr int kWindowCells = (2 * kWindowHalfTime + 1) * (2 * kWindowHalfLead + 1);

struct WindowCounts {
  std::int64_t games = 0;  ///< N_w
  std::int64_t wins = 0;   ///< n_w
  int cells_covered = 0;
  bool operator==(const WindowCounts&) const = default;
};

/// Dense per-cell tallies on the (t, lead) plane: `total(t, l)` games were
/// at lead `l` after `t` seconds and `wins(t, l)` of them were home wins.
class CountGrid {
 public:
  CountGrid() : CountGrid(kRegulationSeconds, kDefaultLeadBound) {}
  CountGrid(int t_max, int lead_bound);

  int t_max() const noexcept { return t_max_; }
  int lead_bound() const noexcept { return lead_bound_; }
  int width() const noexcept { return 2 * lead_bound_ + 1; }
  std::int64_t games_total() const noexcept { return games_; }

  bool contains(int t, int lead) const noexcept {
    return t >= 0 && t < t_max_ && lead >= -lead_bound_ && lead <= lead_bound_;
  }
  std::size_t index(int t, int lead) const noexcept {
    return static_cast<std::size_t>(t) * width() + static_cast<std::size_t>(lead + lead_bound_);
  }

  std::int64_t total(int t, int lead) const { return total_[checked(t, lead)]; }
  std::int64_t wins(int t, int lead) const { return wins_[checked(t, lead)]; }

  /// Adds one game. Throws ValidationError if any per-second lead exceeds the bound.
  void add(const ScoreTimeline& game);

  /// Cell-level tally increment used by `add` and by tests building grids by hand.
  void add_cell(int t, int lead, std::int64_t games, std::int64_t wins);
  void set_games_total(std::int64_t m) noexcept { games_ = m; }

  bool operator==(const CountGrid&) const = default;

 private:
  std::size_t checked(int t, int lead) const;

  int t_max_;
  int lead_bound_;
  std::vector<std::int64_t> total_;
  std::vector<std::int64_t> wins_;
  std::int64_t games_ = 0;
};

CountGrid accumulate(std::span<const ScoreTimeline> games, int t_max = kRegulationSeconds,
                     int lead_bound = kDefaultLeadBound);

/// Sums counts over the pooling window centred at (t, lead), clipped to the plane.
/// Throws std::out_of_range if the centre is outside the grid.
WindowCounts window_counts(const CountGrid& grid, int t, int lead);

/// Elementwise sum; throws std::invalid_argument on mismatched dimensions.
CountGrid merge(const CountGrid& a, const CountGrid& b);

/// Debug dump `t,lead,N,n` of the nonzero cells.
void write_grid_csv(std::ostream& out, const CountGrid& grid);

}  // namespace winprob
