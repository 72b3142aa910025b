// Test-only reference implementations. These deliberately take different
// code paths from the library (per-second lead_at lookups, explicit window
// loops, quadrature for the normal CDF) so they can check it independently.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "winprob/timeline.hpp"

namespace winprob::testing {

inline ScoreTimeline make_game(std::string id, std::vector<ScoreEvent> events, int home_final,
                               int away_final, std::string season = "2016-17") {
  ScoreTimeline g;
  g.game_id = std::move(id);
  g.season = std::move(season);
  g.date = Date{std::chrono::year{2017}, std::chrono::month{1}, std::chrono::day{15}};
  g.home_team = "Home U";
  g.away_team = "Away St";
  g.events = std::move(events);
  g.home_final = home_final;
  g.away_final = away_final;
  g.y = home_final > away_final ? 1 : 0;
  return g;
}

/// Dense tally built by calling lead_at once per (game, second).
struct BruteGrid {
  int t_max = 0;
  int bound = 0;
  std::vector<std::int64_t> total;
  std::vector<std::int64_t> wins;

  std::int64_t& at(std::vector<std::int64_t>& v, int t, int l) {
    return v[static_cast<std::size_t>(t) * (2 * bound + 1) + static_cast<std::size_t>(l + bound)];
  }
  std::int64_t get(const std::vector<std::int64_t>& v, int t, int l) const {
    return v[static_cast<std::size_t>(t) * (2 * bound + 1) + static_cast<std::size_t>(l + bound)];
  }
};

inline BruteGrid brute_tally(std::span<const ScoreTimeline> games, int t_max, int bound) {
  BruteGrid g{t_max, bound, {}, {}};
  const auto cells = static_cast<std::size_t>(t_max) * (2 * bound + 1);
  g.total.assign(cells, 0);
  g.wins.assign(cells, 0);
  for (const auto& game : games) {
    for (int t = 0; t < t_max; ++t) {
      const int l = lead_at(game, t);
      g.at(g.total, t, l) += 1;
      g.at(g.wins, t, l) += game.y;
    }
  }
  return g;
}

struct BruteWindow {
  std::int64_t games = 0;
  std::int64_t wins = 0;
  int cells = 0;
};

/// Visits all 35 offsets and keeps the ones that land on the plane.
inline BruteWindow brute_window(const BruteGrid& g, int t, int l) {
  BruteWindow w;
  for (int dt = -3; dt <= 3; ++dt) {
    for (int dl = -2; dl <= 2; ++dl) {
      const int s = t + dt;
      const int m = l + dl;
      if (s < 0 || s >= g.t_max || m < -g.bound || m > g.bound) continue;
      w.games += g.get(g.total, s, m);
      w.wins += g.get(g.wins, s, m);
      ++w.cells;
    }
  }
  return w;
}

/// Phi(x) = 1/2 + integral_0^x phi by composite Simpson in long double.
inline double phi_quadrature(double x, int intervals = 40000) {
  const long double a = 0.0L;
  const long double b = x;
  const long double h = (b - a) / intervals;
  auto f = [](long double u) { return std::exp(-0.5L * u * u) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L); };
  long double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return static_cast<double>(0.5L + s * h / 3.0L);
}

/// Random walk timelines with steps in {+-1..+-4}, for tests that need
/// arbitrary (not simulator-shaped) data.
inline std::vector<ScoreTimeline> random_games(int count, std::uint64_t seed, int max_abs_lead = 30) {
  std::mt19937_64 rng(seed);
  std::vector<ScoreTimeline> out;
  for (int i = 0; i < count; ++i) {
    std::vector<ScoreEvent> ev{{0, 0}};
    int lead = 0;
    int t = 0;
    while (true) {
      t += 1 + static_cast<int>(rng() % 40);
      if (t > kLastSecond) break;
      int step = 1 + static_cast<int>(rng() % 4);
      if (rng() % 2) step = -step;
      if (std::abs(lead + step) > max_abs_lead) step = -step;
      lead += step;
      ev.push_back({t, lead});
    }
    const bool home_wins = lead > 0 || (lead == 0 && rng() % 2);
    out.push_back(make_game("R" + std::to_string(i), ev, home_wins ? 70 : 60, home_wins ? 60 : 70));
  }
  return out;
}

}  // namespace winprob::testing
