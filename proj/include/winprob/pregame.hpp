#pragma once

#include "winprob/ingest.hpp"
#include "winprob/timeline.hpp"

namespace winprob {

/// Point-spread model for the pre-game home win probability.
struct PregameConfig {
  double home_advantage = 3.5;  ///< points credited to the listed home team
  double spread_sd = 10.0;      ///< sd of the final margin around the spread

  /// Throws std::invalid_argument unless spread_sd > 0 and both fields are finite.
  void validate() const;
};

/// Phi((r_home - r_away + home_advantage) / spread_sd), kept strictly inside (0, 1).
double pregame_prob(double r_home, double r_away, const PregameConfig& cfg = {});

/// Rating lookup for both teams on the game date, then `pregame_prob`.
double pregame_prob_for_game(const ScoreTimeline& game, const RatingsTable& ratings,
                             const PregameConfig& cfg = {});

}  // namespace winprob
