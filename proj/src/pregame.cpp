#include "winprob/pregame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "winprob/error.hpp"
#include "winprob/normal.hpp"

namespace winprob {

void PregameConfig::validate() const {
  if (!std::isfinite(home_advantage)) throw std::invalid_argument("home_advantage must be finite");
  if (!std::isfinite(spread_sd) || spread_sd <= 0.0)
    throw std::invalid_argument("spread_sd must be positive");
}

double pregame_prob(double r_home, double r_away, const PregameConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(r_home) || !std::isfinite(r_away))
    throw std::invalid_argument("ratings must be finite");
  const double p = normal_cdf((r_home - r_away + cfg.home_advantage) / cfg.spread_sd);
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(p, lo, hi);
}

double pregame_prob_for_game(const ScoreTimeline& game, const RatingsTable& ratings,
                             const PregameConfig& cfg) {
  try {
    return pregame_prob(ratings.lookup(game.date, game.home_team),
                        ratings.lookup(game.date, game.away_team), cfg);
  } catch (const std::out_of_range& e) {
    throw Error("game " + game.game_id + ": " + e.what());
  }
}

}  // namespace winprob
