#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "winprob/ingest.hpp"
#include "winprob/timeline.hpp"

namespace winprob {

/// Pinned in corpus metadata so corpora can be reproduced elsewhere.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64 per game, seeded by splitmix64(seed ^ index*0x9E3779B97F4A7C15); "
    "uniforms = (x >> 11) * 2^-53; normals by Box-Muller";

struct LeagueConfig {
  int teams = 200;
  double rating_sd = 8.0;
};

struct SimConfig {
  int n_games = 1000;
  /// The last `n_test` games (by index) form the test split.
  int n_test = 0;
  /// Per-game expected final margin when no league is configured.
  double mu = 5.0;
  double sigma = 10.0;
  std::uint64_t seed = 1;
  /// With a league, each game's drift is r_home - r_away + home_advantage.
  std::optional<LeagueConfig> league;
  double home_advantage = 3.5;
  int seasons = 1;
  Date start_date{std::chrono::year{2020}, std::chrono::month{11}, std::chrono::day{1}};

  /// Throws std::invalid_argument for sigma <= 0, n_games < 1, bad split or league.
  void validate() const;
};

/// Per-second two-point scoring probabilities reproducing the requested
/// full-game drift and variance: 4800 (home - away) = mu and
/// 9600 (home (1 - home) + away (1 - away)) = sigma^2.
struct ScoringRates {
  double home = 0.0;
  double away = 0.0;
};

/// Throws std::invalid_argument when no rates in (0,1) solve the system.
ScoringRates scoring_rates(double game_mu, double sigma);

/// Simulates one game with drift `game_mu`; the random stream is derived from
/// (cfg.seed, game_index). Regulation ties are settled by a fair coin with went_ot set.
ScoreTimeline simulate_game(const SimConfig& cfg, double game_mu, std::uint64_t game_index);

struct SimCorpus {
  std::vector<ScoreTimeline> train;
  std::vector<ScoreTimeline> test;
  RatingsTable ratings;
  std::vector<double> game_mu;  ///< drift of every game, train then test
};

SimCorpus simulate_corpus(const SimConfig& cfg);

/// Exact Brownian-model probability for the simulator's own drift and sd.
double analytic_prob(double mu, double sigma, int t, int lead);

}  // namespace winprob
