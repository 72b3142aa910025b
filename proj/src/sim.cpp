#include "winprob/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "winprob/normal.hpp"

namespace winprob {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ (index * kGolden)));
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform(rng);
  while (u1 <= 0.0) u1 = uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Stream indices above this are reserved for league setup.
constexpr std::uint64_t kLeagueStream = ~0ULL;

std::string numbered(const char* prefix, long long i, std::size_t width) {
  auto digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

}  // namespace

void SimConfig::validate() const {
  if (n_games < 1) throw std::invalid_argument("simulation needs at least one game");
  if (n_test < 0 || n_test > n_games) throw std::invalid_argument("test split outside [0, games]");
  if (!std::isfinite(sigma) || sigma <= 0) throw std::invalid_argument("sigma must be positive");
  if (!std::isfinite(mu) || !std::isfinite(home_advantage))
    throw std::invalid_argument("drift must be finite");
  if (seasons < 1) throw std::invalid_argument("seasons must be >= 1");
  if (league) {
    if (league->teams < 2) throw std::invalid_argument("league needs at least two teams");
    if (!std::isfinite(league->rating_sd) || league->rating_sd < 0)
      throw std::invalid_argument("rating sd must be >= 0");
  }
}

ScoringRates scoring_rates(double game_mu, double sigma) {
  const double d = game_mu / (2.0 * kRegulationSeconds);
  const double s = sigma * sigma / (4.0 * kRegulationSeconds);
  // home = c + d/2, away = c - d/2 with 2c^2 - 2c + s + d^2/2 = 0; take the smaller root.
  const double disc = 1.0 - 2.0 * s - d * d;
  if (!(disc >= 0.0))
    throw std::invalid_argument("no scoring rates for mu=" + std::to_string(game_mu) +
                                ", sigma=" + std::to_string(sigma));
  const double c = 0.5 * (1.0 - std::sqrt(disc));
  ScoringRates r{c + 0.5 * d, c - 0.5 * d};
  if (!(r.home > 0.0 && r.home < 1.0 && r.away > 0.0 && r.away < 1.0))
    throw std::invalid_argument("no scoring rates in (0,1) for mu=" + std::to_string(game_mu) +
                                ", sigma=" + std::to_string(sigma));
  return r;
}

ScoreTimeline simulate_game(const SimConfig& cfg, double game_mu, std::uint64_t game_index) {
  const auto rates = scoring_rates(game_mu, cfg.sigma);
  auto rng = stream(cfg.seed, game_index);
  ScoreTimeline g;
  g.events.push_back({0, 0});
  int home = 0;
  int away = 0;
  for (int t = 1; t <= kRegulationSeconds; ++t) {
    const bool h = uniform(rng) < rates.home;
    const bool a = uniform(rng) < rates.away;
    if (h) home += 2;
    if (a) away += 2;
    // The final second's basket decides the score but lies outside the grid.
    if (h != a && t <= kLastSecond) g.events.push_back({t, home - away});
  }
  if (home == away) {
    g.went_ot = true;
    (uniform(rng) < 0.5 ? home : away) += 2;
  }
  g.home_final = home;
  g.away_final = away;
  g.y = home > away ? 1 : 0;
  return g;
}

SimCorpus simulate_corpus(const SimConfig& cfg) {
  cfg.validate();
  SimCorpus corpus;
  const int n = cfg.n_games;

  std::vector<std::string> names;
  std::vector<double> rating;
  std::vector<int> home_of(n), away_of(n);
  if (cfg.league) {
    auto rng = stream(cfg.seed, kLeagueStream);
    for (int i = 0; i < cfg.league->teams; ++i) {
      names.push_back(numbered("Team ", i + 1, 3));
      rating.push_back(cfg.league->rating_sd * standard_normal(rng));
    }
    const auto teams = static_cast<std::uint64_t>(cfg.league->teams);
    for (int i = 0; i < n; ++i) {
      const int h = static_cast<int>(rng() % teams);
      int a = static_cast<int>(rng() % (teams - 1));
      if (a >= h) ++a;
      home_of[i] = h;
      away_of[i] = a;
    }
  } else {
    names = {"Home", "Away"};
    rating = {0.0, 0.0};
    std::fill(away_of.begin(), away_of.end(), 1);
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    corpus.ratings.add(cfg.start_date, names[i], rating[i]);

  corpus.game_mu.resize(n);
  for (int i = 0; i < n; ++i)
    corpus.game_mu[i] = cfg.league ? rating[home_of[i]] - rating[away_of[i]] + cfg.home_advantage
                                   : cfg.mu;

  std::vector<ScoreTimeline> games(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers))
        games[i] = simulate_game(cfg, corpus.game_mu[i], static_cast<std::uint64_t>(i));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const auto width = std::max<std::size_t>(6, std::to_string(n).size());
  for (int i = 0; i < n; ++i) {
    auto& g = games[i];
    g.game_id = numbered("G", i + 1, width);
    g.season = "sim-" + std::to_string(1 + static_cast<long long>(i) * cfg.seasons / n);
    g.date = add_days(cfg.start_date, i / 50);
    g.home_team = names[home_of[i]];
    g.away_team = names[away_of[i]];
  }
  const auto split = games.begin() + (n - cfg.n_test);
  corpus.train.assign(std::make_move_iterator(games.begin()), std::make_move_iterator(split));
  corpus.test.assign(std::make_move_iterator(split), std::make_move_iterator(games.end()));
  return corpus;
}

double analytic_prob(double mu, double sigma, int t, int lead) {
  const double remaining = static_cast<double>(kRegulationSeconds - t) / kRegulationSeconds;
  return normal_cdf((lead + remaining * mu) / (sigma * std::sqrt(remaining)));
}

}  // namespace winprob
