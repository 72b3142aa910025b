// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "winprob/estimators.hpp"
#include "winprob/eval.hpp"
#include "winprob/grid.hpp"
#include "winprob/normal.hpp"
#include "winprob/probit.hpp"
#include "winprob/sim.hpp"

using namespace winprob;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = seconds_since(start);
  std::printf("%s AC%-2d %s:%s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.str().c_str(), secs);
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

SimCorpus brownian_corpus(int games, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n_games = games;
  cfg.mu = 5.0;
  cfg.sigma = 10.0;
  cfg.seed = seed;
  return simulate_corpus(cfg);
}

SimCorpus league_corpus() {
  SimConfig cfg;
  cfg.n_games = 25000;
  cfg.n_test = 5000;
  cfg.seed = 2017;
  cfg.league = LeagueConfig{.teams = 200, .rating_sd = 8.0};
  cfg.seasons = 2;
  return simulate_corpus(cfg);
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd =
      std::string(WINPROB_CLI_PATH) + " " + args + " >" + stdout_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  std::printf("winprob acceptance suite\n");

  criterion(1, "exact-oracle equivalence on 200 simulated games", [](Outcome& o) {
    const auto start = Clock::now();
    const auto games = brownian_corpus(200, 101).train;
    int bound = 0;
    for (const auto& g : games)
      for (const auto& e : g.events) bound = std::max(bound, std::abs(e.lead));
    const auto grid = accumulate(games);
    const auto brute = testing::brute_tally(games, kRegulationSeconds, kDefaultLeadBound);
    const auto mle = mle_surface(grid);
    const auto dj_map = dj_prior();
    const auto dj = bayes_surface(grid, dj_map);
    const auto dyn_prior = dynamic_prior();
    const auto dyn = bayes_surface(grid, dyn_prior, Method::DynamicBayes);
    std::int64_t mismatches = 0, cells = 0;
    for (int t = 0; t < kRegulationSeconds; ++t) {
      for (int l = -kDefaultLeadBound; l <= kDefaultLeadBound; ++l) {
        ++cells;
        const auto N = brute.get(brute.total, t, l);
        const auto n = brute.get(brute.wins, t, l);
        if (grid.total(t, l) != N || grid.wins(t, l) != n) ++mismatches;
        const auto p = mle.at(t, l);
        if (p.has_value() != (N > 0) || (p && *p != static_cast<double>(n) / N)) ++mismatches;

        const auto bw = testing::brute_window(brute, t, l);
        const auto w = window_counts(grid, t, l);
        if (w.games != bw.games || w.wins != bw.wins || w.cells_covered != bw.cells) ++mismatches;

        for (const auto* s : {&dj, &dyn}) {
          const auto q = s->at(t, l);
          if (q.has_value() != (bw.games > 0)) {
            ++mismatches;
            continue;
          }
          if (!q) continue;
          const auto ab = (s == &dj ? dj_map : dyn_prior).at(t, l);
          if (*q != (bw.wins + ab.alpha) / (bw.games + ab.alpha + ab.beta)) ++mismatches;
        }
      }
    }
    const double secs = seconds_since(start);
    o.detail << " cells=" << cells << " mismatches=" << mismatches << " max|lead|=" << bound;
    o.check(mismatches == 0, "surfaces differ from brute force");
    o.check(secs < 30.0, "runtime >= 30 s");
  });

  criterion(2, "posterior-mean arithmetic and pseudo-count property", [](Outcome& o) {
    std::mt19937_64 rng(2);
    std::int64_t bad = 0;
    const int trials = 1000000;
    for (int k = 0; k < trials; ++k) {
      const auto N = static_cast<std::int64_t>(rng() % 1000000);
      const auto n = N ? static_cast<std::int64_t>(rng() % (N + 1)) : 0;
      // Shapes on a 1/64 grid so every sum below is exact in double precision.
      const auto a64 = static_cast<std::int64_t>(rng() % 2000);
      const auto b64 = static_cast<std::int64_t>(rng() % 2000) + (a64 == 0);
      const BetaShape ab{a64 / 64.0, b64 / 64.0};
      const double exact = static_cast<double>(64 * n + a64) / static_cast<double>(64 * N + a64 + b64);
      if (posterior_mean(n, N, ab) != exact) ++bad;
      if (posterior_mean(n + 1, N + 1, ab) != posterior_mean(n, N, {ab.alpha + 1, ab.beta})) ++bad;
      if (posterior_mean(n, N + 1, ab) != posterior_mean(n, N, {ab.alpha, ab.beta + 1})) ++bad;
    }
    o.detail << " trials=" << trials << " violations=" << bad;
    o.check(bad == 0, "formula or pseudo-count mismatch");
  });

  // Shared by criteria 3 and 4.
  const auto start3 = Clock::now();
  const auto brownian = brownian_corpus(20000, 303).train;
  const double sim_secs = seconds_since(start3);

  criterion(3, "probit recovery on 20,000 games (mu=5, sigma=10)", [&](Outcome& o) {
    const auto start = Clock::now();
    const auto fit = fit_probit(brownian);
    const double secs = seconds_since(start) + sim_secs;
    const double ratio = fit.params.mu / fit.params.sigma;
    double wins = 0;
    for (const auto& g : brownian) wins += g.y;
    const double rate = wins / static_cast<double>(brownian.size());
    const double implied = normal_cdf(ratio);
    o.detail << " mu=" << fit.params.mu << " sigma=" << fit.params.sigma << " mu/sigma=" << ratio
             << " Phi(mu/sigma)=" << implied << " win rate=" << rate
             << " iterations=" << fit.iterations;
    o.check(ratio >= 0.45 && ratio <= 0.55, "mu/sigma outside [0.45, 0.55]");
    o.check(fit.params.sigma >= 9.0 && fit.params.sigma <= 11.0, "sigma outside [9, 11]");
    o.check(std::abs(implied - rate) <= 0.02, "Phi(mu/sigma) off the win rate by > 0.02");
    o.check(secs < 300.0, "runtime >= 5 min");
  });

  criterion(4, "dynamic-Bayes surface vs analytic probabilities (N_w >= 1000)", [&](Outcome& o) {
    const auto grid = accumulate(brownian);
    const auto model = fit_model(Method::DynamicBayes, grid);
    double abs_err = 0.0, worst = 0.0;
    std::int64_t cells = 0;
    for (int t = 0; t < kRegulationSeconds; ++t)
      for (int l = -kDefaultLeadBound; l <= kDefaultLeadBound; ++l) {
        if (window_counts(grid, t, l).games < 1000) continue;
        const double e = std::abs(*model.surface->at(t, l) - analytic_prob(5.0, 10.0, t, l));
        abs_err += e;
        worst = std::max(worst, e);
        ++cells;
      }
    const double mae = cells ? abs_err / cells : 1.0;
    o.detail << " cells=" << cells << " MAE=" << mae << " max=" << worst;
    o.check(cells > 0, "no cells with N_w >= 1000");
    o.check(mae <= 0.03, "MAE > 0.03");
  });

  const auto league = league_corpus();
  const auto league_grid = accumulate(league.train);
  std::vector<FittedModel> league_models;
  for (auto m : {Method::Mle, Method::Probit, Method::Bayes, Method::DynamicBayes,
                 Method::AdjustedDynamicBayes})
    league_models.push_back(fit_model(m, league_grid));
  const PregameSource ratings_source{.ratings = &league.ratings, .config = {}, .fixed_prob = {}};
  std::vector<EvalReport> league_reports;
  for (const auto& m : league_models) league_reports.push_back(evaluate(m, league.test, &ratings_source));

  criterion(5, "method ordering on a 200-team league (20,000 train / 5,000 test)", [&](Outcome& o) {
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      lo = std::min(lo, league_reports[i].brier);
      hi = std::max(hi, league_reports[i].brier);
    }
    const double adjusted = league_reports[4].brier;
    for (const auto& r : league_reports) o.detail << ' ' << r.method << "=" << r.brier;
    o.detail << " spread(unadjusted)=" << hi - lo;
    o.check(adjusted < lo, "adjusted Brier not strictly lowest");
    o.check(hi - lo <= 0.005, "unadjusted methods spread > 0.005");
  });

  criterion(6, "Brier boundary identities", [&](Outcome& o) {
    const auto& games = league.test;
    const auto perfect = score_with("perfect", games, [&](std::size_t i, int, int) {
      return static_cast<double>(games[i].y);
    });
    const auto wrong = score_with("wrong", games, [&](std::size_t i, int, int) {
      return 1.0 - games[i].y;
    });
    const auto half = score_with("half", games, [](std::size_t, int, int) { return 0.5; });
    o.detail << " perfect B=" << perfect.brier << " MR=" << perfect.misclassification_rate
             << "; certain-wrong B=" << wrong.brier << "; constant 0.5 B=" << half.brier;
    o.check(perfect.brier == 0.0 && perfect.misclassification_rate == 0.0, "perfect != 0");
    o.check(wrong.brier == 1.0, "certain-wrong != 1");
    o.check(half.brier == 0.25, "constant 0.5 != 0.25");
  });

  criterion(7, "Q accounting: Q(MLE) <= Q(Bayes) <= Q(dynamic Bayes) = all game-seconds", [&](Outcome& o) {
    const std::int64_t total = static_cast<std::int64_t>(league.test.size()) * kRegulationSeconds;
    const auto q_mle = league_reports[0].scored, q_bayes = league_reports[2].scored,
               q_dyn = league_reports[3].scored;
    o.detail << " Q(mle)=" << q_mle << " Q(bayes)=" << q_bayes << " Q(dynamic)=" << q_dyn
             << " game-seconds=" << total;
    o.check(q_mle <= q_bayes && q_bayes <= q_dyn, "ordering violated");
    o.check(q_dyn == total, "dynamic Bayes does not score every game-second");
    for (const auto& r : league_reports)
      o.check(r.scored + r.skipped == total, r.method + ": Q + skipped != game-seconds");
  });

  criterion(8, "pre-game adjustment: convex bounds and boundary identities", [](Outcome& o) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::int64_t bad = 0;
    double worst = 0.0;
    const int trials = 1000000;
    for (int k = 0; k < trials; ++k) {
      const double p_in = u(rng), p_pre = u(rng);
      const int t = static_cast<int>(rng() % 2401);
      const double v = adjusted_estimate(p_in, p_pre, t).value;
      if (v < std::min(p_in, p_pre) || v > std::max(p_in, p_pre)) ++bad;
      if (adjusted_estimate(p_in, p_pre, 0).value != p_pre) ++bad;
      if (adjusted_estimate(p_in, p_pre, 2400).value != p_in) ++bad;
      const long double exact = ((2400.0L - t) * p_pre + static_cast<long double>(t) * p_in) / 2400.0L;
      worst = std::max(worst, static_cast<double>(std::abs(v - exact)));
    }
    o.detail << " trials=" << trials << " violations=" << bad << " max|err|=" << worst;
    o.check(bad == 0, "bound or boundary violated");
    o.check(worst <= 4 * std::numeric_limits<double>::epsilon(), "error above a few ulps");
  });

  criterion(9, "trace contract on 500 test games", [&](Outcome& o) {
    std::int64_t bad = 0;
    const std::size_t games = std::min<std::size_t>(500, league.test.size());
    for (std::size_t i = 0; i < games; ++i) {
      const auto& g = league.test[i];
      const auto rows = trace(g, league_models, &ratings_source);
      if (rows.size() != league_models.size() * (kRegulationSeconds + 1)) ++bad;
      for (std::size_t m = 0; m < league_models.size(); ++m) {
        const auto* r = &rows[m * (kRegulationSeconds + 1)];
        if (r[kRegulationSeconds].t != kRegulationSeconds || r[kRegulationSeconds].prob != g.y) ++bad;
        if (league_models[m].method == Method::AdjustedDynamicBayes &&
            r[0].prob != pregame_prob_for_game(g, league.ratings))
          ++bad;
      }
    }
    o.detail << " games=" << games << " methods=" << league_models.size() << " violations=" << bad;
    o.check(bad == 0, "trace rows violate the contract");
  });

  criterion(10, "CLI pipeline on 25,000 games and evaluation throughput", [](Outcome& o) {
    const auto dir = fs::temp_directory_path() / "winprob_acceptance_pipeline";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto log = dir / "log.txt";
    const auto start = Clock::now();
    const auto c = (dir / "corpus").string();
    const auto m = (dir / "models").string();
    int rc = run_cli("simulate --games 25000 --test-games 5000 --teams 200 --rating-sd 8 --seasons 2 "
                     "--seed 2017 --out " + c, log);
    if (rc == 0)
      rc = run_cli("fit --games " + c + "/games.csv --events " + c + "/events.csv --method all --out " + m,
                   log);
    const auto eval_out = dir / "eval.txt";
    if (rc == 0)
      rc = run_cli("eval --model " + m + "/mle.csv --model " + m + "/probit.csv --model " + m +
                       "/bayes.csv --model " + m + "/dynamic-bayes.csv --method mle --method probit "
                       "--method bayes --method dynamic-bayes --method adjusted-dynamic-bayes "
                       "--ratings " + c + "/ratings.csv --games " + c + "/test_games.csv --events " +
                       c + "/test_events.csv --csv " + (dir / "report.csv").string(),
                   eval_out);
    const double secs = seconds_since(start);
    o.check(rc == 0, "CLI step exited " + std::to_string(rc));
    long long scored = 0;
    double eval_secs = 0.0;
    std::ifstream in(eval_out);
    std::string line;
    while (std::getline(in, line))
      if (std::sscanf(line.c_str(), "# scored %lld game-seconds in %lf s", &scored, &eval_secs) == 2) break;
    const double rate = eval_secs > 0 ? scored / eval_secs : 0.0;
    o.detail << " total=" << secs << " s; evaluated " << scored << " game-seconds in " << eval_secs
             << " s (" << rate / 1e6 << " M/s)";
    o.check(secs < 600.0, "pipeline >= 10 min");
    o.check(scored > 0 && rate >= 1e6, "evaluation below 1M game-seconds/s");
    if (o.pass) fs::remove_all(dir);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
