#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "winprob/estimators.hpp"
#include "winprob/ingest.hpp"
#include "winprob/pregame.hpp"

namespace winprob {

/// Brier score and misclassification counts over scored game-seconds.
/// Game-seconds without an estimate are excluded and counted in `skipped`.
struct EvalReport {
  std::string method;
  std::string season;  ///< "all" for the pooled report
  double brier = 0.0;
  double misclassification_rate = 0.0;
  std::int64_t false_positives = 0;  ///< p > 0.5 and the home team lost
  std::int64_t false_negatives = 0;  ///< p < 0.5 and the home team won
  std::int64_t scored = 0;           ///< Q
  std::int64_t skipped = 0;
};

inline constexpr const char* kPooledSeason = "all";

/// Running Brier / misclassification tally with compensated summation.
/// p == 0.5 counts as neither a false positive nor a false negative.
class ScoreAccumulator {
 public:
  void add(double p, int y) {
    const double e = p - y;
    const double v = e * e;
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= v ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
    if (p > 0.5 && y == 0) ++fp_;
    if (p < 0.5 && y == 1) ++fn_;
    ++q_;
  }
  void skip() { ++skipped_; }

  EvalReport report(std::string method, std::string season) const;

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  std::int64_t fp_ = 0;
  std::int64_t fn_ = 0;
  std::int64_t q_ = 0;
  std::int64_t skipped_ = 0;
};

/// Scores `estimator(game_index, t, lead) -> optional<double>` over every
/// regulation second of every game.
template <typename Estimator>
EvalReport score_with(std::string method, std::span<const ScoreTimeline> games,
                      Estimator&& estimator, std::string season = kPooledSeason) {
  ScoreAccumulator acc;
  for (std::size_t i = 0; i < games.size(); ++i) {
    const int y = games[i].y;
    for_each_second(games[i], [&](int t, int lead) {
      const std::optional<double> p = estimator(i, t, lead);
      if (p) {
        acc.add(*p, y);
      } else {
        acc.skip();
      }
    });
  }
  return acc.report(std::move(method), std::move(season));
}

/// Where the adjusted method gets each game's pre-game probability:
/// `fixed_prob` when set, otherwise a ratings lookup.
struct PregameSource {
  const RatingsTable* ratings = nullptr;
  PregameConfig config;
  std::optional<double> fixed_prob;
};

/// Throws std::invalid_argument when the source has neither ratings nor a fixed value.
double resolve_pregame(const PregameSource& source, const ScoreTimeline& game);

/// Pooled report for one model. `pregame` is required for the adjusted method.
EvalReport evaluate(const FittedModel& model, std::span<const ScoreTimeline> games,
                    const PregameSource* pregame = nullptr);

/// One report per season (first-appearance order) followed by the pooled report.
std::vector<EvalReport> evaluate_by_season(const FittedModel& model,
                                           std::span<const ScoreTimeline> games,
                                           const PregameSource* pregame = nullptr);

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports);
void write_report_table(std::ostream& out, std::span<const EvalReport> reports);

struct TraceRow {
  int t = 0;
  int lead = 0;
  Method method = Method::Mle;
  std::optional<double> prob;  ///< nullopt where the method has no estimate
};

/// Per-second probabilities of each model for one game: rows t = 0..2399 and
/// a closing row at t = 2400 whose probability is the outcome itself.
std::vector<TraceRow> trace(const ScoreTimeline& game, std::span<const FittedModel> models,
                            const PregameSource* pregame = nullptr);
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

/// Dense `t,lead,prob` CSV of a surface; missing cells have an empty prob.
/// With `p_pregame`, each cell is the adjusted estimate at that pre-game probability.
void write_heatmap(std::ostream& out, const Surface& surface,
                   std::optional<double> p_pregame = std::nullopt);
/// File variant; throws Error when `path` cannot be written.
void export_heatmap(const Surface& surface, const std::string& path,
                    std::optional<double> p_pregame = std::nullopt);
/// Reads a heatmap CSV back; dimensions come from the largest t and |lead|.
Surface read_heatmap(std::istream& in, Method method);

}  // namespace winprob
