#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "winprob/date.hpp"
#include "winprob/timeline.hpp"

namespace winprob {

inline constexpr const char* kGamesHeader =
    "game_id,season,date,home_team,away_team,home_final,away_final,went_ot";
inline constexpr const char* kEventsHeader = "game_id,t,home_lead";
inline constexpr const char* kRatingsHeader = "date,team,rating";

struct IngestOptions {
  /// Label outcomes by the lead sign at t=2399 and drop games tied after
  /// regulation, instead of using the final (overtime-inclusive) result.
  bool regulation_only = false;
};

/// Builds one validated timeline per games row, in games-file order.
/// Events past t=2399 are dropped; a note is appended to `warnings` if given.
std::vector<ScoreTimeline> parse_games(std::istream& games, std::istream& events,
                                       const IngestOptions& opts = {},
                                       std::vector<std::string>* warnings = nullptr);

void write_games(std::ostream& out, std::span<const ScoreTimeline> games);
void write_events(std::ostream& out, std::span<const ScoreTimeline> games);

/// Dated team power ratings.
///
/// A lookup on a date with no entries uses the most recent earlier date
/// (when `fallback_to_previous_date` is set). A team missing on the resolved
/// date gets the lowest rating of that date minus `kNonD1Offset`.
class RatingsTable {
 public:
  static constexpr double kNonD1Offset = 1.0;

  /// Throws std::invalid_argument on a duplicate (date, team) or non-finite rating.
  void add(const Date& date, const std::string& team, double rating);

  std::optional<double> find_exact(const Date& date, const std::string& team) const;

  /// Throws std::out_of_range when no date at or before `date` exists.
  double lookup(const Date& date, const std::string& team,
                bool fallback_to_previous_date = true) const;

  bool empty() const noexcept { return by_date_.empty(); }
  std::size_t size() const noexcept;
  const std::map<Date, std::map<std::string, double>>& entries() const noexcept { return by_date_; }

  bool operator==(const RatingsTable&) const = default;

 private:
  std::map<Date, std::map<std::string, double>> by_date_;
};

RatingsTable parse_ratings(std::istream& in);
void write_ratings(std::ostream& out, const RatingsTable& table);

/// Convenience wrappers over the stream parsers.
std::vector<ScoreTimeline> load_games(const std::string& games_path, const std::string& events_path,
                                      const IngestOptions& opts = {},
                                      std::vector<std::string>* warnings = nullptr);
RatingsTable load_ratings(const std::string& path);

}  // namespace winprob
