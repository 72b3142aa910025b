#include "winprob/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "winprob/csv.hpp"
#include "winprob/error.hpp"

namespace winprob {

namespace {

template <typename Fn>
auto field(csv::Reader& r, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

void require_fields(csv::Reader& r, const std::vector<std::string>& row, std::size_t n) {
  if (row.size() != n)
    r.fail("expected " + std::to_string(n) + " fields, got " + std::to_string(row.size()));
}

}  // namespace

std::vector<ScoreTimeline> parse_games(std::istream& games_in, std::istream& events_in,
                                       const IngestOptions& opts,
                                       std::vector<std::string>* warnings) {
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  std::vector<ScoreTimeline> games;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> game_lines;

  csv::Reader gr(games_in, "games");
  gr.expect_header(kGamesHeader);
  while (auto row = gr.next()) {
    require_fields(gr, *row, 8);
    ScoreTimeline g;
    g.game_id = (*row)[0];
    if (g.game_id.empty()) gr.fail("empty game_id");
    g.season = (*row)[1];
    g.date = field(gr, [&] { return parse_date((*row)[2]); });
    g.home_team = (*row)[3];
    g.away_team = (*row)[4];
    g.home_final = static_cast<int>(field(gr, [&] { return csv::to_int((*row)[5]); }));
    g.away_final = static_cast<int>(field(gr, [&] { return csv::to_int((*row)[6]); }));
    g.went_ot = field(gr, [&] { return csv::to_bool((*row)[7]); });
    if (g.home_final < 0 || g.away_final < 0) gr.fail("negative final score");
    if (g.home_final == g.away_final) gr.fail("tie in final score for game " + g.game_id);
    g.y = g.home_final > g.away_final ? 1 : 0;
    if (!index.emplace(g.game_id, games.size()).second) gr.fail("duplicate game_id " + g.game_id);
    game_lines.push_back(gr.line());
    games.push_back(std::move(g));
  }

  std::vector<std::size_t> dropped_ot(games.size(), 0);
  csv::Reader er(events_in, "events");
  er.expect_header(kEventsHeader);
  while (auto row = er.next()) {
    require_fields(er, *row, 3);
    auto it = index.find((*row)[0]);
    if (it == index.end()) er.fail("unknown game_id " + (*row)[0]);
    const auto t = field(er, [&] { return csv::to_int((*row)[1]); });
    const auto lead = field(er, [&] { return csv::to_int((*row)[2]); });
    if (t < 0) er.fail("negative event time");
    if (std::llabs(lead) > std::numeric_limits<int>::max() / 2) er.fail("lead out of range");
    if (t > kLastSecond) {
      ++dropped_ot[it->second];
      continue;
    }
    games[it->second].events.push_back({static_cast<int>(t), static_cast<int>(lead)});
  }

  std::vector<ScoreTimeline> out;
  out.reserve(games.size());
  for (std::size_t i = 0; i < games.size(); ++i) {
    auto& g = games[i];
    if (dropped_ot[i])
      warn("game " + g.game_id + ": dropped " + std::to_string(dropped_ot[i]) +
           " event(s) after t=2399");
    auto& ev = g.events;
    std::stable_sort(ev.begin(), ev.end(),
                     [](const ScoreEvent& a, const ScoreEvent& b) { return a.t < b.t; });
    for (std::size_t k = 1; k < ev.size(); ++k)
      if (ev[k].t == ev[k - 1].t)
        throw ValidationError("game " + g.game_id + ": nonmonotone event times (two events at t=" +
                              std::to_string(ev[k].t) + ")");
    // Rows that repeat the current lead carry no information for the step function.
    const auto before = ev.size();
    ev.erase(std::unique(ev.begin(), ev.end(),
                         [](const ScoreEvent& a, const ScoreEvent& b) { return a.lead == b.lead; }),
             ev.end());
    if (ev.size() != before)
      warn("game " + g.game_id + ": collapsed " + std::to_string(before - ev.size()) +
           " event(s) that repeat the lead");
    validate(g);

    if (opts.regulation_only) {
      const int final_lead = ev.back().lead;
      if (final_lead == 0) {
        warn("game " + g.game_id + ": tied after regulation, dropped (--regulation-only)");
        continue;
      }
      g.y = final_lead > 0 ? 1 : 0;
    }
    out.push_back(std::move(g));
  }
  return out;
}

void write_games(std::ostream& out, std::span<const ScoreTimeline> games) {
  out << kGamesHeader << '\n';
  for (const auto& g : games) {
    out << csv::escape(g.game_id) << ',' << csv::escape(g.season) << ',' << format_date(g.date)
        << ',' << csv::escape(g.home_team) << ',' << csv::escape(g.away_team) << ','
        << g.home_final << ',' << g.away_final << ',' << (g.went_ot ? "true" : "false") << '\n';
  }
}

void write_events(std::ostream& out, std::span<const ScoreTimeline> games) {
  out << kEventsHeader << '\n';
  for (const auto& g : games) {
    const auto id = csv::escape(g.game_id);
    for (const auto& e : g.events) out << id << ',' << e.t << ',' << e.lead << '\n';
  }
}

void RatingsTable::add(const Date& date, const std::string& team, double rating) {
  if (!std::isfinite(rating)) throw std::invalid_argument("non-finite rating for " + team);
  if (!by_date_[date].emplace(team, rating).second)
    throw std::invalid_argument("duplicate rating for (" + format_date(date) + ", " + team + ")");
}

std::optional<double> RatingsTable::find_exact(const Date& date, const std::string& team) const {
  auto d = by_date_.find(date);
  if (d == by_date_.end()) return std::nullopt;
  auto t = d->second.find(team);
  if (t == d->second.end()) return std::nullopt;
  return t->second;
}

double RatingsTable::lookup(const Date& date, const std::string& team,
                            bool fallback_to_previous_date) const {
  auto it = by_date_.upper_bound(date);
  if (it == by_date_.begin())
    throw std::out_of_range("no ratings on or before " + format_date(date));
  --it;
  if (it->first != date && !fallback_to_previous_date)
    throw std::out_of_range("no ratings on " + format_date(date));
  const auto& teams = it->second;
  if (auto t = teams.find(team); t != teams.end()) return t->second;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [name, r] : teams) lowest = std::min(lowest, r);
  return lowest - kNonD1Offset;
}

std::size_t RatingsTable::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [d, teams] : by_date_) n += teams.size();
  return n;
}

RatingsTable parse_ratings(std::istream& in) {
  RatingsTable table;
  csv::Reader r(in, "ratings");
  r.expect_header(kRatingsHeader);
  while (auto row = r.next()) {
    require_fields(r, *row, 3);
    const Date d = field(r, [&] { return parse_date((*row)[0]); });
    if ((*row)[1].empty()) r.fail("empty team name");
    const double rating = field(r, [&] { return csv::to_double((*row)[2]); });
    field(r, [&] {
      table.add(d, (*row)[1], rating);
      return 0;
    });
  }
  return table;
}

void write_ratings(std::ostream& out, const RatingsTable& table) {
  out << kRatingsHeader << '\n';
  for (const auto& [d, teams] : table.entries())
    for (const auto& [team, rating] : teams)
      out << format_date(d) << ',' << csv::escape(team) << ',' << csv::format_double(rating) << '\n';
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

std::vector<ScoreTimeline> load_games(const std::string& games_path, const std::string& events_path,
                                      const IngestOptions& opts,
                                      std::vector<std::string>* warnings) {
  auto g = open_input(games_path);
  auto e = open_input(events_path);
  return parse_games(g, e, opts, warnings);
}

RatingsTable load_ratings(const std::string& path) {
  auto in = open_input(path);
  return parse_ratings(in);
}

}  // namespace winprob
