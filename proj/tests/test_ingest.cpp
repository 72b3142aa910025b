#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "winprob/error.hpp"
#include "winprob/ingest.hpp"

namespace winprob {
namespace {

using testing::make_game;

const std::string kGames = std::string(kGamesHeader) + "\n";
const std::string kEvents = std::string(kEventsHeader) + "\n";

std::vector<ScoreTimeline> parse(const std::string& games, const std::string& events,
                                 IngestOptions opts = {}, std::vector<std::string>* warnings = nullptr) {
  std::istringstream g(games);
  std::istringstream e(events);
  return parse_games(g, e, opts, warnings);
}

TEST(ParseGames, LabelsAwayWinFromFinalScore) {
  auto games = parse(kGames + "G1,2016-17,2017-01-15,Home U,Away St,74,77,false\n",
                     kEvents + "G1,0,0\nG1,30,-2\n");
  ASSERT_EQ(games.size(), 1u);
  EXPECT_EQ(games[0].y, 0);
  EXPECT_EQ(games[0].home_final, 74);
  EXPECT_EQ(games[0].away_final, 77);
  EXPECT_EQ(format_date(games[0].date), "2017-01-15");
}

TEST(ParseGames, ScorelessLogIsZeroLeadHomeWin) {
  auto games = parse(kGames + "G1,2016-17,2017-01-15,A,B,60,58,false\n", kEvents + "G1,0,0\n");
  ASSERT_EQ(games.size(), 1u);
  EXPECT_EQ(games[0].y, 1);
  for (int t : {0, 1, 1200, 2399}) EXPECT_EQ(lead_at(games[0], t), 0);
}

TEST(ParseGames, StepFunctionBetweenEvents) {
  // Three points at 1:05, then the away team answers 19 seconds later.
  auto games = parse(kGames + "G1,2015-16,2016-04-04,North Carolina,Villanova,74,77,false\n",
                     kEvents + "G1,65,3\nG1,0,0\nG1,84,1\n");
  const auto& g = games.at(0);
  EXPECT_EQ(lead_at(g, 64), 0);
  EXPECT_EQ(lead_at(g, 65), 3);
  EXPECT_EQ(lead_at(g, 70), 3);
  EXPECT_EQ(lead_at(g, 84), 1);
  EXPECT_EQ(lead_at(g, 2399), 1);
}

TEST(ParseGames, QuotedTeamNames) {
  auto games = parse(kGames + "G1,2016-17,2017-01-15,\"Miami, FL\",\"Say \"\"Hi\"\" U\",70,60,false\n",
                     kEvents + "G1,0,0\n");
  EXPECT_EQ(games[0].home_team, "Miami, FL");
  EXPECT_EQ(games[0].away_team, "Say \"Hi\" U");
}

TEST(ParseGames, ErrorsCarryLineNumbers) {
  try {
    parse(kGames + "G1,2016-17,2017-01-15,A,B,70,60,false\nG2,2016-17,2017-13-01,A,B,70,60,false\n",
          kEvents);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse(kGames + "G1,2016-17,2017-01-15,A,B,70,60\n", kEvents), ParseError);
  EXPECT_THROW(parse(kGames + "G1,2016-17,2017-01-15,A,B,70,60,maybe\n", kEvents), ParseError);
  EXPECT_THROW(parse("game_id,season\n", kEvents), ParseError);
}

TEST(ParseGames, RejectsBadData) {
  const auto row = kGames + "G1,2016-17,2017-01-15,A,B,70,60,false\n";
  EXPECT_THROW(parse(row, kEvents + "G9,0,0\n"), ParseError);                   // unknown game
  EXPECT_THROW(parse(row, kEvents + "G1,0,0\nG1,5,2\nG1,5,4\n"), ValidationError);  // duplicate t
  EXPECT_THROW(parse(row, kEvents + "G1,3,2\n"), ValidationError);              // no (0,0)
  EXPECT_THROW(parse(row, kEvents + "G1,0,1\n"), ValidationError);              // starts at 1
  EXPECT_THROW(parse(row, kEvents + "G1,0,0\nG1,10,5\n"), ValidationError);     // +5 in one step
  EXPECT_THROW(parse(row, kEvents), ValidationError);                          // no events
  EXPECT_THROW(parse(kGames + "G1,2016-17,2017-01-15,A,B,70,70,true\n", kEvents + "G1,0,0\n"),
               ParseError);                                                    // tie
  EXPECT_THROW(parse(row + "G1,2016-17,2017-01-16,A,B,70,60,false\n", kEvents + "G1,0,0\n"),
               ParseError);                                                    // duplicate id
}

TEST(ParseGames, OvertimeEventsDroppedWithWarning) {
  std::vector<std::string> warnings;
  auto games = parse(kGames + "G1,2016-17,2017-01-15,A,B,80,78,true\n",
                     kEvents + "G1,0,0\nG1,2390,-2\nG1,2399,0\nG1,2450,2\n", {}, &warnings);
  ASSERT_EQ(games.size(), 1u);
  EXPECT_EQ(games[0].events.back(), (ScoreEvent{2399, 0}));
  EXPECT_EQ(games[0].y, 1);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("after t=2399"), std::string::npos);
}

TEST(ParseGames, RegulationOnlyRelabelsAndDropsTies) {
  const auto games_csv = kGames + "G1,2016-17,2017-01-15,A,B,80,78,true\n" +
                         "G2,2016-17,2017-01-15,A,B,60,70,false\n";
  const auto events_csv = kEvents + "G1,0,0\nG2,0,0\nG2,100,2\n";
  auto all = parse(games_csv, events_csv);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[1].y, 0);

  std::vector<std::string> warnings;
  auto reg = parse(games_csv, events_csv, {.regulation_only = true}, &warnings);
  ASSERT_EQ(reg.size(), 1u);
  EXPECT_EQ(reg[0].game_id, "G2");
  EXPECT_EQ(reg[0].y, 1);  // led at the end of regulation
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(ParseGames, RepeatedLeadRowsCollapse) {
  std::vector<std::string> warnings;
  auto games = parse(kGames + "G1,2016-17,2017-01-15,A,B,70,60,false\n",
                     kEvents + "G1,0,0\nG1,10,2\nG1,20,2\nG1,30,4\n", {}, &warnings);
  EXPECT_EQ(games[0].events.size(), 3u);
  EXPECT_EQ(lead_at(games[0], 25), 2);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(LeadAt, BoundsAndStepSemantics) {
  auto g = make_game("G", {{0, 0}, {65, 3}}, 70, 60);
  EXPECT_EQ(lead_at(g, 0), 0);
  EXPECT_EQ(lead_at(g, 64), 0);
  EXPECT_EQ(lead_at(g, 2399), 3);
  EXPECT_THROW(lead_at(g, -1), std::out_of_range);
  EXPECT_THROW(lead_at(g, 2400), std::out_of_range);
}

TEST(LeadAt, ChangesOnlyAtEventTimesAndCovers2400Seconds) {
  for (const auto& g : testing::random_games(40, 7)) {
    const auto leads = per_second_leads(g);
    ASSERT_EQ(leads.size(), 2400u);
    std::size_t k = 1;
    for (int t = 1; t < kRegulationSeconds; ++t) {
      const bool at_event = k < g.events.size() && g.events[k].t == t;
      if (at_event) ++k;
      EXPECT_EQ(leads[t] != leads[t - 1], at_event) << g.game_id << " t=" << t;
      EXPECT_EQ(leads[t], lead_at(g, t));
    }
  }
}

TEST(GamesCsv, RoundTripIsCanonical) {
  auto games = testing::random_games(25, 11);
  games[3].home_team = "Texas A&M-CC, Islanders";
  games[4].went_ot = true;
  std::ostringstream g1, e1;
  write_games(g1, games);
  write_events(e1, games);
  std::istringstream gi(g1.str()), ei(e1.str());
  auto parsed = parse_games(gi, ei);
  EXPECT_EQ(parsed, games);
  std::ostringstream g2, e2;
  write_games(g2, parsed);
  write_events(e2, parsed);
  EXPECT_EQ(g2.str(), g1.str());
  EXPECT_EQ(e2.str(), e1.str());
}

TEST(Ratings, LookupAndFallbacks) {
  std::istringstream in(std::string(kRatingsHeader) + "\n" +
                        "2016-04-04,North Carolina,91.2\n"
                        "2016-04-04,Villanova,93.1\n"
                        "2016-04-04,\"Texas A&M-CC, Islanders\",70.5\n"
                        "2012-12-02,Baylor,80\n"
                        "2012-12-04,Baylor,81\n");
  const auto table = parse_ratings(in);
  EXPECT_EQ(table.size(), 5u);
  EXPECT_DOUBLE_EQ(table.lookup(parse_date("2016-04-04"), "North Carolina"), 91.2);
  // No ratings published on 2012-12-03: use the previous day.
  EXPECT_DOUBLE_EQ(table.lookup(parse_date("2012-12-03"), "Baylor"), 80.0);
  EXPECT_THROW(table.lookup(parse_date("2012-12-03"), "Baylor", false), std::out_of_range);
  // Team absent on that date: lowest rating that day minus one.
  EXPECT_DOUBLE_EQ(table.lookup(parse_date("2016-04-04"), "Champion Baptist"), 69.5);
  EXPECT_THROW(table.lookup(parse_date("2010-01-01"), "Baylor"), std::out_of_range);
}

TEST(Ratings, RejectsDuplicatesAndJunk) {
  const std::string h = std::string(kRatingsHeader) + "\n";
  auto parse_r = [](const std::string& s) {
    std::istringstream in(s);
    return parse_ratings(in);
  };
  EXPECT_THROW(parse_r(h + "2016-04-04,A,1\n2016-04-04,A,2\n"), ParseError);
  EXPECT_THROW(parse_r(h + "2016-04-31,A,1\n"), ParseError);
  EXPECT_THROW(parse_r(h + "2016-04-04,A,abc\n"), ParseError);
  EXPECT_THROW(parse_r(h + "2016-04-04,A,nan\n"), ParseError);
  EXPECT_THROW(parse_r(h + "2016-04-04,A\n"), ParseError);
}

TEST(Ratings, RoundTrip) {
  std::mt19937_64 rng(3);
  RatingsTable table;
  for (int d = 0; d < 5; ++d)
    for (int i = 0; i < 20; ++i)
      table.add(add_days(parse_date("2019-11-05"), d * 3), "Team " + std::to_string(i),
                std::uniform_real_distribution<double>(-30, 30)(rng));
  std::ostringstream out;
  write_ratings(out, table);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_ratings(in), table);
}

}  // namespace
}  // namespace winprob
