#include "winprob/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "winprob/csv.hpp"
#include "winprob/error.hpp"

namespace winprob {

EvalReport ScoreAccumulator::report(std::string method, std::string season) const {
  EvalReport r;
  r.method = std::move(method);
  r.season = std::move(season);
  r.false_positives = fp_;
  r.false_negatives = fn_;
  r.scored = q_;
  r.skipped = skipped_;
  if (q_ > 0) {
    r.brier = (sum_ + comp_) / static_cast<double>(q_);
    r.misclassification_rate = static_cast<double>(fp_ + fn_) / static_cast<double>(q_);
  }
  return r;
}

double resolve_pregame(const PregameSource& source, const ScoreTimeline& game) {
  if (source.fixed_prob) {
    const double p = *source.fixed_prob;
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("pre-game probability outside [0,1]");
    return p;
  }
  if (!source.ratings)
    throw std::invalid_argument("adjusted-dynamic-bayes needs ratings or a fixed pre-game probability");
  return pregame_prob_for_game(game, *source.ratings, source.config);
}

namespace {

std::vector<double> pregame_probs(const FittedModel& model, std::span<const ScoreTimeline> games,
                                  const PregameSource* pregame) {
  if (model.method != Method::AdjustedDynamicBayes) return {};
  if (!pregame)
    throw std::invalid_argument("adjusted-dynamic-bayes needs ratings or a fixed pre-game probability");
  std::vector<double> out;
  out.reserve(games.size());
  for (const auto& g : games) out.push_back(resolve_pregame(*pregame, g));
  return out;
}

EvalReport evaluate_with(const FittedModel& model, std::span<const ScoreTimeline> games,
                         std::span<const double> pre, std::string season) {
  const std::string name(to_string(model.method));
  if (model.method == Method::AdjustedDynamicBayes) {
    const Surface& s = *model.surface;
    return score_with(name, games, [&](std::size_t i, int t, int lead) -> std::optional<double> {
      const auto in = s.at(t, lead);
      if (!in) return std::nullopt;
      return adjusted_estimate(*in, pre[i], t).value;
    }, std::move(season));
  }
  if (model.method == Method::Probit) {
    if (!model.probit) throw std::invalid_argument("probit model without parameters");
    const ProbitParams p = *model.probit;
    return score_with(name, games, [&](std::size_t, int t, int lead) -> std::optional<double> {
      return probit_estimate(p, t, lead);
    }, std::move(season));
  }
  if (!model.surface) throw std::invalid_argument("model has no surface");
  const Surface& s = *model.surface;
  return score_with(name, games, [&](std::size_t, int t, int lead) { return s.at(t, lead); },
                    std::move(season));
}

}  // namespace

EvalReport evaluate(const FittedModel& model, std::span<const ScoreTimeline> games,
                    const PregameSource* pregame) {
  const auto pre = pregame_probs(model, games, pregame);
  return evaluate_with(model, games, pre, kPooledSeason);
}

std::vector<EvalReport> evaluate_by_season(const FittedModel& model,
                                           std::span<const ScoreTimeline> games,
                                           const PregameSource* pregame) {
  const auto pre = pregame_probs(model, games, pregame);
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<ScoreTimeline>, std::vector<double>>> parts;
  for (std::size_t i = 0; i < games.size(); ++i) {
    auto [it, fresh] = parts.try_emplace(games[i].season);
    if (fresh) order.push_back(games[i].season);
    it->second.first.push_back(games[i]);
    if (!pre.empty()) it->second.second.push_back(pre[i]);
  }
  std::vector<EvalReport> out;
  for (const auto& season : order) {
    const auto& [g, p] = parts.at(season);
    out.push_back(evaluate_with(model, g, p, season));
  }
  out.push_back(evaluate_with(model, games, pre, kPooledSeason));
  return out;
}

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "method,season,B,MR,FP,FN,Q,skipped\n";
  for (const auto& r : reports)
    out << r.method << ',' << csv::escape(r.season) << ',' << csv::format_double(r.brier) << ','
        << csv::format_double(r.misclassification_rate) << ',' << r.false_positives << ','
        << r.false_negatives << ',' << r.scored << ',' << r.skipped << '\n';
}

void write_report_table(std::ostream& out, std::span<const EvalReport> reports) {
  std::size_t mw = 6;
  std::size_t sw = 6;
  for (const auto& r : reports) {
    mw = std::max(mw, r.method.size());
    sw = std::max(sw, r.season.size());
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %8s  %8s  %10s  %10s  %12s  %10s\n",
                static_cast<int>(mw), "method", static_cast<int>(sw), "season", "B", "MR", "FP",
                "FN", "Q", "skipped");
  out << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %8.4f  %8.4f  %10lld  %10lld  %12lld  %10lld\n",
                  static_cast<int>(mw), r.method.c_str(), static_cast<int>(sw), r.season.c_str(),
                  r.brier, r.misclassification_rate, static_cast<long long>(r.false_positives),
                  static_cast<long long>(r.false_negatives), static_cast<long long>(r.scored),
                  static_cast<long long>(r.skipped));
    out << buf;
  }
}

std::vector<TraceRow> trace(const ScoreTimeline& game, std::span<const FittedModel> models,
                            const PregameSource* pregame) {
  std::vector<TraceRow> rows;
  rows.reserve(models.size() * (kRegulationSeconds + 1));
  const auto leads = per_second_leads(game);
  for (const auto& m : models) {
    std::optional<double> pre;
    if (m.method == Method::AdjustedDynamicBayes) {
      if (!pregame)
        throw std::invalid_argument("adjusted-dynamic-bayes trace needs a pre-game probability");
      pre = resolve_pregame(*pregame, game);
    }
    for (int t = 0; t < kRegulationSeconds; ++t)
      rows.push_back({t, leads[t], m.method, estimate_at(m, t, leads[t], pre)});
    // At the buzzer every method collapses onto the outcome.
    rows.push_back({kRegulationSeconds, leads.back(), m.method, static_cast<double>(game.y)});
  }
  return rows;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << "t,lead,method,prob\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.lead << ',' << to_string(r.method) << ',';
    if (r.prob) out << csv::format_double(*r.prob);
    out << '\n';
  }
}

void write_heatmap(std::ostream& out, const Surface& surface, std::optional<double> p_pregame) {
  out << "t,lead,prob\n";
  for (int t = 0; t < surface.t_max(); ++t) {
    for (int l = -surface.lead_bound(); l <= surface.lead_bound(); ++l) {
      out << t << ',' << l << ',';
      if (auto p = surface.at(t, l)) {
        const double v = p_pregame ? adjusted_estimate(*p, *p_pregame, t).value : *p;
        out << csv::format_double(v);
      }
      out << '\n';
    }
  }
}

void export_heatmap(const Surface& surface, const std::string& path,
                    std::optional<double> p_pregame) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_heatmap(out, surface, p_pregame);
  out.flush();
  if (!out) throw Error("error writing " + path);
}

Surface read_heatmap(std::istream& in, Method method) {
  struct Cell {
    int t;
    int lead;
    std::optional<double> p;
  };
  std::vector<Cell> cells;
  int t_max = 0;
  int bound = 0;
  csv::Reader r(in, "heatmap");
  r.expect_header("t,lead,prob");
  while (auto row = r.next()) {
    if (row->size() != 3) r.fail("expected t,lead,prob");
    try {
      Cell c{static_cast<int>(csv::to_int((*row)[0])), static_cast<int>(csv::to_int((*row)[1])),
             std::nullopt};
      if (!(*row)[2].empty()) c.p = csv::to_double((*row)[2]);
      if (c.t < 0) r.fail("negative t");
      t_max = std::max(t_max, c.t + 1);
      bound = std::max(bound, std::abs(c.lead));
      cells.push_back(c);
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  if (cells.empty()) throw ParseError("heatmap", 0, "no cells");
  Surface s(method, t_max, bound);
  for (const auto& c : cells)
    if (c.p) s.set(c.t, c.lead, *c.p);
  return s;
}

}  // namespace winprob
