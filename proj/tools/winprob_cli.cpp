// winprob command line: simulate, fit, eval, trace, export-heatmap.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "winprob/csv.hpp"
#include "winprob/error.hpp"
#include "winprob/estimators.hpp"
#include "winprob/eval.hpp"
#include "winprob/grid.hpp"
#include "winprob/ingest.hpp"
#include "winprob/sim.hpp"
#include "winprob/store.hpp"

namespace fs = std::filesystem;
using namespace winprob;

namespace {

// Bad flag combinations that CLI11 cannot express; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Fn>
void write_text(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw Error("error writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create directory " + dir.string());
}

std::string fmt(double v) { return csv::format_double(v); }

std::vector<ScoreTimeline> read_games(const std::string& games, const std::string& events,
                                      bool regulation_only) {
  std::vector<std::string> warnings;
  auto out = load_games(games, events, {.regulation_only = regulation_only}, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return out;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  SimConfig cfg;
  int teams = 0;
  double rating_sd = 8.0;
  std::string start_date = "2020-11-01";
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  SimConfig cfg = a.cfg;
  if (a.teams > 0) cfg.league = LeagueConfig{a.teams, a.rating_sd};
  try {
    cfg.start_date = parse_date(a.start_date);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto corpus = simulate_corpus(cfg);
  const fs::path dir(a.out);
  ensure_dir(dir);
  write_text(dir / "games.csv", [&](std::ostream& o) { write_games(o, corpus.train); });
  write_text(dir / "events.csv", [&](std::ostream& o) { write_events(o, corpus.train); });
  write_text(dir / "ratings.csv", [&](std::ostream& o) { write_ratings(o, corpus.ratings); });
  if (!corpus.test.empty()) {
    write_text(dir / "test_games.csv", [&](std::ostream& o) { write_games(o, corpus.test); });
    write_text(dir / "test_events.csv", [&](std::ostream& o) { write_events(o, corpus.test); });
  }
  write_text(dir / "simulate.meta", [&](std::ostream& o) {
    o << "games=" << cfg.n_games << "\ntest_games=" << cfg.n_test << "\nmu=" << fmt(cfg.mu)
      << "\nsigma=" << fmt(cfg.sigma) << "\nseed=" << cfg.seed
      << "\nteams=" << (cfg.league ? cfg.league->teams : 0)
      << "\nrating_sd=" << fmt(cfg.league ? cfg.league->rating_sd : 0.0)
      << "\nhome_advantage=" << fmt(cfg.home_advantage) << "\nseasons=" << cfg.seasons
      << "\nstart_date=" << format_date(cfg.start_date) << "\nrng=" << kRngAlgorithm << '\n';
  });
  std::cout << "simulated " << corpus.train.size() << " training and " << corpus.test.size()
            << " test games into " << dir.string() << '\n';
  return 0;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string games;
  std::string events;
  std::string method = "all";
  std::string prior;
  bool windowed = false;
  bool continuity_correction = false;
  bool regulation_only = false;
  std::string out;
  std::string grid_dump;
};

// "dj", "dynamic", or "file:<path>"; a file with three fields per line is a
// band table for the dynamic prior, anything else a region map.
PriorMap load_prior(const std::string& choice) {
  if (choice == "dj") return dj_prior();
  if (choice == "dynamic") return dynamic_prior();
  if (choice.rfind("file:", 0) != 0) throw UsageError("--prior must be dj, dynamic or file:<path>");
  const std::string path = choice.substr(5);
  std::ifstream in(path);
  if (!in) throw Error("cannot open prior file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::istringstream probe(text.str());
  std::string line;
  std::size_t fields = 0;
  while (std::getline(probe, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    fields = csv::split_record(line).size();
    break;
  }
  std::istringstream body(text.str());
  if (fields == 3) return dynamic_prior(parse_band_table(body));
  return parse_prior_map(body, "file:" + fs::path(path).filename().string());
}

int run_fit(const FitArgs& a) {
  std::vector<Method> methods;
  if (a.method == "all") {
    methods = {Method::Mle, Method::Probit, Method::Bayes, Method::DynamicBayes};
  } else {
    const auto m = parse_method(a.method);
    if (!m) throw UsageError("unknown --method " + a.method);
    if (*m == Method::AdjustedDynamicBayes)
      throw UsageError("adjusted-dynamic-bayes is evaluated from a dynamic-bayes artifact; fit dynamic-bayes");
    methods = {*m};
  }
  FitOptions opts;
  opts.windowed_mle = a.windowed;
  opts.continuity_correction = a.continuity_correction;
  if (!a.prior.empty()) opts.prior = load_prior(a.prior);

  const auto games = read_games(a.games, a.events, a.regulation_only);
  if (games.empty()) throw Error("no training games");
  const auto grid = accumulate(games);
  if (!a.grid_dump.empty())
    write_text(a.grid_dump, [&](std::ostream& o) { write_grid_csv(o, grid); });

  const fs::path dir(a.out);
  ensure_dir(dir);
  for (const auto m : methods) {
    const auto start = std::chrono::steady_clock::now();
    const auto model = fit_model(m, grid, opts);
    std::ostringstream config;
    config << "method=" << to_string(m) << "\ngames=" << a.games << "\nevents=" << a.events
           << "\nprior=" << (a.prior.empty() ? "default" : a.prior)
           << "\nwindowed=" << a.windowed << "\ncontinuity_correction=" << a.continuity_correction
           << "\nregulation_only=" << a.regulation_only << '\n';
    const auto path = (dir / (std::string(to_string(m)) + ".csv")).string();
    save(make_bundle(model, config.str()), path);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "fit " << to_string(m) << " on " << games.size() << " games -> " << path;
    if (model.probit)
      std::cout << " (mu=" << fmt(model.probit->mu) << ", sigma=" << fmt(model.probit->sigma) << ')';
    std::cout << " in " << secs << " s\n";
  }
  return 0;
}

// ---- models shared by eval / trace -----------------------------------------

struct ModelArgs {
  std::vector<std::string> models;
  std::vector<std::string> methods;
  std::string ratings;
  double pregame_prob = -1.0;
  double home_advantage = 3.5;
  double spread_sd = 10.0;
};

// Loads every artifact, then picks the requested methods. The adjusted method
// is derived from a dynamic-bayes artifact.
std::vector<FittedModel> select_models(const ModelArgs& a) {
  std::map<Method, FittedModel> loaded;
  std::vector<Method> order;
  for (const auto& path : a.models) {
    auto m = to_model(load(path));
    if (!loaded.count(m.method)) order.push_back(m.method);
    loaded[m.method] = std::move(m);
  }
  std::vector<Method> wanted;
  if (a.methods.empty()) {
    wanted = order;
  } else {
    for (const auto& name : a.methods) {
      const auto m = parse_method(name);
      if (!m) throw UsageError("unknown --method " + name);
      wanted.push_back(*m);
    }
  }
  std::vector<FittedModel> out;
  for (const auto m : wanted) {
    if (m == Method::AdjustedDynamicBayes) {
      if (auto it = loaded.find(Method::AdjustedDynamicBayes); it != loaded.end()) {
        out.push_back(it->second);
      } else if (auto dyn = loaded.find(Method::DynamicBayes); dyn != loaded.end()) {
        out.push_back(make_adjusted(dyn->second));
      } else {
        throw UsageError("adjusted-dynamic-bayes needs a dynamic-bayes --model");
      }
      continue;
    }
    auto it = loaded.find(m);
    if (it == loaded.end())
      throw UsageError("no --model artifact for method " + std::string(to_string(m)));
    out.push_back(it->second);
  }
  return out;
}

struct Pregame {
  RatingsTable table;
  PregameSource source;
  bool available = false;
};

void resolve_pregame_args(const ModelArgs& a, const std::vector<FittedModel>& models, Pregame& pre) {
  bool needs = false;
  for (const auto& m : models) needs |= m.method == Method::AdjustedDynamicBayes;
  pre.source.config = {a.home_advantage, a.spread_sd};
  try {
    pre.source.config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.pregame_prob >= 0.0) {
    if (a.pregame_prob > 1.0) throw UsageError("--pregame-prob must lie in [0,1]");
    pre.source.fixed_prob = a.pregame_prob;
    pre.available = true;
  } else if (!a.ratings.empty()) {
    pre.table = load_ratings(a.ratings);
    pre.source.ratings = &pre.table;
    pre.available = true;
  }
  if (needs && !pre.available)
    throw UsageError("adjusted-dynamic-bayes requires --ratings (or --pregame-prob)");
}

void add_model_options(CLI::App* sub, ModelArgs& a) {
  sub->add_option("--model", a.models, "Artifact written by `fit` (repeatable)")->required();
  sub->add_option("--method", a.methods,
                  "Methods to report (repeatable); adjusted-dynamic-bayes uses the dynamic-bayes "
                  "artifact. Default: every loaded artifact");
  sub->add_option("--ratings", a.ratings, "Ratings CSV for pre-game probabilities");
  sub->add_option("--pregame-prob", a.pregame_prob,
                  "Fixed pre-game home win probability, overriding --ratings")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--home-advantage", a.home_advantage, "Points credited to the home team")
      ->capture_default_str();
  sub->add_option("--spread-sd", a.spread_sd, "SD of the final margin around the spread")
      ->capture_default_str();
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  ModelArgs models;
  std::string games;
  std::string events;
  bool regulation_only = false;
  std::string csv;
};

int run_eval(const EvalArgs& a) {
  const auto models = select_models(a.models);
  Pregame pre;
  resolve_pregame_args(a.models, models, pre);
  const auto games = read_games(a.games, a.events, a.regulation_only);
  if (games.empty()) throw Error("no test games");

  std::vector<EvalReport> reports;
  std::int64_t seconds = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& m : models) {
    auto r = evaluate_by_season(m, games, pre.available ? &pre.source : nullptr);
    seconds += r.back().scored + r.back().skipped;
    reports.insert(reports.end(), r.begin(), r.end());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "# games=" << games.size() << " home_advantage=" << fmt(a.models.home_advantage)
            << " spread_sd=" << fmt(a.models.spread_sd)
            << " pregame=" << (pre.source.fixed_prob ? "fixed:" + fmt(*pre.source.fixed_prob)
                               : pre.source.ratings ? "ratings:" + a.models.ratings
                                                    : std::string("none"))
            << " regulation_only=" << a.regulation_only << '\n';
  write_report_table(std::cout, reports);
  std::cout << "# scored " << seconds << " game-seconds in " << secs << " s\n";
  if (!a.csv.empty()) write_text(a.csv, [&](std::ostream& o) { write_report_csv(o, reports); });
  return 0;
}

// ---- trace -----------------------------------------------------------------

struct TraceArgs {
  ModelArgs models;
  std::string games;
  std::string events;
  std::string game_id;
  bool regulation_only = false;
  std::string out;
};

int run_trace(const TraceArgs& a) {
  const auto models = select_models(a.models);
  Pregame pre;
  resolve_pregame_args(a.models, models, pre);
  const auto games = read_games(a.games, a.events, a.regulation_only);
  const ScoreTimeline* game = nullptr;
  for (const auto& g : games)
    if (g.game_id == a.game_id) game = &g;
  if (!game) throw Error("unknown game_id " + a.game_id);
  const auto rows = trace(*game, models, pre.available ? &pre.source : nullptr);
  if (a.out.empty()) {
    write_trace_csv(std::cout, rows);
  } else {
    write_text(a.out, [&](std::ostream& o) { write_trace_csv(o, rows); });
  }
  return 0;
}

// ---- export-heatmap --------------------------------------------------------

struct HeatmapArgs {
  std::string model;
  std::string out;
  double pregame_prob = -1.0;
};

int run_export_heatmap(const HeatmapArgs& a) {
  const auto model = to_model(load(a.model));
  std::optional<double> pre;
  if (a.pregame_prob >= 0.0) {
    if (model.method != Method::DynamicBayes && model.method != Method::AdjustedDynamicBayes)
      throw UsageError("--pregame-prob applies to dynamic-bayes artifacts only");
    pre = a.pregame_prob;
  } else if (model.method == Method::AdjustedDynamicBayes) {
    throw UsageError("adjusted heatmap needs --pregame-prob");
  }
  const Surface surface = model.surface ? *model.surface : probit_surface(*model.probit);
  export_heatmap(surface, a.out, pre);
  std::cout << "wrote " << a.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-game home win probability: simulate, fit, evaluate"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate a synthetic corpus");
  s->add_option("--games", sim.cfg.n_games, "Total games")->capture_default_str();
  s->add_option("--test-games", sim.cfg.n_test, "Games held out as test_*.csv")->capture_default_str();
  s->add_option("--mu", sim.cfg.mu, "Expected final home margin (no league)")->capture_default_str();
  s->add_option("--sigma", sim.cfg.sigma, "SD of the final margin")->capture_default_str();
  s->add_option("--seed", sim.cfg.seed, "Random seed")->capture_default_str();
  s->add_option("--teams", sim.teams, "League size; 0 = one fixed matchup")->capture_default_str();
  s->add_option("--rating-sd", sim.rating_sd, "League rating spread")->capture_default_str();
  s->add_option("--home-advantage", sim.cfg.home_advantage, "League home edge in points")
      ->capture_default_str();
  s->add_option("--seasons", sim.cfg.seasons, "Seasons to spread games over")->capture_default_str();
  s->add_option("--start-date", sim.start_date, "Date of the first game")->capture_default_str();
  s->add_option("--out", sim.out, "Output directory")->required();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit estimators on a training corpus");
  f->add_option("--games", fit.games, "Games CSV")->required();
  f->add_option("--events", fit.events, "Events CSV")->required();
  f->add_option("--method", fit.method, "mle|probit|bayes|dynamic-bayes|all")->capture_default_str();
  f->add_option("--prior", fit.prior,
                "Prior for Bayes methods: dj, dynamic, or file:<path> (band table or region map)");
  f->add_flag("--windowed", fit.windowed, "Pool MLE counts over the window");
  f->add_flag("--continuity-correction", fit.continuity_correction, "Probit continuity correction");
  f->add_flag("--regulation-only", fit.regulation_only, "Label outcomes at the end of regulation");
  f->add_option("--out", fit.out, "Artifact directory")->required();
  f->add_option("--grid-dump", fit.grid_dump, "Write nonzero grid cells as t,lead,N,n");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Brier score and misclassification on test games");
  add_model_options(e, ev.models);
  e->add_option("--games", ev.games, "Test games CSV")->required();
  e->add_option("--events", ev.events, "Test events CSV")->required();
  e->add_flag("--regulation-only", ev.regulation_only, "Label outcomes at the end of regulation");
  e->add_option("--csv", ev.csv, "Also write method,season,B,MR,FP,FN,Q,skipped");

  TraceArgs tr;
  auto* t = app.add_subcommand("trace", "Per-second probabilities for one game");
  add_model_options(t, tr.models);
  t->add_option("--games", tr.games, "Games CSV")->required();
  t->add_option("--events", tr.events, "Events CSV")->required();
  t->add_option("--game-id", tr.game_id, "Game to trace")->required();
  t->add_flag("--regulation-only", tr.regulation_only, "Label outcomes at the end of regulation");
  t->add_option("--out", tr.out, "Output CSV (default stdout)");

  HeatmapArgs hm;
  auto* h = app.add_subcommand("export-heatmap", "Dense t,lead,prob CSV of a fitted surface");
  h->add_option("--model", hm.model, "Artifact written by `fit`")->required();
  h->add_option("--out", hm.out, "Output CSV")->required();
  h->add_option("--pregame-prob", hm.pregame_prob, "Apply the pre-game adjustment at this p")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (*s) return run_simulate(sim);
    if (*f) return run_fit(fit);
    if (*e) return run_eval(ev);
    if (*t) return run_trace(tr);
    if (*h) return run_export_heatmap(hm);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
