#include "winprob/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace winprob {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 5> kMethodNames = {{
    {Method::Mle, "mle"},
    {Method::Probit, "probit"},
    {Method::Bayes, "bayes"},
    {Method::DynamicBayes, "dynamic-bayes"},
    {Method::AdjustedDynamicBayes, "adjusted-dynamic-bayes"},
}};

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [k, name] : kMethodNames)
    if (k == m) return name;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view s) {
  for (const auto& [k, name] : kMethodNames)
    if (name == s) return k;
  return std::nullopt;
}

Surface::Surface(Method method, int t_max, int lead_bound)
    : method_(method), t_max_(t_max), lead_bound_(lead_bound) {
  if (t_max <= 0 || lead_bound < 0) throw std::invalid_argument("bad surface dimensions");
  const auto n = static_cast<std::size_t>(t_max) * width();
  prob_.assign(n, 0.0);
  missing_.assign(n, 1);
}

std::size_t Surface::missing_count() const noexcept {
  return static_cast<std::size_t>(std::count(missing_.begin(), missing_.end(), 1));
}

void Surface::set(int t, int lead, double p) {
  if (!contains(t, lead)) throw std::out_of_range("surface cell outside plane");
  if (!is_probability(p))
    throw std::invalid_argument("probability " + std::to_string(p) + " outside [0,1]");
  const auto i = index(t, lead);
  prob_[i] = p;
  missing_[i] = 0;
}

void Surface::set_missing(int t, int lead) {
  if (!contains(t, lead)) throw std::out_of_range("surface cell outside plane");
  const auto i = index(t, lead);
  prob_[i] = 0.0;
  missing_[i] = 1;
}

Surface mle_surface(const CountGrid& grid, bool windowed) {
  Surface s(Method::Mle, grid.t_max(), grid.lead_bound());
  s.provenance().game_count = grid.games_total();
  s.provenance().windowed = windowed;
  for (int t = 0; t < grid.t_max(); ++t) {
    for (int l = -grid.lead_bound(); l <= grid.lead_bound(); ++l) {
      std::int64_t n = 0;
      std::int64_t w = 0;
      if (windowed) {
        const auto wc = window_counts(grid, t, l);
        n = wc.games;
        w = wc.wins;
      } else {
        n = grid.total(t, l);
        w = grid.wins(t, l);
      }
      if (n > 0) s.set(t, l, static_cast<double>(w) / static_cast<double>(n));
    }
  }
  return s;
}

Surface probit_surface(const ProbitParams& params, int t_max, int lead_bound) {
  Surface s(Method::Probit, t_max, lead_bound);
  s.provenance().probit = params;
  for (int t = 0; t < t_max; ++t)
    for (int l = -lead_bound; l <= lead_bound; ++l) s.set(t, l, probit_estimate(params, t, l));
  return s;
}

Surface bayes_surface(const CountGrid& grid, const PriorMap& prior, Method tag) {
  Surface s(tag, grid.t_max(), grid.lead_bound());
  s.provenance().game_count = grid.games_total();
  s.provenance().prior = prior.name();
  for (int t = 0; t < grid.t_max(); ++t) {
    for (int l = -grid.lead_bound(); l <= grid.lead_bound(); ++l) {
      const auto wc = window_counts(grid, t, l);
      if (wc.games == 0) continue;
      s.set(t, l, posterior_mean(wc.wins, wc.games, prior.at(t, l)));
    }
  }
  return s;
}

Surface fill_missing(Surface surface) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const auto& vals = surface.values();
  const auto& mask = surface.missing_mask();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (mask[i]) continue;
    lo = std::min(lo, vals[i]);
    hi = std::max(hi, vals[i]);
  }
  if (lo > hi) throw std::invalid_argument("cannot fill a surface with no estimates");
  for (int t = 0; t < surface.t_max(); ++t) {
    for (int l = -surface.lead_bound(); l <= surface.lead_bound(); ++l) {
      if (!surface.missing(t, l)) continue;
      surface.set(t, l, l > 0 ? hi : l < 0 ? lo : 0.5);
    }
  }
  surface.provenance().filled = true;
  return surface;
}

AdjustedEstimate adjusted_estimate(double p_ingame, double p_pregame, int t) {
  if (!is_probability(p_ingame) || !is_probability(p_pregame))
    throw std::invalid_argument("adjusted estimate needs probabilities in [0,1]");
  if (t < 0 || t > kRegulationSeconds)
    throw std::invalid_argument("adjusted estimate time " + std::to_string(t) +
                                " outside [0, 2400]");
  const double w_pre = static_cast<double>(kRegulationSeconds - t) / kRegulationSeconds;
  const double w_in = static_cast<double>(t) / kRegulationSeconds;
  const double v = w_pre * p_pregame + w_in * p_ingame;
  // Rounding can leave v one ulp outside the hull of its inputs.
  const double value = std::clamp(v, std::min(p_pregame, p_ingame), std::max(p_pregame, p_ingame));
  return {value, p_pregame, p_ingame, t};
}

FittedModel fit_model(Method method, const CountGrid& grid, const FitOptions& opts) {
  FittedModel m;
  m.method = method;
  switch (method) {
    case Method::Mle:
      m.surface = mle_surface(grid, opts.windowed_mle);
      break;
    case Method::Probit: {
      ProbitFitOptions po;
      po.continuity_correction = opts.continuity_correction;
      m.probit = fit_probit(grid, po).params;
      break;
    }
    case Method::Bayes:
      m.surface = bayes_surface(grid, opts.prior ? *opts.prior : dj_prior());
      break;
    case Method::DynamicBayes:
    case Method::AdjustedDynamicBayes:
      m.method = Method::DynamicBayes;
      m.surface = fill_missing(bayes_surface(grid, opts.prior ? *opts.prior : dynamic_prior(),
                                             Method::DynamicBayes));
      if (method == Method::AdjustedDynamicBayes) m = make_adjusted(std::move(m));
      break;
  }
  if (m.surface) {
    m.provenance = m.surface->provenance();
  } else {
    m.provenance.game_count = grid.games_total();
    m.provenance.probit = m.probit;
  }
  return m;
}

FittedModel make_adjusted(FittedModel dynamic_bayes) {
  if (dynamic_bayes.method != Method::DynamicBayes || !dynamic_bayes.surface)
    throw std::invalid_argument("the adjusted method needs a dynamic-bayes surface");
  dynamic_bayes.method = Method::AdjustedDynamicBayes;
  return dynamic_bayes;
}

std::optional<double> estimate_at(const FittedModel& model, int t, int lead,
                                  std::optional<double> p_pregame) {
  switch (model.method) {
    case Method::Probit:
      if (!model.probit) throw std::invalid_argument("probit model without parameters");
      return probit_estimate(*model.probit, t, lead);
    case Method::AdjustedDynamicBayes: {
      if (!p_pregame) throw std::invalid_argument("adjusted-dynamic-bayes needs a pre-game probability");
      if (!model.surface) throw std::invalid_argument("model has no surface");
      const auto in = model.surface->at(t, lead);
      if (!in) return std::nullopt;
      return adjusted_estimate(*in, *p_pregame, t).value;
    }
    default:
      if (!model.surface) throw std::invalid_argument("model has no surface");
      return model.surface->at(t, lead);
  }
}

}  // namespace winprob
