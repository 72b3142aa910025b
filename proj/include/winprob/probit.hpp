#pragma once

#include <span>

#include "winprob/grid.hpp"
#include "winprob/timeline.hpp"

namespace winprob {

/// Brownian score model: final margin ~ N(mu, sigma^2) over a full game.
struct ProbitParams {
  double mu = 0.0;
  double sigma = 1.0;
  /// Replace lead by lead - 0.5*sign(lead) when evaluating.
  bool continuity_correction = false;

  bool operator==(const ProbitParams&) const = default;
};

struct ProbitFitOptions {
  bool continuity_correction = false;
  int max_iterations = 100;
  /// Max-norm threshold on the per-observation score vector.
  double gradient_tolerance = 1e-8;
};

struct ProbitFit {
  ProbitParams params;
  int iterations = 0;
  double log_likelihood = 0.0;
  double gradient_norm = 0.0;  ///< per observation, max-norm
  std::int64_t observations = 0;
};

/// P(home wins | lead after t seconds) = Phi((lead + (1-t*) mu) / (sigma sqrt(1-t*))), t* = t/2400.
/// Throws std::out_of_range unless 0 <= t <= 2399.
double probit_estimate(const ProbitParams& params, int t, int lead);

/// Maximum-likelihood probit regression without intercept, one observation per
/// game-second: y ~ Phi(b1 * lead/sqrt(1-t*) + b2 * sqrt(1-t*)), giving
/// sigma = 1/b1 and mu = b2/b1. Observations sharing a (t, lead) cell have
/// identical regressors, so the likelihood is evaluated from the cell tallies.
///
/// Damped Newton with backtracking. Throws FitError on separation, on
/// nonconvergence, or when the data lack either outcome.
ProbitFit fit_probit(const CountGrid& grid, const ProbitFitOptions& opts = {});
ProbitFit fit_probit(std::span<const ScoreTimeline> games, const ProbitFitOptions& opts = {});

}  // namespace winprob
