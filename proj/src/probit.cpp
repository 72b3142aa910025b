#include "winprob/probit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "winprob/error.hpp"
#include "winprob/normal.hpp"

namespace winprob {

namespace {

double corrected_lead(int lead, bool correct) {
  if (!correct || lead == 0) return lead;
  return lead > 0 ? lead - 0.5 : lead + 0.5;
}

// Neumaier compensated accumulator.
struct Sum {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Cell {
  double x1;
  double x2;
  double wins;
  double losses;
};

struct Evaluation {
  double ll = 0.0;
  double g[2] = {0.0, 0.0};
  double h[3] = {0.0, 0.0, 0.0};  // h11, h12, h22 of the Hessian
};

Evaluation evaluate(const std::vector<Cell>& cells, double b1, double b2, bool with_derivs) {
  Sum ll, g1, g2, h11, h12, h22;
  for (const auto& c : cells) {
    const double eta = b1 * c.x1 + b2 * c.x2;
    double dg = 0.0;
    double dh = 0.0;
    if (c.wins > 0) {
      ll.add(c.wins * log_normal_cdf(eta));
      if (with_derivs) {
        const double lam = inverse_mills(eta);
        dg += c.wins * lam;
        dh -= c.wins * lam * (lam + eta);
      }
    }
    if (c.losses > 0) {
      ll.add(c.losses * log_normal_cdf(-eta));
      if (with_derivs) {
        const double lam = inverse_mills(-eta);
        dg -= c.losses * lam;
        dh -= c.losses * lam * (lam - eta);
      }
    }
    if (with_derivs) {
      g1.add(dg * c.x1);
      g2.add(dg * c.x2);
      h11.add(dh * c.x1 * c.x1);
      h12.add(dh * c.x1 * c.x2);
      h22.add(dh * c.x2 * c.x2);
    }
  }
  Evaluation e;
  e.ll = ll.value();
  e.g[0] = g1.value();
  e.g[1] = g2.value();
  e.h[0] = h11.value();
  e.h[1] = h12.value();
  e.h[2] = h22.value();
  return e;
}

std::string diagnostics(int iter, double b1, double b2, double grad) {
  std::ostringstream os;
  os << " (iteration " << iter << ", b1=" << b1 << ", b2=" << b2 << ", |grad|/obs=" << grad << ")";
  return os.str();
}

}  // namespace

double probit_estimate(const ProbitParams& params, int t, int lead) {
  if (t < 0 || t > kLastSecond)
    throw std::out_of_range("probit time " + std::to_string(t) + " outside [0, 2399]");
  const double remaining = static_cast<double>(kRegulationSeconds - t) / kRegulationSeconds;
  const double l = corrected_lead(lead, params.continuity_correction);
  return normal_cdf((l + remaining * params.mu) / (params.sigma * std::sqrt(remaining)));
}

ProbitFit fit_probit(const CountGrid& grid, const ProbitFitOptions& opts) {
  std::int64_t games_at_start = 0;
  std::int64_t wins_at_start = 0;
  for (int l = -grid.lead_bound(); l <= grid.lead_bound(); ++l) {
    games_at_start += grid.total(0, l);
    wins_at_start += grid.wins(0, l);
  }
  if (games_at_start < 2 || wins_at_start == 0 || wins_at_start == games_at_start)
    throw FitError("probit fit needs at least two games with both outcomes represented");

  std::vector<Cell> cells;
  std::int64_t observations = 0;
  for (int t = 0; t < grid.t_max(); ++t) {
    const double root = std::sqrt(static_cast<double>(kRegulationSeconds - t) / kRegulationSeconds);
    for (int l = -grid.lead_bound(); l <= grid.lead_bound(); ++l) {
      const auto n = grid.total(t, l);
      if (n == 0) continue;
      const auto w = grid.wins(t, l);
      cells.push_back({corrected_lead(l, opts.continuity_correction) / root, root,
                       static_cast<double>(w), static_cast<double>(n - w)});
      observations += n;
    }
  }
  const double nobs = static_cast<double>(observations);

  double b1 = 0.1;
  double b2 = 0.0;
  auto cur = evaluate(cells, b1, b2, true);
  int iter = 0;
  for (;; ++iter) {
    const double grad = std::max(std::abs(cur.g[0]), std::abs(cur.g[1])) / nobs;
    if (grad < opts.gradient_tolerance) {
      if (b1 <= 0)
        throw FitError("probit fit: lead coefficient not positive, sigma undefined" +
                       diagnostics(iter, b1, b2, grad));
      // A small gradient can also mean the likelihood is still creeping up
      // towards a supremum at infinity. At a real maximum, stretching the
      // coefficients always loses likelihood.
      const double stretched = std::max(evaluate(cells, 2 * b1, b2, false).ll,
                                        evaluate(cells, 2 * b1, 2 * b2, false).ll);
      if (stretched >= cur.ll)
        throw FitError("probit separation: likelihood increases without bound" +
                       diagnostics(iter, b1, b2, grad));
      ProbitFit fit;
      fit.params = {b2 / b1, 1.0 / b1, opts.continuity_correction};
      fit.iterations = iter;
      fit.log_likelihood = cur.ll;
      fit.gradient_norm = grad;
      fit.observations = observations;
      return fit;
    }
    if (iter >= opts.max_iterations)
      throw FitError("probit fit did not converge" + diagnostics(iter, b1, b2, grad));

    // Newton direction d = -H^{-1} g for the 2x2 symmetric Hessian.
    const double det = cur.h[0] * cur.h[2] - cur.h[1] * cur.h[1];
    double d1, d2;
    if (det > 0 && cur.h[0] < 0) {
      d1 = -(cur.h[2] * cur.g[0] - cur.h[1] * cur.g[1]) / det;
      d2 = -(-cur.h[1] * cur.g[0] + cur.h[0] * cur.g[1]) / det;
    } else {
      // Not negative definite: fall back to a scaled gradient step.
      d1 = cur.g[0] / nobs;
      d2 = cur.g[1] / nobs;
    }

    double step = 1.0;
    bool moved = false;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      const double n1 = b1 + step * d1;
      const double n2 = b2 + step * d2;
      const auto trial = evaluate(cells, n1, n2, false);
      // Accept ties up to summation round-off near the optimum.
      if (std::isfinite(trial.ll) && trial.ll >= cur.ll - 1e-13 * std::abs(cur.ll)) {
        b1 = n1;
        b2 = n2;
        moved = true;
        break;
      }
    }
    if (!moved)
      throw FitError("probit line search stalled" + diagnostics(iter, b1, b2, grad));
    if (!std::isfinite(b1) || !std::isfinite(b2) || std::abs(b1) > 1e6)
      throw FitError("probit separation: lead coefficient diverging" +
                     diagnostics(iter, b1, b2, grad));
    cur = evaluate(cells, b1, b2, true);
  }
}

ProbitFit fit_probit(std::span<const ScoreTimeline> games, const ProbitFitOptions& opts) {
  int bound = kDefaultLeadBound;
  for (const auto& g : games)
    for (const auto& e : g.events) bound = std::max(bound, std::abs(e.lead));
  return fit_probit(accumulate(games, kRegulationSeconds, bound), opts);
}

}  // namespace winprob
