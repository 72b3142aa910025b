#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "winprob/grid.hpp"
#include "winprob/priors.hpp"
#include "winprob/probit.hpp"

namespace winprob {

enum class Method { Mle, Probit, Bayes, DynamicBayes, AdjustedDynamicBayes };

std::string_view to_string(Method m);
/// Accepts mle|probit|bayes|dynamic-bayes|adjusted-dynamic-bayes.
std::optional<Method> parse_method(std::string_view s);

/// Training metadata carried alongside a fitted surface.
struct Provenance {
  std::int64_t game_count = 0;
  std::string prior = "none";
  bool windowed = false;
  bool filled = false;
  std::optional<ProbitParams> probit;

  bool operator==(const Provenance&) const = default;
};

/// Estimated home win probability per (t, lead) cell with a missing mask.
/// Missing cells hold 0.0 so surfaces compare with ==.
class Surface {
 public:
  Surface() : Surface(Method::Mle, kRegulationSeconds, kDefaultLeadBound) {}
  Surface(Method method, int t_max, int lead_bound);

  Method method() const noexcept { return method_; }
  int t_max() const noexcept { return t_max_; }
  int lead_bound() const noexcept { return lead_bound_; }
  int width() const noexcept { return 2 * lead_bound_ + 1; }
  std::size_t cells() const noexcept { return prob_.size(); }

  bool contains(int t, int lead) const noexcept {
    return t >= 0 && t < t_max_ && lead >= -lead_bound_ && lead <= lead_bound_;
  }
  std::size_t index(int t, int lead) const noexcept {
    return static_cast<std::size_t>(t) * width() + static_cast<std::size_t>(lead + lead_bound_);
  }

  /// nullopt for missing cells and for coordinates off the plane.
  std::optional<double> at(int t, int lead) const noexcept {
    if (!contains(t, lead)) return std::nullopt;
    const auto i = index(t, lead);
    if (missing_[i]) return std::nullopt;
    return prob_[i];
  }
  bool missing(int t, int lead) const { return missing_.at(index(t, lead)) != 0; }
  std::size_t missing_count() const noexcept;

  /// Throws std::invalid_argument unless 0 <= p <= 1.
  void set(int t, int lead, double p);
  void set_missing(int t, int lead);

  Provenance& provenance() noexcept { return provenance_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  const std::vector<double>& values() const noexcept { return prob_; }
  const std::vector<std::uint8_t>& missing_mask() const noexcept { return missing_; }

  bool operator==(const Surface&) const = default;

 private:
  Method method_;
  int t_max_;
  int lead_bound_;
  std::vector<double> prob_;
  std::vector<std::uint8_t> missing_;
  Provenance provenance_;
};

/// n/N per cell (or per pooling window when `windowed`); N = 0 is missing.
Surface mle_surface(const CountGrid& grid, bool windowed = false);

/// Probit probabilities on every cell of a t_max x (2L+1) plane.
Surface probit_surface(const ProbitParams& params, int t_max = kRegulationSeconds,
                       int lead_bound = kDefaultLeadBound);

/// Beta-binomial posterior mean (wins + alpha) / (games + alpha + beta).
inline double posterior_mean(std::int64_t wins, std::int64_t games, const BetaShape& prior) {
  return (static_cast<double>(wins) + prior.alpha) /
         (static_cast<double>(games) + prior.alpha + prior.beta);
}

/// Posterior mean per cell from pooling-window counts and the prior at the
/// cell centre. Windows with no games are left missing.
Surface bayes_surface(const CountGrid& grid, const PriorMap& prior, Method tag = Method::Bayes);

/// Missing cells take the largest estimate on the surface when lead > 0,
/// the smallest when lead < 0, and 0.5 when lead == 0.
/// Throws std::invalid_argument if every cell is missing.
Surface fill_missing(Surface surface);

struct AdjustedEstimate {
  double value = 0.0;
  double p_pregame = 0.0;
  double p_ingame = 0.0;
  int t = 0;
};

/// ((2400 - t)/2400) * p_pregame + (t/2400) * p_ingame.
/// Throws std::invalid_argument for probabilities outside [0,1] or t outside [0,2400].
AdjustedEstimate adjusted_estimate(double p_ingame, double p_pregame, int t);

/// One fitted method, ready for pointwise queries.
struct FittedModel {
  Method method = Method::Mle;
  std::optional<Surface> surface;     ///< all methods except Probit
  std::optional<ProbitParams> probit;  ///< Probit only
  Provenance provenance;
};

struct FitOptions {
  bool windowed_mle = false;
  bool continuity_correction = false;
  /// Overrides the method's default prior (DJ for Bayes, dynamic for DynamicBayes).
  std::optional<PriorMap> prior;
};

/// Fits `method` from training counts. AdjustedDynamicBayes fits the dynamic-Bayes
/// surface; the adjustment itself happens at query time.
FittedModel fit_model(Method method, const CountGrid& grid, const FitOptions& opts = {});

/// Re-labels a dynamic-Bayes model as its pre-game adjusted variant.
FittedModel make_adjusted(FittedModel dynamic_bayes);

/// Point estimate; nullopt means "no estimate" (missing cell).
/// Throws std::invalid_argument when the adjusted method lacks `p_pregame`.
std::optional<double> estimate_at(const FittedModel& model, int t, int lead,
                                  std::optional<double> p_pregame = std::nullopt);

}  // namespace winprob
