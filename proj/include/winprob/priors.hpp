#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "winprob/timeline.hpp"

namespace winprob {

/// Beta(alpha, beta) prior. Either parameter may be zero (improper tails)
/// but not both, so the posterior mean is defined even with no data.
struct BetaShape {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
  bool operator==(const BetaShape&) const = default;
};

/// Rectangle of the plane: t in [t_lo, t_hi), lead in [lead_lo, lead_hi].
struct PriorRegion {
  int t_lo = 0;
  int t_hi = 0;
  int lead_lo = 0;
  int lead_hi = 0;
  BetaShape shape;

  bool contains(int t, int lead) const noexcept {
    return t >= t_lo && t < t_hi && lead >= lead_lo && lead <= lead_hi;
  }
  bool operator==(const PriorRegion&) const = default;
};

/// Piecewise-constant prior over the (t, lead) plane. Cells not covered by a
/// region fall back to `default_positive` (lead > 0) or `default_negative`
/// (lead < 0). Construction rejects overlapping regions and any in-bounds
/// cell that would not resolve.
class PriorMap {
 public:
  PriorMap(std::string name, std::vector<PriorRegion> regions,
           std::optional<BetaShape> default_positive, std::optional<BetaShape> default_negative,
           int t_max = kRegulationSeconds, int lead_bound = kDefaultLeadBound);

  /// Throws std::out_of_range outside the plane.
  BetaShape at(int t, int lead) const;

  const std::string& name() const noexcept { return name_; }
  const std::vector<PriorRegion>& regions() const noexcept { return regions_; }
  const std::optional<BetaShape>& default_positive() const noexcept { return default_positive_; }
  const std::optional<BetaShape>& default_negative() const noexcept { return default_negative_; }
  int t_max() const noexcept { return t_max_; }
  int lead_bound() const noexcept { return lead_bound_; }

 private:
  std::optional<BetaShape> resolve(int t, int lead) const noexcept;

  std::string name_;
  std::vector<PriorRegion> regions_;
  std::optional<BetaShape> default_positive_;
  std::optional<BetaShape> default_negative_;
  int t_max_;
  int lead_bound_;
};

inline BetaShape prior_at(const PriorMap& map, int t, int lead) { return map.at(t, lead); }

/// beta(0,10) below -20, beta(5,5) on [-20, 20], beta(10,0) above 20, for every t.
PriorMap dj_prior();

/// Lead thresholds T1 < T2 < T3 <= 50 for one time interval of the dynamic prior.
struct BandThresholds {
  int t1 = 0;
  int t2 = 0;
  int t3 = 0;
  bool operator==(const BandThresholds&) const = default;
};

/// One row per time interval: [0,1200), [1200,1800), [1800,2100), [2100,2340), [2340,2400].
using BandTable = std::array<BandThresholds, 5>;

inline constexpr std::array<int, 6> kDynamicIntervalEdges = {0, 1200, 1800, 2100, 2340, 2400};
inline constexpr int kDynamicOuterLead = 50;

namespace shapes {
inline constexpr BetaShape kRed{19, 1};
inline constexpr BetaShape kOrange{9, 1};
inline constexpr BetaShape kYellow{4, 1};
inline constexpr BetaShape kWhite{1, 1};
inline constexpr BetaShape kGreen{1, 4};
inline constexpr BetaShape kLightBlue{1, 9};
inline constexpr BetaShape kBlue{1, 19};
}  // namespace shapes

BandTable default_band_table();
void validate_band_table(const BandTable& bands);

/// Time-and-lead dependent prior built from `bands`; |lead| > 50 always maps to red/blue.
PriorMap dynamic_prior(const BandTable& bands = default_band_table());

/// Band file: five non-comment lines `T1,T2,T3`, one per time interval.
BandTable parse_band_table(std::istream& in);

/// Region file: lines `t_lo,t_hi,l_lo,l_hi,alpha,beta`; optional
/// `default_positive,alpha,beta` and `default_negative,alpha,beta`; `#` comments.
PriorMap parse_prior_map(std::istream& in, std::string name);
void write_prior_map(std::ostream& out, const PriorMap& map);

}  // namespace winprob
