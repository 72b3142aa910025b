#include "winprob/priors.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "winprob/csv.hpp"
#include "winprob/error.hpp"

namespace winprob {

void BetaShape::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0 || beta < 0 ||
      alpha + beta <= 0)
    throw std::invalid_argument("beta shape needs alpha, beta >= 0 and alpha + beta > 0");
}

PriorMap::PriorMap(std::string name, std::vector<PriorRegion> regions,
                   std::optional<BetaShape> default_positive,
                   std::optional<BetaShape> default_negative, int t_max, int lead_bound)
    : name_(std::move(name)),
      regions_(std::move(regions)),
      default_positive_(default_positive),
      default_negative_(default_negative),
      t_max_(t_max),
      lead_bound_(lead_bound) {
  for (const auto& r : regions_) {
    if (r.t_lo >= r.t_hi || r.lead_lo > r.lead_hi)
      throw std::invalid_argument("empty prior region");
    r.shape.validate();
  }
  if (default_positive_) default_positive_->validate();
  if (default_negative_) default_negative_->validate();
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    for (std::size_t j = i + 1; j < regions_.size(); ++j) {
      const auto& a = regions_[i];
      const auto& b = regions_[j];
      const bool overlap = a.t_lo < b.t_hi && b.t_lo < a.t_hi && a.lead_lo <= b.lead_hi &&
                           b.lead_lo <= a.lead_hi;
      if (overlap)
        throw std::invalid_argument("prior regions " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
    }
  }
  for (int t = 0; t < t_max_; ++t)
    for (int l = -lead_bound_; l <= lead_bound_; ++l)
      if (!resolve(t, l))
        throw std::invalid_argument("prior map leaves cell (" + std::to_string(t) + ", " +
                                    std::to_string(l) + ") unresolved");
}

std::optional<BetaShape> PriorMap::resolve(int t, int lead) const noexcept {
  for (const auto& r : regions_)
    if (r.contains(t, lead)) return r.shape;
  if (lead > 0) return default_positive_;
  if (lead < 0) return default_negative_;
  return std::nullopt;
}

BetaShape PriorMap::at(int t, int lead) const {
  if (t < 0 || t >= t_max_ || lead < -lead_bound_ || lead > lead_bound_)
    throw std::out_of_range("prior lookup (" + std::to_string(t) + ", " + std::to_string(lead) +
                            ") outside plane");
  // Construction guarantees totality.
  return *resolve(t, lead);
}

PriorMap dj_prior() {
  return PriorMap("dj", {{0, kRegulationSeconds, -20, 20, {5, 5}}}, BetaShape{10, 0},
                  BetaShape{0, 10});
}

BandTable default_band_table() {
  return {{{10, 25, 40}, {8, 20, 32}, {6, 15, 25}, {4, 10, 18}, {2, 5, 10}}};
}

void validate_band_table(const BandTable& bands) {
  for (const auto& b : bands)
    if (!(0 < b.t1 && b.t1 < b.t2 && b.t2 < b.t3 && b.t3 <= kDynamicOuterLead))
      throw std::invalid_argument("band thresholds must satisfy 0 < T1 < T2 < T3 <= 50, got (" +
                                  std::to_string(b.t1) + "," + std::to_string(b.t2) + "," +
                                  std::to_string(b.t3) + ")");
}

PriorMap dynamic_prior(const BandTable& bands) {
  validate_band_table(bands);
  std::vector<PriorRegion> regions;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    const int lo = kDynamicIntervalEdges[k];
    const int hi = kDynamicIntervalEdges[k + 1];
    const auto& b = bands[k];
    auto band = [&](int from, int to, BetaShape pos, BetaShape neg) {
      if (from > to) return;
      regions.push_back({lo, hi, from, to, pos});
      regions.push_back({lo, hi, -to, -from, neg});
    };
    regions.push_back({lo, hi, -b.t1, b.t1, shapes::kWhite});
    band(b.t1 + 1, b.t2, shapes::kYellow, shapes::kGreen);
    band(b.t2 + 1, b.t3, shapes::kOrange, shapes::kLightBlue);
    band(b.t3 + 1, kDynamicOuterLead, shapes::kRed, shapes::kBlue);
  }
  return PriorMap("dynamic", std::move(regions), shapes::kRed, shapes::kBlue);
}

namespace {

// Yields (line number, fields) for non-blank, non-comment lines.
template <typename Fn>
void for_each_config_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      fn(csv::split_record(line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, n, e.what());
    }
  }
}

}  // namespace

BandTable parse_band_table(std::istream& in) {
  BandTable bands{};
  std::size_t rows = 0;
  for_each_config_line(in, "band table", [&](const std::vector<std::string>& f) {
    if (f.size() != 3) throw std::invalid_argument("expected T1,T2,T3");
    if (rows >= bands.size()) throw std::invalid_argument("more than five band rows");
    bands[rows++] = {static_cast<int>(csv::to_int(f[0])), static_cast<int>(csv::to_int(f[1])),
                     static_cast<int>(csv::to_int(f[2]))};
  });
  if (rows != bands.size())
    throw ParseError("band table", 0, "expected 5 rows, got " + std::to_string(rows));
  try {
    validate_band_table(bands);
  } catch (const std::invalid_argument& e) {
    throw ParseError("band table", 0, e.what());
  }
  return bands;
}

PriorMap parse_prior_map(std::istream& in, std::string name) {
  std::vector<PriorRegion> regions;
  std::optional<BetaShape> pos;
  std::optional<BetaShape> neg;
  for_each_config_line(in, "prior map", [&](const std::vector<std::string>& f) {
    if (f.size() == 3 && (f[0] == "default_positive" || f[0] == "default_negative")) {
      BetaShape s{csv::to_double(f[1]), csv::to_double(f[2])};
      s.validate();
      (f[0] == "default_positive" ? pos : neg) = s;
      return;
    }
    if (f.size() != 6) throw std::invalid_argument("expected t_lo,t_hi,l_lo,l_hi,alpha,beta");
    PriorRegion r{static_cast<int>(csv::to_int(f[0])), static_cast<int>(csv::to_int(f[1])),
                  static_cast<int>(csv::to_int(f[2])), static_cast<int>(csv::to_int(f[3])),
                  {csv::to_double(f[4]), csv::to_double(f[5])}};
    r.shape.validate();
    regions.push_back(r);
  });
  try {
    return PriorMap(std::move(name), std::move(regions), pos, neg);
  } catch (const std::invalid_argument& e) {
    throw ParseError("prior map", 0, e.what());
  }
}

void write_prior_map(std::ostream& out, const PriorMap& map) {
  out << "# t_lo,t_hi,l_lo,l_hi,alpha,beta  (t in [t_lo,t_hi), lead in [l_lo,l_hi])\n";
  for (const auto& r : map.regions())
    out << r.t_lo << ',' << r.t_hi << ',' << r.lead_lo << ',' << r.lead_hi << ','
        << csv::format_double(r.shape.alpha) << ',' << csv::format_double(r.shape.beta) << '\n';
  if (const auto& p = map.default_positive())
    out << "default_positive," << csv::format_double(p->alpha) << ','
        << csv::format_double(p->beta) << '\n';
  if (const auto& n = map.default_negative())
    out << "default_negative," << csv::format_double(n->alpha) << ','
        << csv::format_double(n->beta) << '\n';
}

}  // namespace winprob
