#include "winprob/normal.hpp"

#include <cmath>
#include <numbers>

namespace winprob {

namespace {

constexpr double kTailCut = -30.0;

// 1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8: Phi(x) ~ phi(x)/(-x) * series, x << 0.
double tail_series(double x) {
  const double r = 1.0 / (x * x);
  return 1.0 + r * (-1.0 + r * (3.0 + r * (-15.0 + r * 105.0)));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double log_normal_cdf(double x) {
  if (x > kTailCut) return std::log(normal_cdf(x));
  return -0.5 * x * x - std::log(std::sqrt(2.0 * std::numbers::pi)) - std::log(-x) +
         std::log(tail_series(x));
}

double inverse_mills(double x) {
  if (x > kTailCut) return normal_pdf(x) / normal_cdf(x);
  return -x / tail_series(x);
}

}  // namespace winprob
