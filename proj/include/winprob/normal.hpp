#pragma once

namespace winprob {

/// Standard normal CDF via the C library's complementary error function,
/// Phi(x) = erfc(-x / sqrt(2)) / 2, accurate to a few ulps across the range.
double normal_cdf(double x);
double normal_pdf(double x);

/// log Phi(x), finite for all finite x (asymptotic expansion below -30).
double log_normal_cdf(double x);

/// phi(x) / Phi(x), finite for all finite x.
double inverse_mills(double x);

}  // namespace winprob
