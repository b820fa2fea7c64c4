#include "qkdsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qkdsim {

namespace {

// Acklam's rational approximation of the standard normal quantile.
double acklam(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("inverse_normal_cdf requires p in (0, 1), got " + std::to_string(p));
  double x = acklam(p);
  // One Halley step against the exact CDF lifts the ~1e-9 rational
  // approximation to machine precision.
  const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

ConfidenceInterval binomial_ci(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InsufficientData("binomial_ci requires at least one trial");
  if (successes > trials)
    throw ConfigError("binomial_ci: successes " + std::to_string(successes) +
                      " exceed trials " + std::to_string(trials));
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ConfigError("binomial_ci: confidence must lie in (0, 1)");

  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z = inverse_normal_cdf(0.5 * (1.0 + confidence));
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // At phat = 0 (or 1) the bound touches the endpoint exactly, but the
  // subtraction leaves sub-ulp residue; pin those cases and clamp the rest.
  const double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

double qber(const std::vector<std::uint8_t>& alice_bits,
            const std::vector<std::uint8_t>& bob_bits) {
  if (alice_bits.size() != bob_bits.size())
    throw LengthMismatch("qber: key lengths differ, " + std::to_string(alice_bits.size()) +
                         " vs " + std::to_string(bob_bits.size()));
  if (alice_bits.empty()) throw InsufficientData("qber of an empty key");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < alice_bits.size(); ++i)
    mismatches += alice_bits[i] != bob_bits[i];
  return static_cast<double>(mismatches) / static_cast<double>(alice_bits.size());
}

}  // namespace qkdsim
