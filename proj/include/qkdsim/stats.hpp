#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qkdsim/errors.hpp"

namespace qkdsim {

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// Quantile function of the standard normal: Acklam's rational approximation
// polished by one Halley step, accurate to machine precision.
double inverse_normal_cdf(double p);

// Wilson score interval for a binomial proportion.
ConfidenceInterval binomial_ci(std::size_t successes, std::size_t trials,
                               double confidence = 0.95);

// Disagreement fraction between two equal-length bit strings.
double qber(const std::vector<std::uint8_t>& alice_bits,
            const std::vector<std::uint8_t>& bob_bits);

}  // namespace qkdsim
