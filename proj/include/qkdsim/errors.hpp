#pragma once

#include <stdexcept>
#include <string>

namespace qkdsim {

// Invalid or out-of-bounds configuration, including malformed config files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// z1 - kappa*z2 == 0: the outcome is undefined on this measure-zero set.
// Callers resample instead of breaking the tie.
struct TieError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A key round failed the outcome-commitment criterion repeatedly; the
// integrator configuration does not separate outcomes for these parameters.
struct CommitmentFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too few test rounds in some setting pair to estimate a correlator.
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bit strings of unequal length passed to a pairwise statistic.
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output file could not be opened or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qkdsim
