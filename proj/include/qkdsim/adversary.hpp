#pragma once

#include <cstdint>
#include <vector>

#include "qkdsim/protocol.hpp"
#include "qkdsim/stats.hpp"

namespace qkdsim {

// What Eve is granted. The worst-case threat model reads the hidden state
// exactly but never learns Bob's secret kappa sign.
struct EveKnowledge {
  bool knows_hidden = true;
  bool knows_kappa_sign = false;
  bool knows_kappa_magnitude = true;
};

// Eve may predict via the closed-form outcome map or by re-integrating the
// dynamics under both kappa hypotheses. Equivalent on committed rounds; the
// integrating predictor is three orders of magnitude slower.
enum class EvePredictor { Analytic, Integrate };

struct EveContext {
  double kappa_magnitude = 100.0;
  EveKnowledge knowledge{};
  EvePredictor predictor = EvePredictor::Analytic;
  PhysicalParams physics{};
  IntegratorConfig integrator{};
};

struct EvePrediction {
  std::uint64_t round_index = 0;
  int predicted_alice_bit = 0;
  int predicted_bob_bit = 0;
  // Both kappa hypotheses imply the same Alice bit (exactly when
  // |kappa z2| < |z1|); Eve's prediction is then deterministic.
  bool is_forced = false;
};

// Evaluates the outcome map under kappa = +|kappa| and -|kappa|. Where the
// hypotheses agree she outputs the bit; where they differ she guesses from
// her own stream, unless she knows the sign and can pick the exact branch.
EvePrediction eve_predict_key_round(const EveContext& ctx,
                                    std::uint64_t round_index,
                                    const HiddenState& hidden,
                                    int actual_kappa_sign, RandomStream& rng);

struct EveAccuracy {
  std::size_t n = 0;
  std::size_t n_correct = 0;
  std::size_t n_forced = 0;
  std::size_t n_forced_correct = 0;
  double accuracy = 0.0;
  ConfidenceInterval accuracy_ci{};
  double forced_fraction = 0.0;
  double forced_accuracy = 0.0;    // NaN when no forced rounds
  double unforced_accuracy = 0.0;  // NaN when no unforced rounds
};

// Scores predicted Alice bits against the sifted key, split into forced and
// unforced rounds. Predictions and key entries are matched by round index.
EveAccuracy eve_accuracy(const std::vector<EvePrediction>& predictions,
                         const SiftedKey& key);

// Expected threat-model accuracy 1/2 + arctan(1/|kappa|)/pi, from the Cauchy
// distribution of z2/z1 for independent equal-variance Gaussians.
double analytic_eve_accuracy(double kappa_magnitude);

// Expected fraction of forced rounds, (2/pi) arctan(1/|kappa|).
double analytic_forced_fraction(double kappa_magnitude);

struct InterceptOutcome {
  int alice = 0;
  int bob = 0;
  int eve = 0;  // Eve's z-basis result on the intercepted particle
};

// Intercept-resend on particle 2: Eve measures z (uniform e), particle 1
// collapses to -e, Bob remeasures the resent e-eigenstate. Outcomes follow
// P(a) = (1 - a e cos alpha)/2 and P(b) = (1 + b e cos beta)/2.
InterceptOutcome intercept_resend_round(double alpha, double beta,
                                        RandomStream& rng);

// Plug-in mutual information estimate, in bits, from the empirical 2x2 joint
// table. Throws LengthMismatch on unequal and InsufficientData on empty input.
double mutual_information(const std::vector<std::uint8_t>& guesses,
                          const std::vector<std::uint8_t>& key);

}  // namespace qkdsim
