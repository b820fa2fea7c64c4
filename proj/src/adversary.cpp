#include "qkdsim/adversary.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>
#include <utility>

namespace qkdsim {

namespace {

// Outcome pair (a, b) under the hypothesis kappa = sign * |kappa|.
std::pair<int, int> predict_under(const EveContext& ctx, const HiddenState& hidden, int sign) {
  const Kappa kappa{ctx.kappa_magnitude, sign};
  if (ctx.predictor == EvePredictor::Analytic) return analytic_outcome(hidden, kappa);
  const TrajectoryResult traj = integrate_pair(hidden, kappa, ctx.physics, ctx.integrator);
  return {traj.outcome_alice, traj.outcome_bob};
}

}  // namespace

EvePrediction eve_predict_key_round(const EveContext& ctx, std::uint64_t round_index,
                                    const HiddenState& hidden, int actual_kappa_sign,
                                    RandomStream& rng) {
  EvePrediction pred;
  pred.round_index = round_index;
  if (!ctx.knowledge.knows_hidden) {
    // Without the hidden state Eve is reduced to a blind coin flip.
    const int guess = rng.next_sign();
    pred.predicted_alice_bit = guess > 0 ? 1 : 0;
    pred.predicted_bob_bit = pred.predicted_alice_bit;
    pred.is_forced = false;
    return pred;
  }

  const auto [a_plus, b_plus] = predict_under(ctx, hidden, +1);
  const auto [a_minus, b_minus] = predict_under(ctx, hidden, -1);
  pred.is_forced = a_plus == a_minus;

  int sign_hypothesis;
  if (pred.is_forced) {
    sign_hypothesis = +1;  // both branches give the same bit, no draw consumed
  } else if (ctx.knowledge.knows_kappa_sign) {
    sign_hypothesis = actual_kappa_sign;
  } else {
    sign_hypothesis = rng.next_sign();
  }

  const int a = sign_hypothesis > 0 ? a_plus : a_minus;
  const int b = sign_hypothesis > 0 ? b_plus : b_minus;
  pred.predicted_alice_bit = a > 0 ? 1 : 0;
  // Bob's sifted bit undoes his kappa-sign flip, so under a self-consistent
  // hypothesis it always coincides with Alice's.
  const int bob_own = b > 0 ? 1 : 0;
  pred.predicted_bob_bit = sign_hypothesis > 0 ? 1 - bob_own : bob_own;
  return pred;
}

EveAccuracy eve_accuracy(const std::vector<EvePrediction>& predictions, const SiftedKey& key) {
  if (key.alice_bits.size() != key.round_indices.size())
    throw LengthMismatch("eve_accuracy: sifted key bits and indices differ in length");
  std::unordered_map<std::uint64_t, std::uint8_t> key_bit;
  key_bit.reserve(key.round_indices.size());
  for (std::size_t i = 0; i < key.round_indices.size(); ++i)
    key_bit.emplace(key.round_indices[i], key.alice_bits[i]);

  EveAccuracy acc;
  for (const EvePrediction& pred : predictions) {
    const auto it = key_bit.find(pred.round_index);
    if (it == key_bit.end()) continue;
    const bool correct = pred.predicted_alice_bit == it->second;
    ++acc.n;
    acc.n_correct += correct;
    if (pred.is_forced) {
      ++acc.n_forced;
      acc.n_forced_correct += correct;
    }
  }
  if (acc.n == 0)
    throw InsufficientData("eve_accuracy: no prediction matches a sifted key round");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  acc.accuracy = static_cast<double>(acc.n_correct) / static_cast<double>(acc.n);
  acc.accuracy_ci = binomial_ci(acc.n_correct, acc.n, 0.95);
  acc.forced_fraction = static_cast<double>(acc.n_forced) / static_cast<double>(acc.n);
  acc.forced_accuracy =
      acc.n_forced > 0
          ? static_cast<double>(acc.n_forced_correct) / static_cast<double>(acc.n_forced)
          : nan;
  const std::size_t n_unforced = acc.n - acc.n_forced;
  acc.unforced_accuracy =
      n_unforced > 0 ? static_cast<double>(acc.n_correct - acc.n_forced_correct) /
                           static_cast<double>(n_unforced)
                     : nan;
  return acc;
}

double analytic_eve_accuracy(double kappa_magnitude) {
  if (!(kappa_magnitude > 0.0))
    throw ConfigError("analytic_eve_accuracy requires |kappa| > 0");
  return 0.5 + std::atan(1.0 / kappa_magnitude) / std::numbers::pi;
}

double analytic_forced_fraction(double kappa_magnitude) {
  if (!(kappa_magnitude > 0.0))
    throw ConfigError("analytic_forced_fraction requires |kappa| > 0");
  return 2.0 * std::atan(1.0 / kappa_magnitude) / std::numbers::pi;
}

InterceptOutcome intercept_resend_round(double alpha, double beta, RandomStream& rng) {
  InterceptOutcome out;
  out.eve = rng.next_sign();
  // Particle 1 collapses opposite Eve's result; Bob remeasures her eigenstate.
  out.alice = rng.next_bernoulli(0.5 * (1.0 - out.eve * std::cos(alpha))) ? +1 : -1;
  out.bob = rng.next_bernoulli(0.5 * (1.0 + out.eve * std::cos(beta))) ? +1 : -1;
  return out;
}

double mutual_information(const std::vector<std::uint8_t>& guesses,
                          const std::vector<std::uint8_t>& key) {
  if (guesses.size() != key.size())
    throw LengthMismatch("mutual_information: input lengths differ, " +
                         std::to_string(guesses.size()) + " vs " + std::to_string(key.size()));
  if (guesses.empty()) throw InsufficientData("mutual_information of empty inputs");

  double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  const double n = static_cast<double>(guesses.size());
  for (std::size_t i = 0; i < guesses.size(); ++i)
    joint[guesses[i] & 1][key[i] & 1] += 1.0 / n;

  const double pg[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  const double pk[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double mi = 0.0;
  for (int g = 0; g < 2; ++g)
    for (int k = 0; k < 2; ++k)
      if (joint[g][k] > 0.0) mi += joint[g][k] * std::log2(joint[g][k] / (pg[g] * pk[k]));
  return mi;
}

}  // namespace qkdsim
