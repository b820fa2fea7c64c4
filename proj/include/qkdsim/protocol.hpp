#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qkdsim/dynamics.hpp"
#include "qkdsim/sampling.hpp"

namespace qkdsim {

enum class RoundType { Test, Key };

// Device settings. A, A', B, B' are the Bell-test angles in the x-z plane;
// C is the shared z-axis key setting and -C is Bob's flipped field (kappa<0).
enum class SettingKind { A, APrime, B, BPrime, C, MinusC };

// Bell-test angles chosen to maximize the CHSH value.
double setting_angle(SettingKind kind);
const char* setting_name(SettingKind kind);

struct RoundPlan {
  std::uint64_t round_index = 0;
  RoundType type = RoundType::Key;
  SettingKind alice_setting = SettingKind::C;
  SettingKind bob_setting = SettingKind::C;
  int kappa_sign = 0;  // +1/-1 for key rounds, 0 for test rounds
};

struct RoundRecord {
  std::uint64_t round_index = 0;
  RoundType type = RoundType::Key;
  SettingKind alice_setting = SettingKind::C;
  SettingKind bob_setting = SettingKind::C;
  int kappa_sign = 0;                // key rounds only
  std::optional<HiddenState> hidden; // key rounds only (absent for QM-sampled)
  int outcome_alice = 0;
  int outcome_bob = 0;
  bool committed = false;
};

struct SessionConfig {
  std::uint64_t n_rounds = 10000;
  double test_fraction = 0.5;
  double kappa_magnitude = 100.0;
  std::uint64_t seed = 1;
  PhysicalParams physics{};
  IntegratorConfig integrator{};
  // Multiplier on sigma0 for the equilibrium sampling width, for
  // implementations preferring a different half-width convention.
  double equilibrium_width_scale = 1.0;
  // Degenerate mode: Bob never flips, every key round has kappa_sign = +1.
  bool fix_kappa_sign = false;

  void validate() const;
};

struct SiftedKey {
  std::vector<std::uint8_t> alice_bits;
  std::vector<std::uint8_t> bob_bits;
  std::vector<std::uint64_t> round_indices;
};

// Marks each round test/key, draws test settings uniformly from {A,A'}x{B,B'}
// and Bob's kappa sign from his private stream. Every decision comes from the
// round's own substream, so the plan is reproducible and order-independent.
std::vector<RoundPlan> plan_session(const SessionConfig& cfg);

// Samples a hidden state, integrates the pair dynamics with
// kappa = kappa_sign * kappa_magnitude and records the outcomes. Ties and
// uncommitted trajectories are resampled; after 10 failed attempts throws
// CommitmentFailure (the integrator config cannot commit outcomes).
RoundRecord run_key_round(const RoundPlan& plan, const SessionConfig& cfg);

// Draws a joint outcome from the singlet distribution
// P(a,b) = (1 - a b cos(alpha - beta)) / 4 for the planned test angles.
RoundRecord run_test_round(const RoundPlan& plan, RandomStream& rng);
RoundRecord run_test_round(const RoundPlan& plan, const SessionConfig& cfg);

// Keeps committed key rounds. Alice's bit maps +1 -> 1; Bob flips his own bit
// on kappa > 0 rounds so both ends hold Alice's string.
SiftedKey sift(const std::vector<RoundRecord>& records);

struct ChshEstimate {
  double s = 0.0;
  double stderr_s = 0.0;
  // Correlators and counts for (A,B), (A,B'), (A',B), (A',B').
  std::array<double, 4> correlators{};
  std::array<std::uint64_t, 4> counts{};
};

// S = |E(A,B) - E(A,B') + E(A',B) + E(A',B')| with propagated binomial
// standard errors. Throws InsufficientData if any pair has < 100 rounds.
ChshEstimate chsh(const std::vector<RoundRecord>& records);

}  // namespace qkdsim
