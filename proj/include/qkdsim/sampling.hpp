#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qkdsim/dynamics.hpp"

namespace qkdsim {

// Name of the generator family, recorded in session reports.
inline constexpr const char* kGeneratorName = "philox4x32-10";

// Role tags separating the independent random substreams of a session.
enum class StreamLabel : std::uint32_t {
  KeyRoundPhysics = 0,   // initial hidden states of key rounds
  TestRoundSampling = 1, // round planning and test-round outcome draws
  BobKappaSign = 2,      // Bob's private kappa sign flips
  EveRandomness = 3,     // eavesdropper's internal coin flips
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  StreamLabel label = StreamLabel::KeyRoundPhysics;
};

namespace detail {

// Philox4x32-10 block function (counter-based, 128-bit counter + 64-bit key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// SplitMix64 step: advances the state and returns a well-mixed 64-bit word.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace detail

// One deterministic random substream, identified by (master_seed, label,
// round_index, phase). Streams are counter-based: creating or consuming them
// in any order, on any thread, yields the same values. The phase partitions
// a round's draws into non-overlapping segments (planning vs. execution).
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, StreamLabel label,
               std::uint64_t round_index, std::uint32_t phase = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53-bit resolution.
  double next_double();
  // Standard normal via Box-Muller (second value of each pair is cached).
  double next_gaussian();
  // Fair +1 / -1.
  int next_sign();
  bool next_bernoulli(double p);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t round_index_;
  std::uint64_t block_;  // low 48 bits count blocks, high 16 carry the phase
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

RandomStream substream(const SeedSpec& seed, std::uint64_t round_index,
                       std::uint32_t phase = 0);

// Draws n initial hidden states from quantum equilibrium: z1, z2 independent
// Gaussians with standard deviation width_scale * sigma0. Sample i comes from
// its own substream, so generation order and parallelism do not matter.
std::vector<HiddenState> sample_equilibrium(std::size_t n,
                                            const PhysicalParams& params,
                                            const SeedSpec& seed,
                                            double width_scale = 1.0);

}  // namespace qkdsim
