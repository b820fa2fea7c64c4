#include "qkdsim/sampling.hpp"

#include <cmath>
#include <numbers>

namespace qkdsim {

namespace detail {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  // Constants and round structure follow the reference Philox4x32-10.
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * counter[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * counter[2];
    counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

RandomStream::RandomStream(std::uint64_t master_seed, StreamLabel label,
                           std::uint64_t round_index, std::uint32_t phase)
    : round_index_(round_index),
      block_(static_cast<std::uint64_t>(phase) << 48) {
  // The label selects an independent Philox key; the round index and phase
  // live in the counter, so no stream ever shares a (key, counter) pair.
  std::uint64_t state = master_seed;
  const std::uint64_t seeded = detail::splitmix64(state);
  state = seeded ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(label) + 1));
  const std::uint64_t key64 = detail::splitmix64(state);
  key_ = {static_cast<std::uint32_t>(key64), static_cast<std::uint32_t>(key64 >> 32)};
}

void RandomStream::refill() {
  buffer_ = detail::philox4x32({static_cast<std::uint32_t>(block_),
                                static_cast<std::uint32_t>(block_ >> 32),
                                static_cast<std::uint32_t>(round_index_),
                                static_cast<std::uint32_t>(round_index_ >> 32)},
                               key_);
  ++block_;
  buffer_pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is always finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(theta);
  has_cached_gaussian_ = true;
  return r * std::cos(theta);
}

int RandomStream::next_sign() { return (next_u32() & 1u) ? +1 : -1; }

bool RandomStream::next_bernoulli(double p) { return next_double() < p; }

RandomStream substream(const SeedSpec& seed, std::uint64_t round_index,
                       std::uint32_t phase) {
  return RandomStream(seed.master_seed, seed.label, round_index, phase);
}

std::vector<HiddenState> sample_equilibrium(std::size_t n,
                                            const PhysicalParams& params,
                                            const SeedSpec& seed,
                                            double width_scale) {
  params.validate();
  if (n < 1) throw ConfigError("sample_equilibrium: n must be >= 1");
  if (!(width_scale > 0.0))
    throw ConfigError("equilibrium width scale must be positive");
  const double sigma = width_scale * params.halfwidth;
  std::vector<HiddenState> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng = substream(seed, i);
    states[i].z1 = sigma * rng.next_gaussian();
    states[i].z2 = sigma * rng.next_gaussian();
  }
  return states;
}

}  // namespace qkdsim
