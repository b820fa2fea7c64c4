#include "qkdsim/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qkdsim {

namespace {
constexpr int kMaxKeyRoundAttempts = 10;
constexpr double kPi = std::numbers::pi;
}  // namespace

double setting_angle(SettingKind kind) {
  switch (kind) {
    case SettingKind::A: return 0.0;
    case SettingKind::APrime: return 0.5 * kPi;
    case SettingKind::B: return 0.25 * kPi;
    case SettingKind::BPrime: return 0.75 * kPi;
    case SettingKind::C: return 0.0;
    case SettingKind::MinusC: return kPi;  // flipped z axis
  }
  return 0.0;
}

const char* setting_name(SettingKind kind) {
  switch (kind) {
    case SettingKind::A: return "A";
    case SettingKind::APrime: return "A'";
    case SettingKind::B: return "B";
    case SettingKind::BPrime: return "B'";
    case SettingKind::C: return "C";
    case SettingKind::MinusC: return "-C";
  }
  return "?";
}

void SessionConfig::validate() const {
  if (n_rounds < 1) throw ConfigError("session.n_rounds must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("session.test_fraction must lie in (0, 1), got " +
                      std::to_string(test_fraction));
  if (!(kappa_magnitude > 0.0) || !std::isfinite(kappa_magnitude))
    throw ConfigError("session.kappa_magnitude must be positive, got " +
                      std::to_string(kappa_magnitude));
  if (!(equilibrium_width_scale > 0.0) || !std::isfinite(equilibrium_width_scale))
    throw ConfigError("physics.equilibrium_width_scale must be positive");
  physics.validate();
  integrator.validate();
}

std::vector<RoundPlan> plan_session(const SessionConfig& cfg) {
  cfg.validate();
  std::vector<RoundPlan> plans(cfg.n_rounds);
  for (std::uint64_t i = 0; i < cfg.n_rounds; ++i) {
    RoundPlan& plan = plans[i];
    plan.round_index = i;
    RandomStream rng = substream({cfg.seed, StreamLabel::TestRoundSampling}, i, /*phase=*/0);
    if (rng.next_bernoulli(cfg.test_fraction)) {
      plan.type = RoundType::Test;
      plan.alice_setting = rng.next_bernoulli(0.5) ? SettingKind::A : SettingKind::APrime;
      plan.bob_setting = rng.next_bernoulli(0.5) ? SettingKind::B : SettingKind::BPrime;
      plan.kappa_sign = 0;
    } else {
      plan.type = RoundType::Key;
      plan.alice_setting = SettingKind::C;
      if (cfg.fix_kappa_sign) {
        plan.kappa_sign = +1;
      } else {
        plan.kappa_sign = substream({cfg.seed, StreamLabel::BobKappaSign}, i).next_sign();
      }
      plan.bob_setting = plan.kappa_sign > 0 ? SettingKind::C : SettingKind::MinusC;
    }
  }
  return plans;
}

RoundRecord run_key_round(const RoundPlan& plan, const SessionConfig& cfg) {
  if (plan.type != RoundType::Key)
    throw ConfigError("run_key_round: plan is not a key round");
  const Kappa kappa{cfg.kappa_magnitude, plan.kappa_sign};
  const double sigma = cfg.equilibrium_width_scale * cfg.physics.halfwidth;

  RandomStream rng = substream({cfg.seed, StreamLabel::KeyRoundPhysics}, plan.round_index);
  for (int attempt = 0; attempt < kMaxKeyRoundAttempts; ++attempt) {
    HiddenState hidden{sigma * rng.next_gaussian(), sigma * rng.next_gaussian()};
    if (hidden.z1 - kappa.value() * hidden.z2 == 0.0) continue;  // tie, resample
    TrajectoryResult traj = integrate_pair(hidden, kappa, cfg.physics, cfg.integrator);
    if (!traj.committed) continue;
    RoundRecord rec;
    rec.round_index = plan.round_index;
    rec.type = RoundType::Key;
    rec.alice_setting = plan.alice_setting;
    rec.bob_setting = plan.bob_setting;
    rec.kappa_sign = plan.kappa_sign;
    rec.hidden = hidden;
    rec.outcome_alice = traj.outcome_alice;
    rec.outcome_bob = traj.outcome_bob;
    rec.committed = true;
    return rec;
  }
  throw CommitmentFailure("key round " + std::to_string(plan.round_index) + " failed to commit after " +
                          std::to_string(kMaxKeyRoundAttempts) +
                          " attempts; integrator config cannot separate outcomes");
}

RoundRecord run_test_round(const RoundPlan& plan, RandomStream& rng) {
  if (plan.type != RoundType::Test)
    throw ConfigError("run_test_round: plan is not a test round");
  const double delta = setting_angle(plan.alice_setting) - setting_angle(plan.bob_setting);
  // Singlet statistics: P(a = b) = (1 - cos(delta)) / 2, both margins fair.
  const bool same = rng.next_bernoulli(0.5 * (1.0 - std::cos(delta)));
  const int a = rng.next_sign();
  RoundRecord rec;
  rec.round_index = plan.round_index;
  rec.type = RoundType::Test;
  rec.alice_setting = plan.alice_setting;
  rec.bob_setting = plan.bob_setting;
  rec.outcome_alice = a;
  rec.outcome_bob = same ? a : -a;
  rec.committed = true;
  return rec;
}

RoundRecord run_test_round(const RoundPlan& plan, const SessionConfig& cfg) {
  RandomStream rng =
      substream({cfg.seed, StreamLabel::TestRoundSampling}, plan.round_index, /*phase=*/1);
  return run_test_round(plan, rng);
}

SiftedKey sift(const std::vector<RoundRecord>& records) {
  SiftedKey key;
  for (const RoundRecord& rec : records) {
    if (rec.type != RoundType::Key || !rec.committed) continue;
    const std::uint8_t alice_bit = rec.outcome_alice > 0 ? 1 : 0;
    const std::uint8_t bob_own = rec.outcome_bob > 0 ? 1 : 0;
    // Parallel fields anticorrelate the outcomes, so Bob flips on kappa > 0.
    const std::uint8_t bob_bit = rec.kappa_sign > 0 ? (1 - bob_own) : bob_own;
    key.alice_bits.push_back(alice_bit);
    key.bob_bits.push_back(bob_bit);
    key.round_indices.push_back(rec.round_index);
  }
  return key;
}

ChshEstimate chsh(const std::vector<RoundRecord>& records) {
  // Buckets: (A,B), (A,B'), (A',B), (A',B').
  std::array<double, 4> sum{};
  std::array<std::uint64_t, 4> count{};
  for (const RoundRecord& rec : records) {
    if (rec.type != RoundType::Test) continue;
    const int row = rec.alice_setting == SettingKind::A ? 0 : 1;
    const int col = rec.bob_setting == SettingKind::B ? 0 : 1;
    const int idx = 2 * row + col;
    sum[idx] += rec.outcome_alice * rec.outcome_bob;
    ++count[idx];
  }
  ChshEstimate est;
  double variance = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (count[k] < 100)
      throw InsufficientData("setting pair " + std::to_string(k) + " has " +
                             std::to_string(count[k]) + " rounds, need >= 100");
    est.correlators[k] = sum[k] / static_cast<double>(count[k]);
    est.counts[k] = count[k];
    variance += (1.0 - est.correlators[k] * est.correlators[k]) / static_cast<double>(count[k]);
  }
  est.s = std::fabs(est.correlators[0] - est.correlators[1] + est.correlators[2] +
                    est.correlators[3]);
  est.stderr_s = std::sqrt(variance);
  return est;
}

}  // namespace qkdsim
