#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qkdsim/adversary.hpp"

using namespace qkdsim;

namespace {

EveContext threat_model(double magnitude) {
  EveContext ctx;
  ctx.kappa_magnitude = magnitude;
  return ctx;  // knows the hidden state, not the kappa sign
}

}  // namespace

TEST_CASE("forced and unforced rounds split on |kappa z2| vs |z1|") {
  const EveContext ctx = threat_model(100.0);
  RandomStream rng(1, StreamLabel::EveRandomness, 0);

  // |100 * 0.8| > |0.05|: hypotheses disagree on Alice, agree on raw Bob
  {
    const auto [a_plus, b_plus] = analytic_outcome({0.05, 0.8}, {100.0, +1});
    const auto [a_minus, b_minus] = analytic_outcome({0.05, 0.8}, {100.0, -1});
    CHECK(a_plus == -a_minus);
    CHECK(b_plus == b_minus);
    const EvePrediction pred = eve_predict_key_round(ctx, 0, {0.05, 0.8}, +1, rng);
    CHECK_FALSE(pred.is_forced);
  }

  // |100 * 0.004| = 0.4 < 0.9: both hypotheses give Alice's +1
  {
    const auto [a_plus, b_plus] = analytic_outcome({0.9, 0.004}, {100.0, +1});
    const auto [a_minus, b_minus] = analytic_outcome({0.9, 0.004}, {100.0, -1});
    CHECK(a_plus == a_minus);
    CHECK(a_plus == +1);
    CHECK(b_plus == -b_minus);
    const EvePrediction pred = eve_predict_key_round(ctx, 1, {0.9, 0.004}, -1, rng);
    CHECK(pred.is_forced);
    CHECK(pred.predicted_alice_bit == 1);
  }
}

TEST_CASE("knowing the kappa sign makes every committed prediction exact") {
  EveContext ctx = threat_model(100.0);
  ctx.knowledge.knows_kappa_sign = true;
  RandomStream hidden_rng(77, StreamLabel::KeyRoundPhysics, 0);
  RandomStream eve_rng(77, StreamLabel::EveRandomness, 0);
  for (int i = 0; i < 500; ++i) {
    const HiddenState h{hidden_rng.next_gaussian(), hidden_rng.next_gaussian()};
    const int sign = (i % 2 == 0) ? +1 : -1;
    if (h.z1 - sign * ctx.kappa_magnitude * h.z2 == 0.0) continue;
    const auto [a, b] = analytic_outcome(h, {ctx.kappa_magnitude, sign});
    const EvePrediction pred = eve_predict_key_round(ctx, i, h, sign, eve_rng);
    CHECK(pred.predicted_alice_bit == (a > 0 ? 1 : 0));
    (void)b;
  }
}

TEST_CASE("a blind Eve carries no information about the hidden state") {
  EveContext ctx = threat_model(100.0);
  ctx.knowledge.knows_hidden = false;
  RandomStream rng(9, StreamLabel::EveRandomness, 0);
  const EvePrediction p = eve_predict_key_round(ctx, 0, {0.9, 0.004}, +1, rng);
  CHECK_FALSE(p.is_forced);  // nothing is forced without the hidden state
}

TEST_CASE("integrating predictor agrees with the closed-form predictor") {
  EveContext analytic = threat_model(1.0);
  EveContext integrating = threat_model(1.0);
  integrating.predictor = EvePredictor::Integrate;
  RandomStream hidden_rng(4, StreamLabel::KeyRoundPhysics, 0);
  for (int i = 0; i < 50; ++i) {
    const HiddenState h{hidden_rng.next_gaussian(), hidden_rng.next_gaussian()};
    // fresh identically-seeded streams so any branch guesses coincide too
    RandomStream rng_a(1000 + i, StreamLabel::EveRandomness, 0);
    RandomStream rng_b(1000 + i, StreamLabel::EveRandomness, 0);
    const EvePrediction pa = eve_predict_key_round(analytic, i, h, +1, rng_a);
    const EvePrediction pb = eve_predict_key_round(integrating, i, h, +1, rng_b);
    CHECK(pa.predicted_alice_bit == pb.predicted_alice_bit);
    CHECK(pa.is_forced == pb.is_forced);
  }
}

TEST_CASE("accuracy scoring splits forced and unforced rounds") {
  SiftedKey key;
  key.alice_bits = {1, 0, 1, 0};
  key.bob_bits = key.alice_bits;
  key.round_indices = {2, 5, 9, 14};

  std::vector<EvePrediction> preds(4);
  preds[0] = {2, 1, 1, true};    // forced, correct
  preds[1] = {5, 1, 1, false};   // unforced, wrong
  preds[2] = {9, 1, 1, false};   // unforced, correct
  preds[3] = {14, 0, 0, false};  // unforced, correct

  const EveAccuracy acc = eve_accuracy(preds, key);
  CHECK(acc.n == 4);
  CHECK(acc.n_correct == 3);
  CHECK(acc.accuracy == doctest::Approx(0.75));
  CHECK(acc.n_forced == 1);
  CHECK(acc.forced_fraction == doctest::Approx(0.25));
  CHECK(acc.forced_accuracy == doctest::Approx(1.0));
  CHECK(acc.unforced_accuracy == doctest::Approx(2.0 / 3.0));
  CHECK(acc.accuracy_ci.lower <= acc.accuracy);
  CHECK(acc.accuracy_ci.upper >= acc.accuracy);

  // predictions with no matching sifted round are ignored
  preds.push_back({99, 1, 1, false});
  CHECK(eve_accuracy(preds, key).n == 4);

  CHECK_THROWS_AS(eve_accuracy({{1234, 1, 1, false}}, key), InsufficientData);
}

TEST_CASE("analytic accuracy and forced-fraction formulas") {
  // frozen from tests/oracles/stats_oracle.py
  CHECK(analytic_eve_accuracy(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(analytic_eve_accuracy(10.0) == doctest::Approx(0.53172551743055357).epsilon(1e-14));
  CHECK(analytic_eve_accuracy(100.0) == doctest::Approx(0.50318299276490826).epsilon(1e-14));
  CHECK(analytic_eve_accuracy(1000.0) == doctest::Approx(0.50031830978008056).epsilon(1e-14));
  CHECK(analytic_forced_fraction(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(analytic_forced_fraction(100.0) == doctest::Approx(0.0063659855298165103).epsilon(1e-14));
  CHECK(analytic_eve_accuracy(1e12) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK_THROWS_AS(analytic_eve_accuracy(0.0), ConfigError);
  CHECK_THROWS_AS(analytic_forced_fraction(-2.0), ConfigError);
}

TEST_CASE("forced fraction formula matches brute-force sign sampling") {
  RandomStream rng(31337, StreamLabel::KeyRoundPhysics, 0);
  const int n = 100000;
  for (double magnitude : {1.0, 10.0}) {
    int forced = 0;
    RandomStream local = rng;  // same draws for both magnitudes
    for (int i = 0; i < n; ++i) {
      const double z1 = local.next_gaussian();
      const double z2 = local.next_gaussian();
      forced += std::fabs(z1) > magnitude * std::fabs(z2);
    }
    const double expected = analytic_forced_fraction(magnitude);
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::fabs(forced / static_cast<double>(n) - expected) < 3.0 * sigma);
  }
}

TEST_CASE("z-basis intercept is invisible at z-aligned settings") {
  RandomStream rng(3, StreamLabel::EveRandomness, 0);
  for (int i = 0; i < 2000; ++i) {
    const InterceptOutcome out = intercept_resend_round(0.0, 0.0, rng);
    CHECK(out.alice == -out.bob);
    CHECK(out.alice == -out.eve);
  }
}

TEST_CASE("intercepted correlator is -cos(alpha)cos(beta)") {
  RandomStream rng(6, StreamLabel::EveRandomness, 0);
  const double alpha = 0.6, beta = 1.1;
  const int n = 10000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const InterceptOutcome out = intercept_resend_round(alpha, beta, rng);
    sum += out.alice * out.bob;
  }
  const double expected = -std::cos(alpha) * std::cos(beta);
  const double sigma = std::sqrt((1.0 - expected * expected) / n);
  CHECK(std::fabs(sum / n - expected) < 3.0 * sigma);
}

TEST_CASE("intercepted sessions cap the CHSH value at sqrt(2)") {
  RandomStream rng(8, StreamLabel::EveRandomness, 0);
  std::vector<RoundRecord> records;
  const SettingKind alices[] = {SettingKind::A, SettingKind::APrime};
  const SettingKind bobs[] = {SettingKind::B, SettingKind::BPrime};
  std::uint64_t idx = 0;
  for (SettingKind a : alices)
    for (SettingKind b : bobs)
      for (int i = 0; i < 10000; ++i) {
        const InterceptOutcome out =
            intercept_resend_round(setting_angle(a), setting_angle(b), rng);
        RoundRecord rec;
        rec.round_index = idx++;
        rec.type = RoundType::Test;
        rec.alice_setting = a;
        rec.bob_setting = b;
        rec.outcome_alice = out.alice;
        rec.outcome_bob = out.bob;
        rec.committed = true;
        records.push_back(rec);
      }
  const ChshEstimate est = chsh(records);
  CHECK(std::fabs(est.s - std::numbers::sqrt2) < 3.0 * est.stderr_s);
  CHECK(est.s < 2.0);
}

TEST_CASE("mutual information of matched, independent and fixed-table strings") {
  // guesses == key on a balanced string: exactly one bit
  std::vector<std::uint8_t> balanced;
  for (int i = 0; i < 1000; ++i) balanced.push_back(i % 2);
  CHECK(mutual_information(balanced, balanced) == doctest::Approx(1.0).epsilon(1e-12));

  // independent uniform strings: plug-in MI collapses with n
  RandomStream rng(12, StreamLabel::EveRandomness, 0);
  std::vector<std::uint8_t> a(100000), b(100000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.next_sign() > 0;
    b[i] = rng.next_sign() > 0;
  }
  CHECK(mutual_information(a, b) < 0.01);

  // joint table [[0.4, 0.1], [0.1, 0.4]], frozen from the oracle script
  std::vector<std::uint8_t> g, k;
  const int counts[2][2] = {{400, 100}, {100, 400}};
  for (int gg = 0; gg < 2; ++gg)
    for (int kk = 0; kk < 2; ++kk)
      for (int c = 0; c < counts[gg][kk]; ++c) {
        g.push_back(gg);
        k.push_back(kk);
      }
  CHECK(mutual_information(g, k) == doctest::Approx(0.27807190511263765).epsilon(1e-12));

  CHECK_THROWS_AS(mutual_information({1, 0}, {1}), LengthMismatch);
  CHECK_THROWS_AS(mutual_information({}, {}), InsufficientData);
}
