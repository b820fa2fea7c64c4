#include "qkdsim/session.hpp"

#include <cstdint>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qkdsim {

namespace {

// Runs `body(i)` for i in [0, n), serially or under OpenMP. Each iteration
// must be independent; exceptions are captured per index and the first one
// (in index order) is rethrown, so both lanes fail identically.
template <typename Body>
void for_each_index(std::int64_t n, bool use_parallel, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#ifdef _OPENMP
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(n_threads) if (use_parallel)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
#ifndef _OPENMP
  (void)use_parallel;
  (void)threads;
#endif
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

EveContext eve_context_for(const RunSpec& spec) {
  EveContext ctx;
  ctx.kappa_magnitude = spec.session.kappa_magnitude;
  ctx.knowledge.knows_kappa_sign = spec.adversary == AdversaryModel::HiddenVariableWithKappa;
  ctx.predictor = spec.predictor;
  ctx.physics = spec.session.physics;
  ctx.integrator = spec.session.integrator;
  return ctx;
}

RoundOutput execute_intercept_round(const RoundPlan& plan, const SessionConfig& cfg) {
  // Eve intercepts particle 2 in every round; one stream drives her result
  // and both remeasurements. Key and test rounds use the same streams the
  // honest execution would.
  RandomStream rng =
      plan.type == RoundType::Key
          ? substream({cfg.seed, StreamLabel::KeyRoundPhysics}, plan.round_index)
          : substream({cfg.seed, StreamLabel::TestRoundSampling}, plan.round_index, /*phase=*/1);
  const InterceptOutcome io =
      intercept_resend_round(setting_angle(plan.alice_setting), setting_angle(plan.bob_setting),
                             rng);
  RoundOutput out;
  out.record.round_index = plan.round_index;
  out.record.type = plan.type;
  out.record.alice_setting = plan.alice_setting;
  out.record.bob_setting = plan.bob_setting;
  out.record.kappa_sign = plan.kappa_sign;
  out.record.outcome_alice = io.alice;
  out.record.outcome_bob = io.bob;
  out.record.committed = true;
  if (plan.type == RoundType::Key) {
    // On the z axis Alice's outcome is exactly opposite Eve's result, so the
    // intercepted key bit is known with certainty.
    EvePrediction pred;
    pred.round_index = plan.round_index;
    pred.predicted_alice_bit = io.eve < 0 ? 1 : 0;
    pred.predicted_bob_bit = pred.predicted_alice_bit;
    pred.is_forced = true;
    out.prediction = pred;
  }
  return out;
}

}  // namespace

RoundOutput execute_round(const RoundPlan& plan, const RunSpec& spec) {
  const SessionConfig& cfg = spec.session;
  if (spec.adversary == AdversaryModel::InterceptResend)
    return execute_intercept_round(plan, cfg);

  RoundOutput out;
  if (plan.type == RoundType::Test) {
    out.record = run_test_round(plan, cfg);
    return out;
  }
  out.record = run_key_round(plan, cfg);
  if (spec.adversary != AdversaryModel::None) {
    RandomStream eve_rng = substream({cfg.seed, StreamLabel::EveRandomness}, plan.round_index);
    out.prediction = eve_predict_key_round(eve_context_for(spec), plan.round_index,
                                           *out.record.hidden, plan.kappa_sign, eve_rng);
  }
  return out;
}

std::vector<RoundOutput> execute_rounds_serial(const std::vector<RoundPlan>& plans,
                                               const RunSpec& spec) {
  std::vector<RoundOutput> outputs(plans.size());
  for_each_index(static_cast<std::int64_t>(plans.size()), /*parallel=*/false, 0,
                 [&](std::size_t i) { outputs[i] = execute_round(plans[i], spec); });
  return outputs;
}

std::vector<RoundOutput> execute_rounds_parallel(const std::vector<RoundPlan>& plans,
                                                 const RunSpec& spec, int threads) {
  std::vector<RoundOutput> outputs(plans.size());
  for_each_index(static_cast<std::int64_t>(plans.size()), /*parallel=*/true, threads,
                 [&](std::size_t i) { outputs[i] = execute_round(plans[i], spec); });
  return outputs;
}

PairOutcome integrate_outcome(const HiddenState& initial, const Kappa& kappa,
                              const PhysicalParams& params, const IntegratorConfig& cfg) {
  const TrajectoryResult traj = integrate_pair(initial, kappa, params, cfg);
  return {traj.outcome_alice, traj.outcome_bob, traj.committed};
}

std::vector<PairOutcome> integrate_batch_serial(const std::vector<HiddenState>& states,
                                                const Kappa& kappa, const PhysicalParams& params,
                                                const IntegratorConfig& cfg) {
  std::vector<PairOutcome> outcomes(states.size());
  for_each_index(static_cast<std::int64_t>(states.size()), /*parallel=*/false, 0,
                 [&](std::size_t i) { outcomes[i] = integrate_outcome(states[i], kappa, params, cfg); });
  return outcomes;
}

std::vector<PairOutcome> integrate_batch_parallel(const std::vector<HiddenState>& states,
                                                  const Kappa& kappa, const PhysicalParams& params,
                                                  const IntegratorConfig& cfg, int threads) {
  std::vector<PairOutcome> outcomes(states.size());
  for_each_index(static_cast<std::int64_t>(states.size()), /*parallel=*/true, threads,
                 [&](std::size_t i) { outcomes[i] = integrate_outcome(states[i], kappa, params, cfg); });
  return outcomes;
}

SessionResult run_session(const RunSpec& spec, ExecutionMode mode, int threads) {
  const std::vector<RoundPlan> plans = plan_session(spec.session);
  std::vector<RoundOutput> outputs = mode == ExecutionMode::Serial
                                         ? execute_rounds_serial(plans, spec)
                                         : execute_rounds_parallel(plans, spec, threads);
  SessionResult result;
  result.records.reserve(outputs.size());
  result.predictions.reserve(outputs.size());
  for (RoundOutput& out : outputs) {
    result.records.push_back(std::move(out.record));
    if (out.prediction) result.predictions.push_back(*out.prediction);
  }
  result.key = sift(result.records);
  result.report = summarize(result.records, result.predictions, spec);
  return result;
}

}  // namespace qkdsim
