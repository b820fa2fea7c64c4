#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qkdsim/analysis.hpp"

namespace qkdsim {

// Rounds are pure functions of (config, round_index), so the parallel lane
// must reproduce the serial lane bit for bit. Serial is the reference
// implementation; the OpenMP lane is checked against it in the tests and
// compared in the benchmark tool.
enum class ExecutionMode { Serial, Parallel };

struct RoundOutput {
  RoundRecord record{};
  std::optional<EvePrediction> prediction;
};

// Executes one planned round under the given adversary model.
RoundOutput execute_round(const RoundPlan& plan, const RunSpec& spec);

std::vector<RoundOutput> execute_rounds_serial(const std::vector<RoundPlan>& plans,
                                               const RunSpec& spec);
// threads == 0 uses the OpenMP default.
std::vector<RoundOutput> execute_rounds_parallel(const std::vector<RoundPlan>& plans,
                                                 const RunSpec& spec, int threads = 0);

// Compact per-state outcome used by the batch integration kernels.
struct PairOutcome {
  int alice = 0;
  int bob = 0;
  bool committed = false;
};

PairOutcome integrate_outcome(const HiddenState& initial, const Kappa& kappa,
                              const PhysicalParams& params,
                              const IntegratorConfig& cfg);

std::vector<PairOutcome> integrate_batch_serial(const std::vector<HiddenState>& states,
                                                const Kappa& kappa,
                                                const PhysicalParams& params,
                                                const IntegratorConfig& cfg);
std::vector<PairOutcome> integrate_batch_parallel(const std::vector<HiddenState>& states,
                                                  const Kappa& kappa,
                                                  const PhysicalParams& params,
                                                  const IntegratorConfig& cfg,
                                                  int threads = 0);

struct SessionResult {
  std::vector<RoundRecord> records;
  std::vector<EvePrediction> predictions;
  SiftedKey key;
  SessionReport report;
};

// Plans, executes, sifts and summarizes a full session. Output is identical
// for both execution modes and any thread count.
SessionResult run_session(const RunSpec& spec,
                          ExecutionMode mode = ExecutionMode::Parallel,
                          int threads = 0);

}  // namespace qkdsim
