#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkdsim/adversary.hpp"
#include "qkdsim/protocol.hpp"
#include "qkdsim/stats.hpp"

namespace qkdsim {

enum class AdversaryModel { None, HiddenVariable, HiddenVariableWithKappa, InterceptResend };

const char* adversary_model_name(AdversaryModel model);

// A full experiment description: the session plus the eavesdropper model.
struct RunSpec {
  SessionConfig session{};
  AdversaryModel adversary = AdversaryModel::None;
  EvePredictor predictor = EvePredictor::Analytic;
};

struct SessionReport {
  std::uint64_t n_rounds = 0;
  std::uint64_t n_test = 0;
  std::uint64_t n_key = 0;
  std::uint64_t n_committed = 0;
  std::uint64_t key_length = 0;
  double qber = 0.0;
  double chsh_s = 0.0;
  double chsh_stderr = 0.0;
  std::array<double, 4> chsh_correlators{};
  std::array<std::uint64_t, 4> chsh_counts{};
  bool has_eve = false;
  double eve_accuracy = 0.0;            // valid only when has_eve
  ConfidenceInterval eve_accuracy_ci{}; // Wilson 95%
  double eve_mutual_information = 0.0;
  double forced_round_fraction = 0.0;   // hidden-variable models only
  double forced_round_fraction_expected = 0.0;
  bool has_forced_stats = false;
  RunSpec config{};                     // echo of the resolved configuration
  std::string generator;                // RNG family, for reproducibility
};

// Deterministic aggregation of one session's records into a report.
// Propagates InsufficientData from the CHSH estimate.
SessionReport summarize(const std::vector<RoundRecord>& records,
                        const std::vector<EvePrediction>& predictions,
                        const RunSpec& spec);

// Stable JSON rendering of the report (fixed key order, no timestamps), so
// identical sessions serialize to identical bytes.
std::string report_to_json(const SessionReport& report, int indent = 2);

}  // namespace qkdsim
