#include "qkdsim/analysis.hpp"

#include <unordered_map>

#include "spec_json.hpp"

namespace qkdsim {

const char* adversary_model_name(AdversaryModel model) {
  switch (model) {
    case AdversaryModel::None: return "none";
    case AdversaryModel::HiddenVariable: return "hidden-variable";
    case AdversaryModel::HiddenVariableWithKappa: return "hidden-variable-with-kappa";
    case AdversaryModel::InterceptResend: return "intercept-resend";
  }
  return "?";
}

SessionReport summarize(const std::vector<RoundRecord>& records,
                        const std::vector<EvePrediction>& predictions, const RunSpec& spec) {
  SessionReport rep;
  rep.config = spec;
  rep.generator = kGeneratorName;
  rep.n_rounds = records.size();
  for (const RoundRecord& rec : records) {
    if (rec.type == RoundType::Test) ++rep.n_test; else ++rep.n_key;
    rep.n_committed += rec.committed;
  }

  const SiftedKey key = sift(records);
  rep.key_length = key.alice_bits.size();
  rep.qber = rep.key_length > 0 ? qber(key.alice_bits, key.bob_bits) : 0.0;

  const ChshEstimate bell = chsh(records);
  rep.chsh_s = bell.s;
  rep.chsh_stderr = bell.stderr_s;
  rep.chsh_correlators = bell.correlators;
  rep.chsh_counts = bell.counts;

  rep.has_eve = spec.adversary != AdversaryModel::None;
  if (rep.has_eve) {
    const EveAccuracy acc = eve_accuracy(predictions, key);
    rep.eve_accuracy = acc.accuracy;
    rep.eve_accuracy_ci = acc.accuracy_ci;

    std::unordered_map<std::uint64_t, std::uint8_t> guess_by_round;
    guess_by_round.reserve(predictions.size());
    for (const EvePrediction& pred : predictions)
      guess_by_round.emplace(pred.round_index, static_cast<std::uint8_t>(pred.predicted_alice_bit));
    std::vector<std::uint8_t> guesses;
    guesses.reserve(key.round_indices.size());
    for (std::uint64_t idx : key.round_indices) {
      const auto it = guess_by_round.find(idx);
      if (it == guess_by_round.end())
        throw InsufficientData("summarize: sifted key round " + std::to_string(idx) +
                               " has no adversary prediction");
      guesses.push_back(it->second);
    }
    rep.eve_mutual_information = mutual_information(guesses, key.alice_bits);

    if (spec.adversary != AdversaryModel::InterceptResend) {
      // Forced-round statistics only make sense for the hidden-variable Eve.
      rep.has_forced_stats = true;
      rep.forced_round_fraction = acc.forced_fraction;
      rep.forced_round_fraction_expected = analytic_forced_fraction(spec.session.kappa_magnitude);
    }
  }
  return rep;
}

std::string report_to_json(const SessionReport& report, int indent) {
  using nlohmann::ordered_json;
  static const char* kPairNames[4] = {"AB", "AB'", "A'B", "A'B'"};

  ordered_json session;
  session["n_rounds"] = report.n_rounds;
  session["n_test"] = report.n_test;
  session["n_key"] = report.n_key;
  session["n_committed"] = report.n_committed;
  session["key_length"] = report.key_length;
  session["qber"] = report.qber;

  ordered_json correlators, counts;
  for (int k = 0; k < 4; ++k) {
    correlators[kPairNames[k]] = report.chsh_correlators[k];
    counts[kPairNames[k]] = report.chsh_counts[k];
  }
  ordered_json chsh_j;
  chsh_j["s"] = report.chsh_s;
  chsh_j["stderr"] = report.chsh_stderr;
  chsh_j["correlators"] = correlators;
  chsh_j["counts"] = counts;

  ordered_json j;
  j["session"] = session;
  j["chsh"] = chsh_j;
  if (report.has_eve) {
    ordered_json eve;
    eve["model"] = adversary_model_name(report.config.adversary);
    eve["accuracy"] = report.eve_accuracy;
    eve["accuracy_ci"] =
        ordered_json::array({report.eve_accuracy_ci.lower, report.eve_accuracy_ci.upper});
    eve["mutual_information_bits"] = report.eve_mutual_information;
    if (report.has_forced_stats) {
      eve["forced_round_fraction"] = report.forced_round_fraction;
      eve["forced_round_fraction_expected"] = report.forced_round_fraction_expected;
    }
    j["eve"] = eve;
  } else {
    j["eve"] = nullptr;
  }
  j["config"] = detail::spec_to_json(report.config);
  j["generator"] = report.generator;
  return j.dump(indent);
}

}  // namespace qkdsim
