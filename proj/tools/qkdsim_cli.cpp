// Command-line front end: deterministic experiment runner emitting JSON
// reports and CSV series for downstream plotting. Exit codes: 0 success,
// 2 config error, 3 physics/commitment/statistics error, 4 I/O error.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkdsim/analysis.hpp"
#include "qkdsim/config.hpp"
#include "qkdsim/session.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qkdsim;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out_path;
  bool quiet = false;
  int threads = 0;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration file");
  opts.seed_opt = cmd->add_option("--seed", opts.seed, "Override the session seed");
  cmd->add_option("--out", opts.out_path, "Write output here instead of standard output");
  cmd->add_flag("--quiet", opts.quiet, "Suppress diagnostic notes on standard error");
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = library default)");
  cmd->add_flag("--serial", opts.serial, "Use the serial reference lane instead of OpenMP");
}

// Resolves the run spec from --config/--seed. Defaults when no file given.
RunSpec resolve_spec(const CommonOpts& opts) {
  RunSpec spec;
  if (!opts.config_path.empty()) spec = load_run_config(opts.config_path);
  if (opts.seed_opt != nullptr && opts.seed_opt->count() > 0) spec.session.seed = opts.seed;
  spec.session.validate();
  return spec;
}

void note(const CommonOpts& opts, const std::string& message) {
  if (!opts.quiet) std::cerr << message << '\n';
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!std::cout) throw IoError("error writing to standard output");
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file \"" + out_path + "\"");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing output file \"" + out_path + "\"");
}

// 17 significant digits: parses back to the identical double.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ExecutionMode mode_of(const CommonOpts& opts) {
  return opts.serial ? ExecutionMode::Serial : ExecutionMode::Parallel;
}

// --- trajectory -----------------------------------------------------------

int cmd_trajectory(const CommonOpts& opts, double z1, double z2, double kappa_value) {
  const RunSpec spec = resolve_spec(opts);
  const Kappa kappa = Kappa::from_value(kappa_value);
  const TrajectoryResult traj =
      integrate_pair({z1, z2}, kappa, spec.session.physics, spec.session.integrator);

  std::string csv = "t,z1,z2,epsilon,tanh_argument_sign\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    // The sign controlling the tanh branch, sign(z1 - kappa z2), is conserved
    // by the flow; emitting it per row makes the conservation checkable.
    const int arg_sign = sign_of(traj.z1_path[i] - kappa.value() * traj.z2_path[i]);
    csv += fmt(t) + "," + fmt(traj.z1_path[i]) + "," + fmt(traj.z2_path[i]) + "," +
           fmt(epsilon(t, spec.session.physics)) + "," + std::to_string(arg_sign) + "\n";
  }
  write_output(opts.out_path, csv);
  if (!traj.committed) {
    note(opts, "trajectory did not commit: outcome signs unstable or below the margin");
    return 3;
  }
  return 0;
}

// --- ensemble -------------------------------------------------------------

int cmd_ensemble(const CommonOpts& opts, std::uint64_t n_override, double kappa_value,
                 bool kappa_given) {
  const RunSpec spec = resolve_spec(opts);
  const SessionConfig& s = spec.session;
  const std::uint64_t n = n_override > 0 ? n_override : s.n_rounds;
  const Kappa kappa =
      kappa_given ? Kappa::from_value(kappa_value) : Kappa{s.kappa_magnitude, +1};
  kappa.validate();

  const std::vector<HiddenState> states =
      sample_equilibrium(n, s.physics, {s.seed, StreamLabel::KeyRoundPhysics},
                         s.equilibrium_width_scale);
  const std::vector<PairOutcome> outcomes =
      opts.serial ? integrate_batch_serial(states, kappa, s.physics, s.integrator)
                  : integrate_batch_parallel(states, kappa, s.physics, s.integrator,
                                             opts.threads);

  std::uint64_t n_committed = 0, n_up_alice = 0, n_up_bob = 0, n_anticorrelated = 0,
                n_oracle_match = 0, n_ties = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const PairOutcome& out = outcomes[i];
    if (!out.committed) continue;
    ++n_committed;
    n_up_alice += out.alice > 0;
    n_up_bob += out.bob > 0;
    n_anticorrelated += out.alice * out.bob == -kappa.sign;
    try {
      const auto [a, b] = analytic_outcome(states[i], kappa);
      n_oracle_match += a == out.alice && b == out.bob;
    } catch (const TieError&) {
      ++n_ties;  // measure-zero event; excluded from the match rate
    }
  }

  ordered_json j;
  j["n"] = n;
  j["kappa"] = kappa.value();
  j["n_committed"] = n_committed;
  j["committed_fraction"] = static_cast<double>(n_committed) / static_cast<double>(n);
  if (n_committed > 0) {
    const double denom = static_cast<double>(n_committed);
    j["fraction_up_alice"] = static_cast<double>(n_up_alice) / denom;
    j["fraction_up_bob"] = static_cast<double>(n_up_bob) / denom;
    j["anticorrelation_rate"] = static_cast<double>(n_anticorrelated) / denom;
    j["oracle_match_rate"] =
        static_cast<double>(n_oracle_match) / static_cast<double>(n_committed - n_ties);
  }
  j["n_ties"] = n_ties;
  j["generator"] = kGeneratorName;
  write_output(opts.out_path, j.dump(2) + "\n");
  return 0;
}

// --- protocol -------------------------------------------------------------

std::string rounds_csv(const SessionResult& result) {
  std::unordered_map<std::uint64_t, const EvePrediction*> pred_by_round;
  pred_by_round.reserve(result.predictions.size());
  for (const EvePrediction& pred : result.predictions) pred_by_round.emplace(pred.round_index, &pred);

  std::string csv =
      "round_index,type,alice_setting,bob_setting,kappa_sign,z1_0,z2_0,"
      "outcome_a,outcome_b,eve_guess_a,forced\n";
  for (const RoundRecord& rec : result.records) {
    csv += std::to_string(rec.round_index);
    csv += rec.type == RoundType::Test ? ",test," : ",key,";
    csv += setting_name(rec.alice_setting);
    csv += ",";
    csv += setting_name(rec.bob_setting);
    csv += "," + std::to_string(rec.kappa_sign);
    if (rec.hidden.has_value()) {
      csv += "," + fmt(rec.hidden->z1) + "," + fmt(rec.hidden->z2);
    } else {
      csv += ",,";  // QM-sampled or intercepted rounds carry no hidden state
    }
    csv += "," + std::to_string(rec.outcome_alice) + "," + std::to_string(rec.outcome_bob);
    const auto it = pred_by_round.find(rec.round_index);
    if (it != pred_by_round.end()) {
      csv += "," + std::to_string(it->second->predicted_alice_bit) + "," +
             std::to_string(it->second->is_forced ? 1 : 0);
    } else {
      csv += ",,";
    }
    csv += "\n";
  }
  return csv;
}

int cmd_protocol(const CommonOpts& opts, const std::string& rounds_csv_path) {
  const RunSpec spec = resolve_spec(opts);
  const SessionResult result = run_session(spec, mode_of(opts), opts.threads);
  write_output(opts.out_path, report_to_json(result.report) + "\n");
  if (!rounds_csv_path.empty()) {
    write_output(rounds_csv_path, rounds_csv(result));
    note(opts, "wrote " + std::to_string(result.records.size()) + " rounds to " +
                   rounds_csv_path);
  }
  return 0;
}

// --- sweep ----------------------------------------------------------------

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& magnitudes) {
  RunSpec spec = resolve_spec(opts);
  // The sweep always scans the hidden-variable threat model; the config's
  // adversary section selects only the predictor.
  spec.adversary = AdversaryModel::HiddenVariable;

  std::string csv = "kappa_magnitude,eve_accuracy,analytic_prediction,bob_bit_invariance_rate\n";
  for (const double magnitude : magnitudes) {
    if (!(magnitude > 0.0))
      throw ConfigError("sweep kappa magnitudes must be positive, got " + fmt(magnitude));
    RunSpec row = spec;
    row.session.kappa_magnitude = magnitude;  // identical seed on every row
    const std::vector<RoundPlan> plans = plan_session(row.session);
    const std::vector<RoundOutput> outputs =
        opts.serial ? execute_rounds_serial(plans, row)
                    : execute_rounds_parallel(plans, row, opts.threads);
    std::vector<RoundRecord> records;
    std::vector<EvePrediction> predictions;
    records.reserve(outputs.size());
    for (const RoundOutput& out : outputs) {
      records.push_back(out.record);
      if (out.prediction) predictions.push_back(*out.prediction);
    }
    const EveAccuracy acc = eve_accuracy(predictions, sift(records));
    csv += fmt(magnitude) + "," + fmt(acc.accuracy) + "," +
           fmt(analytic_eve_accuracy(magnitude)) + "," + fmt(1.0 - acc.forced_fraction) + "\n";
  }
  write_output(opts.out_path, csv);
  return 0;
}

// --- bb84-demo ------------------------------------------------------------

int cmd_bb84_demo(const CommonOpts& opts, bool eve_blind) {
  const RunSpec spec = resolve_spec(opts);
  const SessionConfig& s = spec.session;
  const double sigma0 = s.physics.halfwidth;

  std::uint64_t n_sifted = 0, n_correct = 0;
  for (std::uint64_t i = 0; i < s.n_rounds; ++i) {
    RandomStream plan_rng = substream({s.seed, StreamLabel::TestRoundSampling}, i);
    const bool alice_basis = plan_rng.next_bernoulli(0.5);
    const bool alice_bit = plan_rng.next_bernoulli(0.5);
    const bool bob_basis = plan_rng.next_bernoulli(0.5);
    const double z0 = s.equilibrium_width_scale * sigma0 *
                      substream({s.seed, StreamLabel::KeyRoundPhysics}, i).next_gaussian();

    // Born probability of "up" for Bob's basis: eigenstate when the bases
    // match, an even split when they are conjugate.
    const double p_up = alice_basis == bob_basis ? (alice_bit ? 1.0 : 0.0) : 0.5;
    const int outcome = single_particle_outcome(z0, p_up, sigma0);
    int guess;
    if (eve_blind) {
      guess = substream({s.seed, StreamLabel::EveRandomness}, i).next_sign();
    } else {
      // Bases are public after sifting and z0 is the hidden variable, so Eve
      // evaluates the very same deterministic outcome rule.
      guess = single_particle_outcome(z0, p_up, sigma0);
    }
    if (alice_basis != bob_basis) continue;
    ++n_sifted;
    n_correct += guess == outcome;
  }
  if (n_sifted == 0)
    throw InsufficientData("no rounds survived basis sifting; increase session.n_rounds");

  ordered_json j;
  j["n_rounds"] = s.n_rounds;
  j["n_sifted"] = n_sifted;
  j["eve_accuracy"] = static_cast<double>(n_correct) / static_cast<double>(n_sifted);
  j["eve_blind"] = eve_blind;
  j["generator"] = kGeneratorName;
  write_output(opts.out_path, j.dump(2) + "\n");
  return 0;
}

template <typename Fn>
int guarded(const Fn& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const CommitmentFailure& e) {
    std::cerr << "commitment failure: " << e.what() << '\n';
    return 3;
  } catch (const TieError& e) {
    std::cerr << "degenerate hidden state: " << e.what() << '\n';
    return 3;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << '\n';
    return 3;
  } catch (const LengthMismatch& e) {
    std::cerr << "internal length mismatch: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled-pair QKD simulator under pilot-wave dynamics"};
  app.require_subcommand(1);

  CommonOpts traj_opts;
  double z1 = 0.0, z2 = 0.0, traj_kappa = 1.0;
  CLI::App* traj = app.add_subcommand("trajectory", "Integrate one pair and emit the time series");
  add_common(traj, traj_opts);
  traj->add_option("--z1", z1, "Initial hidden position of particle 1")->required();
  traj->add_option("--z2", z2, "Initial hidden position of particle 2")->required();
  traj->add_option("--kappa", traj_kappa, "Signed field ratio kappa")->required();

  CommonOpts ens_opts;
  std::uint64_t ens_n = 0;
  double ens_kappa = 0.0;
  CLI::App* ens = app.add_subcommand("ensemble", "Outcome statistics over sampled initial states");
  add_common(ens, ens_opts);
  ens->add_option("--n", ens_n, "Sample count (default: session.n_rounds)");
  CLI::Option* ens_kappa_opt =
      ens->add_option("--kappa", ens_kappa, "Signed kappa (default: +session.kappa_magnitude)");

  CommonOpts proto_opts;
  std::string rounds_csv_path;
  CLI::App* proto = app.add_subcommand("protocol", "Run a full session and emit the JSON report");
  add_common(proto, proto_opts);
  proto->add_option("--rounds-csv", rounds_csv_path, "Also write the per-round CSV here");

  CommonOpts sweep_opts;
  std::vector<double> magnitudes;
  CLI::App* sweep = app.add_subcommand("sweep", "Threat-model metrics across kappa magnitudes");
  add_common(sweep, sweep_opts);
  sweep->add_option("--kappas", magnitudes, "Kappa magnitudes, one CSV row each")
      ->required()
      ->expected(-1);

  CommonOpts bb84_opts;
  bool eve_blind = false;
  CLI::App* bb84 =
      app.add_subcommand("bb84-demo", "Single-particle scheme with a hidden-variable Eve");
  add_common(bb84, bb84_opts);
  bb84->add_flag("--eve-blind", eve_blind, "Eve guesses without reading the hidden position");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  if (traj->parsed())
    return guarded([&] { return cmd_trajectory(traj_opts, z1, z2, traj_kappa); });
  if (ens->parsed())
    return guarded(
        [&] { return cmd_ensemble(ens_opts, ens_n, ens_kappa, ens_kappa_opt->count() > 0); });
  if (proto->parsed()) return guarded([&] { return cmd_protocol(proto_opts, rounds_csv_path); });
  if (sweep->parsed()) return guarded([&] { return cmd_sweep(sweep_opts, magnitudes); });
  if (bb84->parsed()) return guarded([&] { return cmd_bb84_demo(bb84_opts, eve_blind); });
  return 2;
}
