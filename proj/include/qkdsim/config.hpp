#pragma once

#include <string>

#include "qkdsim/analysis.hpp"

namespace qkdsim {

// Parses the JSON run configuration:
//   {
//     "physics":    {mass, moment, gradient, offset, interaction_time,
//                    halfwidth, hbar, equilibrium_width_scale},
//     "integrator": {t_end, n_steps, commitment_window, commitment_margin},
//     "session":    {n_rounds, test_fraction, kappa_magnitude, seed,
//                    fix_kappa_sign},
//     "adversary":  {model, predictor}
//   }
// Every section and field is optional and defaults per RunSpec. Unknown keys
// are rejected with a diagnostic naming the key; all numeric bounds are
// validated before anything runs. Throws ConfigError.
RunSpec parse_run_config(const std::string& json_text);

// Reads and parses a config file. Throws ConfigError (parse/validation) or
// IoError (unreadable file).
RunSpec load_run_config(const std::string& path);

// Serializes the resolved spec back to JSON (the config echo in reports).
std::string run_spec_to_json(const RunSpec& spec, int indent = 2);

}  // namespace qkdsim
