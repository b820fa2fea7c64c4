#include "qkdsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "spec_json.hpp"

namespace qkdsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Rejects keys outside `allowed` with a diagnostic naming section and key.
void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigError("config section \"" + section + "\" must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key \"" + item.key() + "\" in config section \"" + section +
                        "\"");
  }
}

double get_number(const json& obj, const std::string& section, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("config key \"" + section + "." + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& section, const std::string& key,
                      std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned())
    throw ConfigError("config key \"" + section + "." + key +
                      "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

int get_int(const json& obj, const std::string& section, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("config key \"" + section + "." + key + "\" must be an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& section, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw ConfigError("config key \"" + section + "." + key + "\" must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("config key \"" + section + "." + key + "\" must be a string");
  return v.get<std::string>();
}

AdversaryModel parse_model(const std::string& name) {
  if (name == "none") return AdversaryModel::None;
  if (name == "hidden-variable") return AdversaryModel::HiddenVariable;
  if (name == "hidden-variable-with-kappa") return AdversaryModel::HiddenVariableWithKappa;
  if (name == "intercept-resend") return AdversaryModel::InterceptResend;
  throw ConfigError("unknown adversary.model \"" + name +
                    "\"; expected none | hidden-variable | hidden-variable-with-kappa | "
                    "intercept-resend");
}

EvePredictor parse_predictor(const std::string& name) {
  if (name == "analytic") return EvePredictor::Analytic;
  if (name == "integrate") return EvePredictor::Integrate;
  throw ConfigError("unknown adversary.predictor \"" + name +
                    "\"; expected analytic | integrate");
}

}  // namespace

RunSpec parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "(top level)", {"physics", "integrator", "session", "adversary"});

  RunSpec spec;
  SessionConfig& s = spec.session;

  if (root.contains("physics")) {
    const json& p = root.at("physics");
    check_keys(p, "physics",
               {"mass", "moment", "gradient", "offset", "interaction_time", "halfwidth", "hbar",
                "equilibrium_width_scale"});
    s.physics.mass = get_number(p, "physics", "mass", s.physics.mass);
    s.physics.moment = get_number(p, "physics", "moment", s.physics.moment);
    s.physics.gradient = get_number(p, "physics", "gradient", s.physics.gradient);
    s.physics.offset = get_number(p, "physics", "offset", s.physics.offset);
    s.physics.interaction_time =
        get_number(p, "physics", "interaction_time", s.physics.interaction_time);
    s.physics.halfwidth = get_number(p, "physics", "halfwidth", s.physics.halfwidth);
    s.physics.hbar = get_number(p, "physics", "hbar", s.physics.hbar);
    s.equilibrium_width_scale =
        get_number(p, "physics", "equilibrium_width_scale", s.equilibrium_width_scale);
  }
  if (root.contains("integrator")) {
    const json& i = root.at("integrator");
    check_keys(i, "integrator", {"t_end", "n_steps", "commitment_window", "commitment_margin"});
    s.integrator.t_end = get_number(i, "integrator", "t_end", s.integrator.t_end);
    s.integrator.n_steps = get_int(i, "integrator", "n_steps", s.integrator.n_steps);
    s.integrator.commitment_window =
        get_number(i, "integrator", "commitment_window", s.integrator.commitment_window);
    s.integrator.commitment_margin =
        get_number(i, "integrator", "commitment_margin", s.integrator.commitment_margin);
  }
  if (root.contains("session")) {
    const json& sec = root.at("session");
    check_keys(sec, "session",
               {"n_rounds", "test_fraction", "kappa_magnitude", "seed", "fix_kappa_sign"});
    s.n_rounds = get_u64(sec, "session", "n_rounds", s.n_rounds);
    s.test_fraction = get_number(sec, "session", "test_fraction", s.test_fraction);
    s.kappa_magnitude = get_number(sec, "session", "kappa_magnitude", s.kappa_magnitude);
    s.seed = get_u64(sec, "session", "seed", s.seed);
    s.fix_kappa_sign = get_bool(sec, "session", "fix_kappa_sign", s.fix_kappa_sign);
  }
  if (root.contains("adversary")) {
    const json& a = root.at("adversary");
    check_keys(a, "adversary", {"model", "predictor"});
    spec.adversary = parse_model(get_string(a, "adversary", "model", "none"));
    spec.predictor = parse_predictor(get_string(a, "adversary", "predictor", "analytic"));
  }

  s.validate();
  return spec;
}

RunSpec load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file \"" + path + "\"");
  return parse_run_config(buffer.str());
}

namespace detail {

nlohmann::ordered_json spec_to_json(const RunSpec& spec) {
  const SessionConfig& s = spec.session;
  ordered_json physics;
  physics["mass"] = s.physics.mass;
  physics["moment"] = s.physics.moment;
  physics["gradient"] = s.physics.gradient;
  physics["offset"] = s.physics.offset;
  physics["interaction_time"] = s.physics.interaction_time;
  physics["halfwidth"] = s.physics.halfwidth;
  physics["hbar"] = s.physics.hbar;
  physics["equilibrium_width_scale"] = s.equilibrium_width_scale;

  ordered_json integrator;
  integrator["t_end"] = s.integrator.t_end;
  integrator["n_steps"] = s.integrator.n_steps;
  integrator["commitment_window"] = s.integrator.commitment_window;
  integrator["commitment_margin"] = s.integrator.commitment_margin;

  ordered_json session;
  session["n_rounds"] = s.n_rounds;
  session["test_fraction"] = s.test_fraction;
  session["kappa_magnitude"] = s.kappa_magnitude;
  session["seed"] = s.seed;
  session["fix_kappa_sign"] = s.fix_kappa_sign;

  ordered_json adversary;
  adversary["model"] = adversary_model_name(spec.adversary);
  adversary["predictor"] = spec.predictor == EvePredictor::Analytic ? "analytic" : "integrate";

  ordered_json j;
  j["physics"] = physics;
  j["integrator"] = integrator;
  j["session"] = session;
  j["adversary"] = adversary;
  return j;
}

}  // namespace detail

std::string run_spec_to_json(const RunSpec& spec, int indent) {
  return detail::spec_to_json(spec).dump(indent);
}

}  // namespace qkdsim
