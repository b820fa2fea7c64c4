#include "qkdsim/dynamics.hpp"

#include <cmath>
#include <string>

namespace qkdsim {

namespace {

// tanh with an explicit saturation cutoff; the argument grows like t*z and
// would otherwise feed huge values into exp.
double saturating_tanh(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return -1.0;
  return std::tanh(x);
}

bool all_finite(const HiddenState& s) {
  return std::isfinite(s.z1) && std::isfinite(s.z2);
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw ConfigError("physics.mass must be positive, got " + std::to_string(mass));
  if (!(halfwidth > 0.0) || !std::isfinite(halfwidth))
    throw ConfigError("physics.halfwidth must be positive, got " + std::to_string(halfwidth));
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw ConfigError("physics.hbar must be positive, got " + std::to_string(hbar));
  if (!(interaction_time > 0.0) || !std::isfinite(interaction_time))
    throw ConfigError("physics.interaction_time must be positive, got " +
                      std::to_string(interaction_time));
  if (gradient == 0.0 || !std::isfinite(gradient))
    throw ConfigError("physics.gradient must be finite and nonzero");
  if (moment == 0.0 || !std::isfinite(moment))
    throw ConfigError("physics.moment must be finite and nonzero");
  if (offset < 0.0 || !std::isfinite(offset))
    throw ConfigError("physics.offset must be finite and >= 0, got " + std::to_string(offset));
}

Kappa Kappa::from_value(double v) {
  if (v == 0.0 || !std::isfinite(v))
    throw ConfigError("kappa must be finite and nonzero");
  return Kappa{std::fabs(v), v > 0.0 ? +1 : -1};
}

void Kappa::validate() const {
  if (!(magnitude > 0.0) || !std::isfinite(magnitude))
    throw ConfigError("kappa magnitude must be positive, got " + std::to_string(magnitude));
  if (sign != +1 && sign != -1)
    throw ConfigError("kappa sign must be +1 or -1, got " + std::to_string(sign));
}

void IntegratorConfig::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw ConfigError("integrator.t_end must be positive, got " + std::to_string(t_end));
  if (n_steps < 10)
    throw ConfigError("integrator.n_steps must be >= 10, got " + std::to_string(n_steps));
  if (!(commitment_window > 0.0) || !(commitment_window < 1.0))
    throw ConfigError("integrator.commitment_window must lie in (0, 1), got " +
                      std::to_string(commitment_window));
  if (!(commitment_margin > 0.0) || !std::isfinite(commitment_margin))
    throw ConfigError("integrator.commitment_margin must be positive, got " +
                      std::to_string(commitment_margin));
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double epsilon(double t, const PhysicalParams& p) {
  const double s2 = p.halfwidth * p.halfwidth;
  const double ht = p.hbar * t;
  return 1.0 + ht * ht / (4.0 * s2 * s2 * p.mass * p.mass);
}

double tanh_argument(double z1, double z2, double t, const Kappa& kappa,
                     const PhysicalParams& p) {
  const double eps = epsilon(t, p);
  return (z1 - kappa.value() * z2) * p.kick_strength() * t /
         (p.mass * p.halfwidth * p.halfwidth * eps);
}

Velocity velocity(const HiddenState& state, double t, const Kappa& kappa,
                  const PhysicalParams& p) {
  const double eps = epsilon(t, p);
  const double s2 = p.halfwidth * p.halfwidth;
  const double drift_coeff = p.hbar * p.hbar * t / (4.0 * p.mass * p.mass * s2 * s2 * eps);
  const double kick = p.kick_strength() / (p.mass * eps);
  const double th = saturating_tanh(tanh_argument(state.z1, state.z2, t, kappa, p));
  return Velocity{drift_coeff * state.z1 + kick * th,
                  drift_coeff * state.z2 - kappa.value() * kick * th};
}

TrajectoryResult integrate_pair(const HiddenState& initial, const Kappa& kappa,
                                const PhysicalParams& params,
                                const IntegratorConfig& cfg) {
  params.validate();
  kappa.validate();
  cfg.validate();
  if (!all_finite(initial)) throw ConfigError("initial hidden state must be finite");

  const int n = cfg.n_steps;
  const double h = cfg.t_end / n;

  TrajectoryResult result;
  result.times.reserve(n + 1);
  result.z1_path.reserve(n + 1);
  result.z2_path.reserve(n + 1);

  HiddenState y = initial;
  result.times.push_back(0.0);
  result.z1_path.push_back(y.z1);
  result.z2_path.push_back(y.z2);

  for (int step = 0; step < n; ++step) {
    const double t = step * h;
    const Velocity k1 = velocity(y, t, kappa, params);
    const Velocity k2 = velocity({y.z1 + 0.5 * h * k1.v1, y.z2 + 0.5 * h * k1.v2},
                                 t + 0.5 * h, kappa, params);
    const Velocity k3 = velocity({y.z1 + 0.5 * h * k2.v1, y.z2 + 0.5 * h * k2.v2},
                                 t + 0.5 * h, kappa, params);
    const Velocity k4 = velocity({y.z1 + h * k3.v1, y.z2 + h * k3.v2}, t + h, kappa, params);
    y.z1 += h / 6.0 * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
    y.z2 += h / 6.0 * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);
    result.times.push_back((step + 1) * h);
    result.z1_path.push_back(y.z1);
    result.z2_path.push_back(y.z2);
  }

  result.outcome_alice = sign_of(y.z1);
  result.outcome_bob = sign_of(y.z2);

  // Commitment: constant nonzero signs over the window, plus a separation
  // margin relative to the spread packet width at t_end.
  const int window_start = static_cast<int>(std::floor((1.0 - cfg.commitment_window) * n));
  bool stable = result.outcome_alice != 0 && result.outcome_bob != 0;
  for (int i = window_start; stable && i <= n; ++i) {
    stable = sign_of(result.z1_path[i]) == result.outcome_alice &&
             sign_of(result.z2_path[i]) == result.outcome_bob;
  }
  const double spread = params.halfwidth * std::sqrt(epsilon(cfg.t_end, params));
  const double margin = cfg.commitment_margin * spread;
  result.committed = stable && std::fabs(y.z1) >= margin && std::fabs(y.z2) >= margin;
  return result;
}

std::pair<int, int> analytic_outcome(const HiddenState& initial, const Kappa& kappa) {
  kappa.validate();
  if (!all_finite(initial)) throw ConfigError("hidden state must be finite");
  const double u = initial.z1 - kappa.value() * initial.z2;
  if (u == 0.0) throw TieError("z1 - kappa*z2 == 0: outcome undefined, resample");
  const int a = sign_of(u);
  return {a, -kappa.sign * a};
}

int single_particle_outcome(double z0, double p_up, double sigma0) {
  if (!(p_up >= 0.0 && p_up <= 1.0))
    throw ConfigError("p_up must lie in [0, 1], got " + std::to_string(p_up));
  if (!(sigma0 > 0.0) || !std::isfinite(z0))
    throw ConfigError("single_particle_outcome: invalid z0 or sigma0");
  // Upper-quantile rule: Phi(z0/sigma0) > 1 - p_up.
  const double cdf = 0.5 * std::erfc(-z0 / (sigma0 * std::sqrt(2.0)));
  return cdf > 1.0 - p_up ? +1 : -1;
}

}  // namespace qkdsim
