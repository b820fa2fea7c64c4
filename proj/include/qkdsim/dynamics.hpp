#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qkdsim/errors.hpp"

namespace qkdsim {

// Stern-Gerlach and wave-packet parameters. The z-velocity field depends on
// the gradient, moment and interaction time only through the kick strength
// g = B*mu*T; the offset B0 never enters the z dynamics at all.
struct PhysicalParams {
  double mass = 1.0;              // m
  double moment = 1.0;            // mu
  double gradient = 5.0;          // B
  double offset = 0.0;            // B0 (no effect on z trajectories)
  double interaction_time = 1.0;  // T
  double halfwidth = 1.0;         // sigma0 of the initial Gaussian packets
  double hbar = 1.0;

  double kick_strength() const { return gradient * moment * interaction_time; }
  void validate() const;  // throws ConfigError
};

// Initial hidden positions (z1, z2) of the two particles at t = 0.
struct HiddenState {
  double z1 = 0.0;
  double z2 = 0.0;
};

// Bob's field scaling. Kept as (magnitude, sign) so a round's sign flip is
// explicit; magnitude must be strictly positive.
struct Kappa {
  double magnitude = 1.0;
  int sign = +1;

  double value() const { return sign * magnitude; }
  static Kappa from_value(double v);  // throws ConfigError on v == 0
  void validate() const;
};

struct IntegratorConfig {
  double t_end = 5.0;
  int n_steps = 500;
  // Outcome commitment: sign of each z must be constant over the final
  // `commitment_window` fraction of steps, and |z(t_end)| must exceed
  // commitment_margin * sigma0 * sqrt(epsilon(t_end)).
  double commitment_window = 0.2;
  double commitment_margin = 2.0;

  void validate() const;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<double> z1_path;
  std::vector<double> z2_path;
  int outcome_alice = 0;  // sign of z1(t_end); 0 only for the exact origin
  int outcome_bob = 0;    // sign of z2(t_end)
  bool committed = false;
};

// +1 / -1 / 0 for x > 0 / x < 0 / x == 0.
int sign_of(double x);

// Packet spread factor epsilon(t) = 1 + hbar^2 t^2 / (4 sigma0^4 m^2).
double epsilon(double t, const PhysicalParams& params);

// Argument of the tanh term: (z1 - kappa z2) * g * t / (m sigma0^2 epsilon).
// Its sign is a conserved quantity of the flow and decides both outcomes.
double tanh_argument(double z1, double z2, double t, const Kappa& kappa,
                     const PhysicalParams& params);

struct Velocity {
  double v1 = 0.0;
  double v2 = 0.0;
};

// z-velocities of the entangled pair inside the Stern-Gerlach fields:
//   v1 = hbar^2 t z1 / (4 m^2 sigma0^4 eps) + (m eps)^-1 g       tanh(arg)
//   v2 = hbar^2 t z2 / (4 m^2 sigma0^4 eps) - (m eps)^-1 kappa g tanh(arg)
// The tanh is evaluated in saturating form, so large arguments cannot
// overflow.
Velocity velocity(const HiddenState& state, double t, const Kappa& kappa,
                  const PhysicalParams& params);

// Fixed-step RK4 from t = 0 to cfg.t_end, recording every step. Outcomes are
// the signs at t_end; `committed` reports the stability-and-margin check.
// Never throws on a valid configuration: a failed commitment is a flag, not
// an error.
TrajectoryResult integrate_pair(const HiddenState& initial, const Kappa& kappa,
                                const PhysicalParams& params,
                                const IntegratorConfig& cfg);

// Closed-form outcome map: a = sign(z1 - kappa z2), b = -sign(kappa) * a.
// sign(z1 - kappa z2) is conserved by the flow, so this predicts the
// integrated outcomes exactly. Throws TieError on z1 - kappa z2 == 0.
std::pair<int, int> analytic_outcome(const HiddenState& initial,
                                     const Kappa& kappa);

// Single-particle model: a particle at packet position z0 deflects up iff it
// lies in the upper p_up-quantile of the Gaussian, i.e. Phi(z0/sigma0) >
// 1 - p_up. Deterministic in z0 and reproduces Born statistics in ensemble.
int single_particle_outcome(double z0, double p_up, double sigma0 = 1.0);

}  // namespace qkdsim
