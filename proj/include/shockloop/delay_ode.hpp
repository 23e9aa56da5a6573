#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shockloop/error.hpp"

namespace shockloop {

/// Scalar delayed equation theta'(t) = g(theta(t - tau(t))) with the bounds
/// |theta| <= M, tau_m <= tau <= tau_M and -eps_g <= g' <= -c < 0.
struct DelaySystem {
  std::function<double(double)> g;
  std::function<double(double)> tau;
  std::function<double(double)> history;  // initial data on [-3 tau_M, 0]
  double M = 1.0;
  double tau_m = 1.0;
  double tau_M = 1.0;
  double c = 0.0;
  double eps_g = 0.0;

  /// Samples g(0) = 0, the slope bracket on [-M, M], the delay bounds on
  /// [0, t_end] and the history bound; throws HypothesisFailed or BadDelay.
  void check(double t_end, std::size_t samples = 2001) const;
};

struct DelayTrajectory {
  double dt = 0.0;
  std::size_t origin = 0;  // index of t = 0; earlier samples are history
  std::vector<double> t;
  std::vector<double> theta;

  /// Linear interpolation on the stored grid.
  double at(double time) const;
};

/// Explicit midpoint steps on t_k = k dt; delayed values by linear
/// interpolation of the stored trajectory, or the history for negative times.
DelayTrajectory simulate(const DelaySystem& system, double t_end, double dt);

/// eps_g (2 tau_M + tau_m) < 1 is required; K < 1 then follows.
double contraction_constant(const DelaySystem& system);

struct DecayCheck {
  bool evaluated = false;  // false when the hypothesis for the check does not hold
  bool pass = true;
  double worst_margin = 0.0;  // max of (lhs - rhs - tol); pass means <= 0
};

struct DecayReport {
  double K = 1.0;
  double tolerance = 0.0;
  bool contraction_hypothesis = false;  // eps_g (2 tau_M + tau_m) < 1
  bool monotone_hypothesis = false;     // eps_g (tau_m + tau_M) <= 1
  DecayCheck nonincreasing;  // B(t + dt) <= B(t)
  DecayCheck contraction;    // B(t + 3 tau_M) <= K B(t)
  DecayCheck exponential;    // |theta(t)| <= exp(ln K (t - t0) / (3 tau_M)) B(t0)
  DecayCheck geometric;      // B(t0 + 3 N tau_M) <= K^N B(t0)
  double worst_ratio = 0.0;  // max B(t + 3 tau_M) / B(t)
  double max_slope = 0.0;    // max |theta(t + dt) - theta(t)| / dt
  bool slope_ok = true;      // max_slope <= eps_g M + tol

  bool all_pass() const;
};

/// B(t) = max of |theta| over [t - 3 tau_M, t] on the stored grid.
std::vector<double> running_bound(const DelayTrajectory& traj, double tau_M);

DecayReport verify_decay(const DelayTrajectory& traj, const DelaySystem& system, double t_start);

/// Parameters of g(z) = -c0 z - kappa tanh(z), a sinusoidal delay and a
/// cosine history.
struct TanhSystemSpec {
  double c0 = 0.2;
  double kappa = 0.1;
  double tau_min = 1.0;
  double tau_max = 1.0;
  double tau_omega = 1.0;
  double tau_phase = 0.0;
  double history_amplitude = 1.0;
  double history_frequency = 0.0;
  double history_phase = 0.0;
  double history_offset = 0.0;
  double bound_factor = 1.5;  // M = bound_factor * max |history|
};

DelaySystem make_tanh_system(const TanhSystemSpec& spec);

/// Random system parameters with eps_g (2 tau_M + tau_m) < 0.95.
TanhSystemSpec random_tanh_spec(std::uint64_t seed);

std::string to_csv(const DelayTrajectory& traj);

}  // namespace shockloop
