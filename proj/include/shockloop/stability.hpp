#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shockloop/controller.hpp"
#include "shockloop/flux.hpp"
#include "shockloop/grid.hpp"
#include "shockloop/solver.hpp"

namespace shockloop {

/// Explicit constants and times of the closed-loop convergence argument.
struct StabilityConstants {
  double ul = 0.0;
  double ur = 0.0;
  double A_me = 0.0;     // f(u_l(m) - eps) / 2
  double theta = 0.0;    // observation threshold fraction, in (0, 1)
  double c_bar = 0.0;    // max shock speed once two zones form (> 0)
  double c_tilde = 0.0;  // min shock speed once two zones form (< 0)
  double d_bar = 0.0;    // controlled speed when the shock sits left of the window (> 0)
  double d_tilde = 0.0;  // controlled speed when it sits right of the window (< 0)
  double c1 = 0.0;       // left zone front speed (> 0)
  double c2 = 0.0;       // right zone front speed, sign flipped (> 0)
  double T1 = 0.0;       // three zones exist
  double T2 = 0.0;       // two zones exist
  double T3 = 0.0;       // shock confined to (alpha - delta, alpha + delta)
  double T4 = 0.0;       // exponential regime
  double M_med = 0.0;    // bound used for continuity of the delay
  double nu0 = 0.0;      // (u_l - u_r) / 2
};

StabilityConstants compute_constants(const FluxModel& flux, double L, double alpha, double delta,
                                     double epsilon, double nu, double m);

struct ConditionCheck {
  std::string name;
  bool pass;
  double lhs;
  double rhs;  // pass means lhs < rhs
};

struct ParameterReport {
  std::vector<ConditionCheck> checks;
  bool all_pass() const;
};

/// Smallness conditions on (epsilon, nu), each reported separately:
///   gain_margin       nu > nu0 and epsilon < nu - nu0
///   speed_ratio_right c_bar / ((1-theta) f'(u_l-eps)) < delta / L
///   speed_ratio_left  |c_tilde| / ((1-theta) |f'(u_r)|) < delta / L
///   delay_continuity  eps / nu < f'(u_l-eps) / M_med
///   delay_contraction 3 (alpha-delta) M eps / (2 delta f'(u_l-eps)) < nu,
///                     M = max f'' on [u_l-eps, u_l+eps]
ParameterReport validate_parameters(const FluxModel& flux, const StabilityConstants& k,
                                    double L, double alpha, double delta, double epsilon,
                                    double nu);

/// Rightmost downward crossing of (u_l + u_r)/2 by the piecewise-linear
/// interpolant of the cell averages.
double locate_shock(const GridState& state, double ul, double ur);

struct ZoneReport {
  double t = 0.0;
  std::size_t n_left = 0;
  std::size_t n_middle = 0;
  std::size_t n_right = 0;
  bool ordered = false;         // labels read left* middle* right* from x = 0 to L
  bool middle_speed_ok = false; // every middle cell has |f'(u)| <= L/t + tol
  bool three_zone = false;      // ordered and middle_speed_ok (meaningful for t >= T1)
  bool two_zone = false;        // ordered with at most `max_middle` smeared cells
  bool after_T1 = false;
  bool after_T2 = false;
};

struct ZoneOptions {
  double tolerance = 0.0;      // value tolerance on zone membership
  std::size_t max_middle = 3;  // smearing allowance for the two-zone flag
};

ZoneReport classify_state(const GridState& state, const FluxModel& flux,
                          const StabilityConstants& k, double epsilon, const ZoneOptions& opts);
std::vector<ZoneReport> classify_zones(const Trajectory& traj, const FluxModel& flux,
                                       const StabilityConstants& k, double epsilon,
                                       const ZoneOptions& opts);

/// Default zone tolerance: 2 dx max f'' (u_l - u_r).
double default_zone_tolerance(const FluxModel& flux, double dx, double ul, double ur);

struct DecayFit {
  double rate;       // C_fit = -slope of log(value) against t
  double prefactor;  // M_fit = exp(intercept)
  std::size_t samples;
};

/// Least-squares line through (t, log max(value, 1e-15)) on [t_a, t_b].
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t_a, double t_b);

/// max over the window of value / (M_fit exp(-C_fit t)).
double envelope_ratio(const std::vector<std::pair<double, double>>& series, const DecayFit& fit,
                      double t_a, double t_b);

/// tau(t) = (alpha - delta) / f'(u(t, alpha - delta)) for each snapshot at t >= t_from.
std::vector<std::pair<double, double>> delay_series(const Trajectory& traj,
                                                    const FluxModel& flux, double alpha,
                                                    double delta, double t_from = 0.0);

}  // namespace shockloop
