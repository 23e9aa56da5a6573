#pragma once

#include "shockloop/flux.hpp"
#include "shockloop/grid.hpp"

namespace shockloop {

/// Feedback law parameters.  `ul`/`ur` cache shock_state_pair(flux, m).
struct ControllerParams {
  double alpha = 0.5;    // target shock position
  double delta = 0.1;    // observation half-width
  double epsilon = 0.01; // saturation amplitude
  double nu = 1.0;       // saturation knee
  double m = 0.5;        // shock flux level
  double ul = 1.0;
  double ur = -1.0;

  /// Fills ul/ur from the flux and checks the structural invariants against L.
  static ControllerParams make(const FluxModel& flux, double L, double alpha, double delta,
                               double epsilon, double nu, double m);
};

/// Odd saturated linear gain: clamp(epsilon * z / nu, -epsilon, epsilon).
double saturate(const ControllerParams& p, double z);

/// Windowed mean deviation from the target shock over [alpha - delta, alpha + delta],
/// integrated exactly for piecewise-constant states.
double observe(const ControllerParams& p, const GridState& state);

/// u_l(m) - saturate(observe(state)).
double left_boundary_value(const ControllerParams& p, const GridState& state);

/// Exact integral of a piecewise-constant state over [a, b] (clamped to the mesh).
double integrate_cells(const GridState& state, double a, double b);

}  // namespace shockloop
