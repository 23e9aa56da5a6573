#include "shockloop/controller.hpp"

#include <cmath>
#include <sstream>

namespace shockloop {

ControllerParams ControllerParams::make(const FluxModel& flux, double L, double alpha,
                                        double delta, double epsilon, double nu, double m) {
  if (!(delta > 0.0 && epsilon > 0.0 && nu > 0.0))
    throw Error(ErrorCode::ValidationError, "delta, epsilon and nu must be positive");
  if (!(alpha - delta > 0.0 && alpha + delta < L)) {
    std::ostringstream os;
    os << "[alpha-delta, alpha+delta] = [" << alpha - delta << ", " << alpha + delta
       << "] not inside (0, " << L << ")";
    throw Error(ErrorCode::ValidationError, os.str());
  }
  const auto states = shock_state_pair(flux, m);
  return {alpha, delta, epsilon, nu, m, states.left, states.right};
}

double saturate(const ControllerParams& p, double z) {
  if (z <= -p.nu) return -p.epsilon;
  if (z >= p.nu) return p.epsilon;
  return p.epsilon * z / p.nu;
}

double integrate_cells(const GridState& state, double a, double b) {
  const std::size_t n = state.size();
  const double dx = state.dx();
  a = std::max(a, 0.0);
  b = std::min(b, state.length);
  if (!(b > a)) return 0.0;
  const auto first = static_cast<std::size_t>(std::clamp(std::floor(a / dx), 0.0, double(n - 1)));
  double sum = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double lo = state.edge(i);
    if (lo >= b) break;
    const double overlap = std::min(b, state.edge(i + 1)) - std::max(a, lo);
    if (overlap > 0.0) sum += overlap * state.values[i];
  }
  return sum;
}

double observe(const ControllerParams& p, const GridState& state) {
  if (2.0 * p.delta < 4.0 * state.dx() * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "observation window 2*delta = " << 2.0 * p.delta << " spans fewer than 4 cells of width "
       << state.dx();
    throw Error(ErrorCode::MeshTooCoarse, os.str());
  }
  // target contributes delta*ul on the left half and delta*ur on the right half
  const double integral = integrate_cells(state, p.alpha - p.delta, p.alpha + p.delta);
  return integral / (2.0 * p.delta) - 0.5 * (p.ul + p.ur);
}

double left_boundary_value(const ControllerParams& p, const GridState& state) {
  return p.ul - saturate(p, observe(p, state));
}

}  // namespace shockloop
