#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shockloop/flux.hpp"
#include "shockloop/grid.hpp"

namespace shockloop {

/// Self-similar entropy solution of the Riemann problem (a, b) sampled on the ray x/t = xi.
double riemann_solution(const FluxModel& flux, double a, double b, double xi);

/// Piecewise-constant data on the real line: states[k] holds between
/// jumps[k-1] and jumps[k]; states.size() == jumps.size() + 1.
struct PiecewiseConstant {
  std::vector<double> jumps;
  std::vector<double> states;
};

/// One straight front of the tracked solution.
struct Front {
  double birth_x;
  double birth_t;
  double death_t;  // +inf while alive
  double speed;
  double left;
  double right;

  double position(double t) const { return birth_x + speed * (t - birth_t); }
  bool is_shock() const { return left > right; }
};

/// Interaction record.  `middle` is the state squeezed out by the collision
/// (the right state of the leftmost incoming front).
struct FrontEvent {
  double t;
  double x;
  double left;
  double middle;
  double right;
};

enum class Side { Left, Right };

struct CharacteristicPath {
  std::vector<double> times;      // decreasing, from the query time down to 0
  std::vector<double> positions;
  std::vector<double> values;     // value carried on segment k (between vertices k and k+1)
  bool crossed_shock = false;
};

/// Front-tracking evolution of piecewise-constant Cauchy data for a convex flux.
/// Rarefactions are split into fans of jumps no larger than `eta`; colliding
/// fronts are merged and the resulting Riemann problem re-solved.  Results are
/// exact up to the fan discretization.
class FrontSolution {
 public:
  FrontSolution(const FluxModel& flux, const PiecewiseConstant& initial, double t_final,
                double eta, std::size_t max_events = 200000);

  double t_final() const { return t_final_; }
  double eta() const { return eta_; }
  const std::vector<Front>& fronts() const { return fronts_; }
  const std::vector<FrontEvent>& events() const { return events_; }

  /// Profile at time t: jump positions (sorted) and the states between them.
  PiecewiseConstant profile(double t) const;

  /// u(t, x-) for Side::Left, u(t, x+) for Side::Right.
  double value(double t, double x, Side side = Side::Left) const;
  std::vector<double> values(double t, const std::vector<double>& xs) const;

  /// Minimal (Side::Left) or maximal (Side::Right) backward characteristic.
  CharacteristicPath backward_characteristic(double t, double x, Side side) const;

  /// Exact L1 distance between a cell-average state and the profile at t, over
  /// the cells lying entirely inside [x_lo, x_hi].
  double l1_error(const GridState& numerical, double t, double x_lo = -INFINITY,
                  double x_hi = INFINITY) const;

  /// Event log CSV: t_event,x_event,left_state,right_state_before,right_state_after.
  std::string events_csv() const;

 private:
  struct Alive {
    double x;
    const Front* front;
  };
  std::vector<Alive> alive_before(double t) const;  // alive on (t - 0, t), sorted
  void emit_riemann(double x, double t, double a, double b);

  FluxModel flux_;
  double t_final_;
  double eta_;
  double far_left_;
  std::vector<Front> fronts_;
  std::vector<FrontEvent> events_;
  std::vector<double> event_times_;
};

/// Convenience wrapper: evolve `initial` to time t and sample u(t, x-) at xs.
std::vector<double> evolve(const FluxModel& flux, const PiecewiseConstant& initial, double t,
                           const std::vector<double>& xs, double eta);

}  // namespace shockloop
