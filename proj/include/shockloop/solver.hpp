#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "shockloop/controller.hpp"
#include "shockloop/flux.hpp"
#include "shockloop/grid.hpp"
#include "shockloop/kernels.hpp"

namespace shockloop {

struct SolverConfig {
  double cfl = 0.5;
  double t_end = 1.0;
  /// Snapshot interval; 0 selects t_end / 50.
  double snapshot_every = 0.0;
  /// Record controller/boundary traces every `trace_stride` steps.
  std::size_t trace_stride = 1;
  kernels::Backend backend = kernels::Backend::Auto;

  void validate() const;
  double snapshot_interval() const { return snapshot_every > 0.0 ? snapshot_every : t_end / 50.0; }
};

struct ControllerSample {
  double t;
  double observation;
  double gain;        // saturate(observation)
  double left_datum;  // u_l(m) - gain
};

struct BoundarySample {
  double t;
  double left_datum;
  double first_cell;  // discrete u(t, 0+)
  double last_cell;   // discrete u(t, L-)
  double right_datum;
};

struct Trajectory {
  std::vector<GridState> snapshots;
  std::vector<ControllerSample> controller_trace;  // closed loop only
  std::vector<BoundarySample> boundary_traces;
  std::size_t steps = 0;
  double max_cfl = 0.0;  // max over steps of dt * max|f'| / dx
};

/// Everything one update saw; handed to a StepObserver after each step.
struct StepView {
  double t;   // time at the start of the step
  double dt;
  double dx;
  double max_speed;
  double left_datum;
  double right_datum;
  std::span<const double> before;
  std::span<const double> after;
  std::span<const double> fluxes;  // n + 1 interface fluxes
};

using StepObserver = std::function<void(const StepView&)>;

/// CFL time step cfl*dx/max|f'|, capped by max_dt.  Throws ZeroWaveSpeed when
/// every speed vanishes and no cap is given.
double stable_dt(const GridState& state, double left_datum, double right_datum,
                 const FluxModel& flux, double cfl,
                 double max_dt = std::numeric_limits<double>::infinity(),
                 kernels::Backend backend = kernels::Backend::Auto);

/// One conservative Godunov update with ghost-cell boundary Riemann fluxes.
GridState step(const GridState& state, double left_datum, double right_datum,
               const FluxModel& flux, double cfl,
               double max_dt = std::numeric_limits<double>::infinity());

/// Same update with a prescribed dt (used to advance coupled runs in lockstep).
GridState step_with_dt(const GridState& state, double left_datum, double right_datum,
                       const FluxModel& flux, double dt,
                       kernels::Backend backend = kernels::Backend::Auto);

using DatumFn = std::function<double(double)>;

Trajectory run_open_loop(const GridState& u0, const DatumFn& left_datum,
                         const DatumFn& right_datum, const FluxModel& flux,
                         const SolverConfig& config, const StepObserver& observer = {});

/// Left datum from the controller evaluated on the state at the start of each
/// step; right datum fixed at u_r(m).
Trajectory run_closed_loop(const GridState& u0, const ControllerParams& controller,
                           const FluxModel& flux, const SolverConfig& config,
                           const StepObserver& observer = {});

/// dx * sum |a_i - b_i|.
double l1_distance(const GridState& a, const GridState& b);

}  // namespace shockloop
