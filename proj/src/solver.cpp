#include "shockloop/solver.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace shockloop {

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::BadSolverConfig, "cfl must be in (0, 1]");
  if (!(t_end > 0.0)) throw Error(ErrorCode::BadSolverConfig, "t_end must be positive");
  if (snapshot_every < 0.0)
    throw Error(ErrorCode::BadSolverConfig, "snapshot_every must be nonnegative");
  if (trace_stride == 0) throw Error(ErrorCode::BadSolverConfig, "trace_stride must be >= 1");
}

namespace {

void check_datum(const FluxModel& flux, double value, const char* which, double t) {
  if (!flux.contains(value)) {
    std::ostringstream os;
    os << which << " datum " << value << " at t = " << t << " outside working interval";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
}

void check_finite(std::span<const double> u, double t) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      std::ostringstream os;
      os << "cell " << i << " became non-finite at t = " << t;
      throw Error(ErrorCode::NonFinite, os.str());
    }
  }
}

double dt_from_speed(double speed, double dx, double cfl, double max_dt) {
  if (speed > 0.0) return std::min(cfl * dx / speed, max_dt);
  if (std::isfinite(max_dt)) return max_dt;
  throw Error(ErrorCode::ZeroWaveSpeed, "all wave speeds vanish and no time step cap given");
}

// Left datum for the upcoming step, plus the controller sample when closed-loop.
struct LeftDatum {
  double value;
  std::optional<ControllerSample> sample;
};

template <class LeftFn, class RightFn>
Trajectory integrate(const GridState& u0, LeftFn&& left_fn, RightFn&& right_fn,
                     const FluxModel& flux, const SolverConfig& config,
                     const StepObserver& observer) {
  config.validate();
  check_in_working_interval(u0, flux);

  const std::size_t n = u0.size();
  const double dx = u0.dx();
  const auto backend = kernels::resolve(config.backend, n);
  const double every = config.snapshot_interval();
  const double t0 = u0.time;
  const double t_end = config.t_end;

  Trajectory traj;
  traj.snapshots.push_back(u0);

  GridState current = u0;
  std::vector<double> next(n);
  std::vector<double> fluxes(n + 1);
  double t = t0;
  std::size_t snap_index = 1;
  auto snapshot_time = [&](std::size_t k) { return std::min(t0 + every * double(k), t_end); };
  double next_snap = snapshot_time(snap_index);

  while (t < t_end) {
    current.time = t;
    const LeftDatum left = left_fn(t, current);
    const double right = right_fn(t);
    check_datum(flux, left.value, "left", t);
    check_datum(flux, right, "right", t);

    const double speed = kernels::max_wave_speed(backend, flux, current.values, left.value, right);
    double dt = dt_from_speed(speed, dx, config.cfl, next_snap - t);
    const bool hits_snapshot = dt >= next_snap - t;

    if (traj.steps % config.trace_stride == 0) {
      if (left.sample) traj.controller_trace.push_back(*left.sample);
      traj.boundary_traces.push_back({t, left.value, current.values.front(),
                                      current.values.back(), right});
    }

    kernels::godunov_fluxes(backend, flux, current.values, left.value, right, fluxes);
    kernels::conservative_update(backend, current.values, fluxes, dt / dx, next);
    check_finite(next, t);
    traj.max_cfl = std::max(traj.max_cfl, dt * speed / dx);

    if (observer)
      observer(StepView{t, dt, dx, speed, left.value, right, current.values, next, fluxes});

    current.values.swap(next);
    ++traj.steps;
    if (hits_snapshot) {
      t = next_snap;
      current.time = t;
      traj.snapshots.push_back(current);
      ++snap_index;
      next_snap = snapshot_time(snap_index);
    } else {
      t += dt;
    }
  }

  // closing sample so that traces cover t_end
  current.time = t;
  const LeftDatum left = left_fn(t, current);
  if (left.sample) traj.controller_trace.push_back(*left.sample);
  traj.boundary_traces.push_back(
      {t, left.value, current.values.front(), current.values.back(), right_fn(t)});
  return traj;
}

}  // namespace

double stable_dt(const GridState& state, double left_datum, double right_datum,
                 const FluxModel& flux, double cfl, double max_dt, kernels::Backend backend) {
  const auto b = kernels::resolve(backend, state.size());
  const double speed = kernels::max_wave_speed(b, flux, state.values, left_datum, right_datum);
  return dt_from_speed(speed, state.dx(), cfl, max_dt);
}

GridState step_with_dt(const GridState& state, double left_datum, double right_datum,
                       const FluxModel& flux, double dt, kernels::Backend backend) {
  check_datum(flux, left_datum, "left", state.time);
  check_datum(flux, right_datum, "right", state.time);
  const auto b = kernels::resolve(backend, state.size());
  std::vector<double> fluxes(state.size() + 1);
  GridState out = state;
  kernels::godunov_fluxes(b, flux, state.values, left_datum, right_datum, fluxes);
  kernels::conservative_update(b, state.values, fluxes, dt / state.dx(), out.values);
  check_finite(out.values, state.time);
  out.time = state.time + dt;
  return out;
}

GridState step(const GridState& state, double left_datum, double right_datum,
               const FluxModel& flux, double cfl, double max_dt) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorCode::BadSolverConfig, "cfl must be in (0, 1]");
  const double dt = stable_dt(state, left_datum, right_datum, flux, cfl, max_dt);
  return step_with_dt(state, left_datum, right_datum, flux, dt);
}

Trajectory run_open_loop(const GridState& u0, const DatumFn& left_datum,
                         const DatumFn& right_datum, const FluxModel& flux,
                         const SolverConfig& config, const StepObserver& observer) {
  return integrate(
      u0, [&](double t, const GridState&) { return LeftDatum{left_datum(t), std::nullopt}; },
      right_datum, flux, config, observer);
}

Trajectory run_closed_loop(const GridState& u0, const ControllerParams& controller,
                           const FluxModel& flux, const SolverConfig& config,
                           const StepObserver& observer) {
  auto left = [&](double t, const GridState& state) {
    const double obs = observe(controller, state);
    const double gain = saturate(controller, obs);
    const double datum = controller.ul - gain;
    return LeftDatum{datum, ControllerSample{t, obs, gain, datum}};
  };
  auto right = [&](double) { return controller.ur; };
  return integrate(u0, left, right, flux, config, observer);
}

double l1_distance(const GridState& a, const GridState& b) {
  if (!a.same_mesh(b)) throw Error(ErrorCode::MeshMismatch, "l1_distance needs identical meshes");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
  return sum * a.dx();
}

}  // namespace shockloop
