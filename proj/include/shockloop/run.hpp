#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shockloop/config.hpp"
#include "shockloop/controller.hpp"
#include "shockloop/delay_ode.hpp"
#include "shockloop/solver.hpp"
#include "shockloop/stability.hpp"

namespace shockloop {

/// One row of the per-snapshot diagnostic series; NaN marks an undefined value.
struct SeriesRow {
  double t;
  double beta;  // locate_shock
  double observation;
  double tau;   // delay read at alpha - delta
  double l1;    // distance to the target shock
};

struct ClosedLoopAnalysis {
  std::optional<StabilityConstants> constants;  // empty when the regime is invalid
  std::string regime_error;
  ParameterReport parameters;
  std::vector<SeriesRow> series;
  DecayFit fit{0.0, 0.0, 0};
  double fit_from = 0.0;
  double fit_to = 0.0;
  double envelope = 0.0;  // envelope_ratio over the fit window
  double beta_final = 0.0;
  double l1_initial = 0.0;
  double l1_final = 0.0;
  bool converged = false;
  std::size_t confinement_violations = 0;  // beta outside (alpha - delta - dx, alpha + delta + dx) after T3
  std::size_t two_zone_violations = 0;     // snapshots after T2 that are not two-zone
  std::size_t delay_violations = 0;        // tau outside its bracket (+/- 2 dx) after T3
};

ClosedLoopAnalysis analyze_closed_loop(const RunConfig& config, const FluxModel& flux,
                                       const ControllerParams& controller,
                                       const Trajectory& traj);

struct ClosedLoopRun {
  Trajectory trajectory;
  ClosedLoopAnalysis analysis;
};

/// Closed-loop simulation plus analysis; writes the artifact tree when `out` is non-empty.
ClosedLoopRun run_closed_loop_case(const RunConfig& config, const std::filesystem::path& out);

struct ConvergenceRow {
  std::size_t n_cells;
  double dx;
  double l1_error;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double observed_order;  // least-squares slope of log error against log dx
};

ConvergenceResult run_convergence_study(const RunConfig& config, const std::filesystem::path& out);

struct DelayCase {
  std::uint64_t seed;  // 0 for the explicit system
  TanhSystemSpec spec;
  DecayReport report;
};

std::vector<DelayCase> run_delay_verification(const RunConfig& config,
                                              const std::filesystem::path& out);

/// Dispatches on config.mode and writes the artifact tree under `out`.
/// `jobs` bounds the worker count of sweeps and batched delay checks.
void run(const RunConfig& config, const std::filesystem::path& out, int jobs = 1);

/// Applies the SHOCKLOOP_SEED environment override, if set.
void apply_seed_environment(RunConfig& config);

}  // namespace shockloop
