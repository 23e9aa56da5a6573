#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shockloop/delay_ode.hpp"
#include "shockloop/grid.hpp"

namespace shockloop {

enum class RunMode { ClosedLoop, OpenLoop, ConvergenceStudy, DelayOdeVerify, Sweep };

std::string_view to_string(RunMode mode);

enum class InitialKind { Target, Shifted, Perturbed };

/// Fully resolved run description.  Unset optional keys are filled with their
/// defaults by parse_config.
struct RunConfig {
  RunMode mode = RunMode::ClosedLoop;

  std::string flux = "burgers";
  double flux_scale = 1.0;

  double L = 1.0;
  std::size_t n_cells = 400;
  double cfl = 0.5;
  double t_end = 1.0;
  double snapshot_every = 0.0;  // 0 resolves to t_end / 50
  std::size_t trace_stride = 1;

  double alpha = 0.5;
  double delta = 0.1;
  double epsilon = 0.01;
  double nu = 1.0;
  double m = 0.5;
  double converge_tol = 0.01;  // |beta(t_end) - alpha| bound for `converged`

  InitialKind u0 = InitialKind::Target;
  std::optional<double> u0_beta;  // shock position for shifted/perturbed data
  Perturbation perturbation;

  // open loop; unset means u_l(m) / u_r(m)
  std::optional<double> left_datum;
  std::optional<double> right_datum;

  // sweep: closed-loop runs over the product epsilon x nu x seeds
  std::vector<double> sweep_epsilon;
  std::vector<double> sweep_nu;
  std::vector<std::uint64_t> sweep_seeds;

  // convergence study: one Riemann problem under mesh refinement
  double conv_left = 1.0;
  double conv_right = -1.0;
  double conv_jump = 0.5;
  double conv_time = 0.3;
  std::vector<std::size_t> conv_cells;
  double conv_window_lo = 0.0;
  double conv_window_hi = 1.0;
  double conv_eta = 0.0;  // 0 resolves to 1e-3 * |conv_left - conv_right|

  // delayed equation check
  TanhSystemSpec dde;
  double dde_dt = 0.0;       // 0 resolves to tau_min / 100
  double dde_t_end = 0.0;    // 0 resolves to 33 tau_max
  double dde_t_start = 0.0;  // 0 resolves to 3 tau_max
  std::size_t dde_random_systems = 0;  // > 0 replaces the explicit system by random draws
  std::uint64_t dde_seed = 1;
};

/// Parses INI-style `key = value` lines (`#` starts a comment).  All syntax
/// problems are reported together as ParseError; then every precondition is
/// checked and all violations are reported together as ValidationError.
RunConfig parse_config(std::string_view text);

/// Checks the preconditions of the modules the configured mode will call.
/// Returns one message per violation.
std::vector<std::string> validate_config(const RunConfig& config);

/// Canonical `key = value` rendering of every key; parsing it back yields the same config.
std::string render_config(const RunConfig& config);

/// Replaces every seed in the config by `seed`.
void override_seeds(RunConfig& config, std::uint64_t seed);

/// Flux for the configured level m, with the working interval set accordingly.
FluxModel configured_flux(const RunConfig& config);

/// Initial state for closed- and open-loop runs.
GridState initial_state(const RunConfig& config, const FluxModel& flux);

}  // namespace shockloop
