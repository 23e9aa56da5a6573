#include "shockloop/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>

#include "shockloop/csv.hpp"
#include "shockloop/front_tracking.hpp"

namespace shockloop {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return std::isnan(v) ? std::string("nan") : format_double(v); }

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t_%014.6f.csv", t);
  return buf;
}

void write_snapshots(const Trajectory& traj, const fs::path& out) {
  for (const auto& s : traj.snapshots) write_text_file(out / "snapshots" / snapshot_name(s.time), to_csv(s));
}

void write_boundary(const Trajectory& traj, const fs::path& out) {
  std::string csv = "t,left_datum,first_cell,last_cell,right_datum\n";
  for (const auto& b : traj.boundary_traces)
    csv += num(b.t) + ',' + num(b.left_datum) + ',' + num(b.first_cell) + ',' + num(b.last_cell) +
           ',' + num(b.right_datum) + '\n';
  write_text_file(out / "boundary.csv", csv);
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.cfl = c.cfl;
  s.t_end = c.t_end;
  s.snapshot_every = c.snapshot_every;
  s.trace_stride = c.trace_stride;
  return s;
}

void add_check(KeyValueWriter& w, const std::string& prefix, const DecayCheck& c) {
  w.add(prefix + "_evaluated", c.evaluated);
  w.add(prefix + "_pass", c.pass);
  w.add(prefix + "_worst_margin", c.evaluated ? c.worst_margin : 0.0);
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
#if defined(SHOCKLOOP_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : 1)
#endif
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)jobs;
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

ClosedLoopAnalysis analyze_closed_loop(const RunConfig& c, const FluxModel& flux,
                                       const ControllerParams& ctl, const Trajectory& traj) {
  ClosedLoopAnalysis a;
  try {
    a.constants = compute_constants(flux, c.L, c.alpha, c.delta, c.epsilon, c.nu, c.m);
    a.parameters = validate_parameters(flux, *a.constants, c.L, c.alpha, c.delta, c.epsilon, c.nu);
  } catch (const Error& e) {
    a.regime_error = e.what();
  }

  const GridState target = stationary_shock(c.L, c.n_cells, c.alpha, c.m, flux);
  const double x_obs = c.alpha - c.delta;
  for (const auto& s : traj.snapshots) {
    SeriesRow row{s.time, NAN, observe(ctl, s), NAN, l1_distance(s, target)};
    try {
      row.beta = locate_shock(s, ctl.ul, ctl.ur);
    } catch (const Error&) {
    }
    const auto idx = std::min(static_cast<std::size_t>(std::floor(x_obs / s.dx())), s.size() - 1);
    const double speed = flux.deriv(s.values[idx]);
    if (speed > 0.0) row.tau = x_obs / speed;
    a.series.push_back(row);
  }

  const double t_end = traj.snapshots.back().time;
  std::vector<std::pair<double, double>> l1;
  for (const auto& r : a.series) l1.emplace_back(r.t, r.l1);
  a.fit_from = 0.5 * t_end;
  a.fit_to = t_end;
  if (a.constants) {
    std::size_t inside = 0;
    for (const auto& r : a.series) inside += r.t >= a.constants->T4 ? 1 : 0;
    if (inside >= 2) a.fit_from = a.constants->T4;
  }
  a.fit = fit_decay(l1, a.fit_from, a.fit_to);
  a.envelope = envelope_ratio(l1, a.fit, a.fit_from, a.fit_to);

  a.beta_final = a.series.back().beta;
  a.l1_initial = a.series.front().l1;
  a.l1_final = a.series.back().l1;
  a.converged = std::isfinite(a.beta_final) && std::abs(a.beta_final - c.alpha) < c.converge_tol;

  if (a.constants) {
    const auto& k = *a.constants;
    const double dx = c.L / static_cast<double>(c.n_cells);
    ZoneOptions zones;
    zones.tolerance = default_zone_tolerance(flux, dx, k.ul, k.ur);
    const double tau_lo = x_obs / flux.deriv(k.ul + c.epsilon) - 2.0 * dx;
    const double tau_hi = x_obs / flux.deriv(k.ul - c.epsilon) + 2.0 * dx;
    for (std::size_t i = 0; i < a.series.size(); ++i) {
      const auto& r = a.series[i];
      if (r.t >= k.T2 && !classify_state(traj.snapshots[i], flux, k, c.epsilon, zones).two_zone)
        ++a.two_zone_violations;
      if (r.t >= k.T3) {
        if (!(r.beta > c.alpha - c.delta - dx && r.beta < c.alpha + c.delta + dx))
          ++a.confinement_violations;
        if (!(r.tau >= tau_lo && r.tau <= tau_hi)) ++a.delay_violations;
      }
    }
  }
  return a;
}

ClosedLoopRun run_closed_loop_case(const RunConfig& c, const fs::path& out) {
  const FluxModel flux = configured_flux(c);
  const ControllerParams ctl =
      ControllerParams::make(flux, c.L, c.alpha, c.delta, c.epsilon, c.nu, c.m);
  const GridState u0 = initial_state(c, flux);
  ClosedLoopRun r;
  r.trajectory = run_closed_loop(u0, ctl, flux, solver_config(c));
  r.analysis = analyze_closed_loop(c, flux, ctl, r.trajectory);
  if (out.empty()) return r;

  const auto& a = r.analysis;
  write_text_file(out / "config.snapshot", render_config(c));
  write_snapshots(r.trajectory, out);
  write_boundary(r.trajectory, out);

  std::string ctl_csv = "t,O,A,u_left_datum\n";
  for (const auto& s : r.trajectory.controller_trace)
    ctl_csv += num(s.t) + ',' + num(s.observation) + ',' + num(s.gain) + ',' + num(s.left_datum) + '\n';
  write_text_file(out / "controller.csv", ctl_csv);

  std::string series = "t,beta,O,tau,l1_error\n";
  for (const auto& s : a.series)
    series += num(s.t) + ',' + num(s.beta) + ',' + num(s.observation) + ',' + num(s.tau) + ',' +
              num(s.l1) + '\n';
  write_text_file(out / "series.csv", series);

  KeyValueWriter report;
  report.add("u_l", ctl.ul);
  report.add("u_r", ctl.ur);
  if (a.constants) {
    const auto& k = *a.constants;
    report.add("regime_valid", true);
    report.add("A_me", k.A_me);
    report.add("theta", k.theta);
    report.add("c_bar", k.c_bar);
    report.add("c_tilde", k.c_tilde);
    report.add("d_bar", k.d_bar);
    report.add("d_tilde", k.d_tilde);
    report.add("c1", k.c1);
    report.add("c2", k.c2);
    report.add("T1", k.T1);
    report.add("T2", k.T2);
    report.add("T3", k.T3);
    report.add("T4", k.T4);
    report.add("M_med", k.M_med);
    report.add("nu0", k.nu0);
    for (const auto& chk : a.parameters.checks) {
      report.add(chk.name + "_lhs", chk.lhs);
      report.add(chk.name + "_rhs", chk.rhs);
      report.add(chk.name + "_pass", chk.pass);
    }
    report.add("parameters_valid", a.parameters.all_pass());
  } else {
    report.add("regime_valid", false);
    report.add("regime_error", a.regime_error);
  }
  write_text_file(out / "stability_report.txt", report.str());

  KeyValueWriter summary;
  summary.add("mode", "closed-loop");
  summary.add("converged", a.converged);
  summary.add("beta_final", num(a.beta_final));
  summary.add("l1_initial", a.l1_initial);
  summary.add("l1_final", a.l1_final);
  summary.add("fit_from", a.fit_from);
  summary.add("fit_to", a.fit_to);
  summary.add("C_fit", a.fit.rate);
  summary.add("M_fit", a.fit.prefactor);
  summary.add("envelope_ratio", a.envelope);
  summary.add("parameters_valid", a.constants.has_value() && a.parameters.all_pass());
  for (const auto& chk : a.parameters.checks) summary.add(chk.name, chk.pass);
  summary.add("confinement_violations", static_cast<long long>(a.confinement_violations));
  summary.add("two_zone_violations", static_cast<long long>(a.two_zone_violations));
  summary.add("delay_violations", static_cast<long long>(a.delay_violations));
  summary.add("steps", static_cast<long long>(r.trajectory.steps));
  summary.add("max_cfl", r.trajectory.max_cfl);
  write_text_file(out / "summary.txt", summary.str());
  return r;
}

namespace {

void run_open_loop_case(const RunConfig& c, const fs::path& out) {
  const FluxModel flux = configured_flux(c);
  const ShockStates s = shock_state_pair(flux, c.m);
  const double left = c.left_datum.value_or(s.left);
  const double right = c.right_datum.value_or(s.right);
  const GridState u0 = initial_state(c, flux);
  const Trajectory traj = run_open_loop(
      u0, [left](double) { return left; }, [right](double) { return right; }, flux,
      solver_config(c));

  write_text_file(out / "config.snapshot", render_config(c));
  write_snapshots(traj, out);
  write_boundary(traj, out);

  const GridState& last = traj.snapshots.back();
  double beta = NAN;
  try {
    beta = locate_shock(last, s.left, s.right);
  } catch (const Error&) {
  }
  KeyValueWriter summary;
  summary.add("mode", "open-loop");
  summary.add("left_datum", left);
  summary.add("right_datum", right);
  summary.add("beta_final", num(beta));
  summary.add("l1_to_target_final",
              l1_distance(last, stationary_shock(c.L, c.n_cells, c.alpha, c.m, flux)));
  summary.add("mass_initial", u0.mass());
  summary.add("mass_final", last.mass());
  summary.add("steps", static_cast<long long>(traj.steps));
  summary.add("max_cfl", traj.max_cfl);
  write_text_file(out / "summary.txt", summary.str());
}

void run_sweep(const RunConfig& c, const fs::path& out, int jobs) {
  struct Case {
    std::size_t ie, in, is;
    RunConfig config;
  };
  std::vector<Case> cases;
  const std::vector<std::uint64_t> seeds =
      c.sweep_seeds.empty() ? std::vector<std::uint64_t>{c.perturbation.seed} : c.sweep_seeds;
  for (std::size_t ie = 0; ie < c.sweep_epsilon.size(); ++ie)
    for (std::size_t in = 0; in < c.sweep_nu.size(); ++in)
      for (std::size_t is = 0; is < seeds.size(); ++is) {
        RunConfig rc = c;
        rc.mode = RunMode::ClosedLoop;
        rc.epsilon = c.sweep_epsilon[ie];
        rc.nu = c.sweep_nu[in];
        rc.perturbation.seed = seeds[is];
        rc.sweep_epsilon.clear();
        rc.sweep_nu.clear();
        rc.sweep_seeds.clear();
        cases.push_back({ie, in, is, std::move(rc)});
      }

  std::vector<ClosedLoopAnalysis> results(cases.size());
  parallel_for(cases.size(), jobs, [&](std::size_t i) {
    const Case& k = cases[i];
    const fs::path dir = out / ("run_e" + std::to_string(k.ie) + "_n" + std::to_string(k.in) +
                                "_s" + std::to_string(k.is));
    results[i] = run_closed_loop_case(k.config, dir).analysis;
  });

  write_text_file(out / "config.snapshot", render_config(c));
  std::string csv =
      "run,epsilon,nu,seed,parameters_valid,converged,beta_final,l1_final,C_fit,"
      "confinement_violations,two_zone_violations\n";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& k = cases[i];
    const auto& a = results[i];
    csv += "run_e" + std::to_string(k.ie) + "_n" + std::to_string(k.in) + "_s" +
           std::to_string(k.is) + ',' + num(k.config.epsilon) + ',' + num(k.config.nu) + ',' +
           std::to_string(k.config.perturbation.seed) + ',' +
           ((a.constants && a.parameters.all_pass()) ? "true" : "false") + ',' +
           (a.converged ? "true" : "false") + ',' + num(a.beta_final) + ',' + num(a.l1_final) +
           ',' + num(a.fit.rate) + ',' + std::to_string(a.confinement_violations) + ',' +
           std::to_string(a.two_zone_violations) + '\n';
  }
  write_text_file(out / "sweep_summary.csv", csv);
}

}  // namespace

ConvergenceResult run_convergence_study(const RunConfig& c, const fs::path& out) {
  const FluxModel flux = configured_flux(c);
  const PiecewiseConstant initial{{c.conv_jump}, {c.conv_left, c.conv_right}};
  const FrontSolution oracle(flux, initial, c.conv_time, c.conv_eta);
  const double left = c.conv_left;
  const double right = c.conv_right;

  ConvergenceResult result;
  for (std::size_t n : c.conv_cells) {
    const GridState u0 = step_profile(c.L, n, c.conv_jump, left, right);
    SolverConfig sc;
    sc.cfl = c.cfl;
    sc.t_end = c.conv_time;
    sc.snapshot_every = c.conv_time;
    const Trajectory traj = run_open_loop(
        u0, [left](double) { return left; }, [right](double) { return right; }, flux, sc);
    const GridState& last = traj.snapshots.back();
    result.rows.push_back(
        {n, last.dx(), oracle.l1_error(last, c.conv_time, c.conv_window_lo, c.conv_window_hi)});
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double k = static_cast<double>(result.rows.size());
  for (const auto& r : result.rows) {
    const double x = std::log(r.dx);
    const double y = std::log(std::max(r.l1_error, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  result.observed_order = denom > 0.0 ? (k * sxy - sx * sy) / denom : NAN;
  if (out.empty()) return result;

  write_text_file(out / "config.snapshot", render_config(c));
  std::string csv = "n_cells,dx,l1_error\n";
  for (const auto& r : result.rows)
    csv += std::to_string(r.n_cells) + ',' + num(r.dx) + ',' + num(r.l1_error) + '\n';
  write_text_file(out / "convergence.csv", csv);
  write_text_file(out / "oracle_events.csv", oracle.events_csv());

  KeyValueWriter summary;
  summary.add("mode", "convergence-study");
  summary.add("observed_order", num(result.observed_order));
  summary.add("finest_n_cells", static_cast<long long>(result.rows.back().n_cells));
  summary.add("finest_l1_error", result.rows.back().l1_error);
  summary.add("state_range", std::abs(c.conv_left - c.conv_right));
  write_text_file(out / "summary.txt", summary.str());
  return result;
}

std::vector<DelayCase> run_delay_verification(const RunConfig& c, const fs::path& out) {
  std::vector<DelayCase> cases;
  if (c.dde_random_systems == 0) {
    const DelaySystem sys = make_tanh_system(c.dde);
    const double K = contraction_constant(sys);
    sys.check(c.dde_t_end);
    const DelayTrajectory traj = simulate(sys, c.dde_t_end, c.dde_dt);
    cases.push_back({0, c.dde, verify_decay(traj, sys, c.dde_t_start)});
    if (!out.empty()) {
      write_text_file(out / "config.snapshot", render_config(c));
      write_text_file(out / "trajectory.csv", to_csv(traj));
      const DecayReport& r = cases.back().report;
      KeyValueWriter w;
      w.add("mode", "delay-ode-verify");
      w.add("K", K);
      w.add("tau_m", sys.tau_m);
      w.add("tau_M", sys.tau_M);
      w.add("c", sys.c);
      w.add("eps_g", sys.eps_g);
      w.add("M", sys.M);
      w.add("tolerance", r.tolerance);
      w.add("monotone_hypothesis", r.monotone_hypothesis);
      w.add("contraction_hypothesis", r.contraction_hypothesis);
      add_check(w, "nonincreasing", r.nonincreasing);
      add_check(w, "contraction", r.contraction);
      add_check(w, "exponential", r.exponential);
      add_check(w, "geometric", r.geometric);
      w.add("worst_ratio", r.worst_ratio);
      w.add("max_slope", r.max_slope);
      w.add("slope_ok", r.slope_ok);
      w.add("all_pass", r.all_pass());
      write_text_file(out / "report.txt", w.str());
    }
    return cases;
  }

  cases.resize(c.dde_random_systems);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    cases[i].seed = c.dde_seed + i;
    cases[i].spec = random_tanh_spec(cases[i].seed);
  }
  for (auto& dc : cases) {
    const DelaySystem sys = make_tanh_system(dc.spec);
    const double t_end = 33.0 * sys.tau_M;
    sys.check(t_end);
    const DelayTrajectory traj = simulate(sys, t_end, sys.tau_m / 100.0);
    dc.report = verify_decay(traj, sys, 3.0 * sys.tau_M);
  }
  if (out.empty()) return cases;

  write_text_file(out / "config.snapshot", render_config(c));
  std::string csv =
      "seed,tau_min,tau_max,c,eps_g,M,K,nonincreasing,contraction,exponential,geometric,"
      "worst_ratio,max_slope\n";
  std::size_t passed[4] = {0, 0, 0, 0};
  std::size_t all = 0;
  double worst_ratio = 0.0;
  for (const auto& dc : cases) {
    const DelaySystem sys = make_tanh_system(dc.spec);
    const DecayReport& r = dc.report;
    auto flag = [](const DecayCheck& k) { return k.pass ? "true" : "false"; };
    csv += std::to_string(dc.seed) + ',' + num(sys.tau_m) + ',' + num(sys.tau_M) + ',' +
           num(sys.c) + ',' + num(sys.eps_g) + ',' + num(sys.M) + ',' + num(r.K) + ',' +
           flag(r.nonincreasing) + ',' + flag(r.contraction) + ',' + flag(r.exponential) + ',' +
           flag(r.geometric) + ',' + num(r.worst_ratio) + ',' + num(r.max_slope) + '\n';
    passed[0] += r.nonincreasing.pass;
    passed[1] += r.contraction.pass;
    passed[2] += r.exponential.pass;
    passed[3] += r.geometric.pass;
    all += r.all_pass();
    worst_ratio = std::max(worst_ratio, r.worst_ratio / r.K);
  }
  write_text_file(out / "dde_systems.csv", csv);
  KeyValueWriter w;
  w.add("mode", "delay-ode-verify");
  w.add("systems", static_cast<long long>(cases.size()));
  w.add("nonincreasing_pass", static_cast<long long>(passed[0]));
  w.add("contraction_pass", static_cast<long long>(passed[1]));
  w.add("exponential_pass", static_cast<long long>(passed[2]));
  w.add("geometric_pass", static_cast<long long>(passed[3]));
  w.add("all_pass", static_cast<long long>(all));
  w.add("worst_ratio_over_K", worst_ratio);
  write_text_file(out / "report.txt", w.str());
  return cases;
}

void run(const RunConfig& c, const fs::path& out, int jobs) {
  switch (c.mode) {
    case RunMode::ClosedLoop:
      run_closed_loop_case(c, out);
      return;
    case RunMode::OpenLoop:
      run_open_loop_case(c, out);
      return;
    case RunMode::Sweep:
      run_sweep(c, out, jobs);
      return;
    case RunMode::ConvergenceStudy:
      run_convergence_study(c, out);
      return;
    case RunMode::DelayOdeVerify:
      run_delay_verification(c, out);
      return;
  }
}

void apply_seed_environment(RunConfig& c) {
  const char* env = std::getenv("SHOCKLOOP_SEED");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw Error(ErrorCode::ValidationError, "SHOCKLOOP_SEED must be a nonnegative integer");
  override_seeds(c, v);
}

}  // namespace shockloop
