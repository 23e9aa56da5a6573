#include "shockloop/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shockloop {

namespace {

double rh(const FluxModel& flux, double a, double b) {
  return rankine_hugoniot_speed(flux, a, b).value;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidRegime, what);
}

}  // namespace

StabilityConstants compute_constants(const FluxModel& flux, double L, double alpha, double delta,
                                     double epsilon, double nu, double m) {
  if (!(L > 0.0 && delta > 0.0 && epsilon > 0.0 && nu > 0.0 && m > 0.0))
    throw Error(ErrorCode::InvalidRegime, "L, delta, epsilon, nu and m must be positive");
  if (!(alpha - delta > 0.0 && alpha + delta < L))
    throw Error(ErrorCode::InvalidRegime, "observation window must lie inside (0, L)");

  const ShockStates s = shock_state_pair(flux, m);
  StabilityConstants k;
  k.ul = s.left;
  k.ur = s.right;
  const double ul = k.ul;
  const double ur = k.ur;
  require(epsilon < ul, "epsilon must be below u_l(m)");
  require(flux.contains(ul + epsilon) && flux.contains(ul - epsilon),
          "u_l(m) +/- epsilon outside the working interval");

  const double speed_low = flux.deriv(ul - epsilon);  // f'(u_l - eps) > 0
  require(speed_low > 0.0, "f'(u_l - epsilon) must be positive");

  k.A_me = 0.5 * flux.eval(ul - epsilon);
  const ShockStates a = shock_state_pair(flux, k.A_me);
  k.T1 = std::max(L / flux.deriv(a.left), L / (-flux.deriv(a.right)));

  k.c1 = rh(flux, ul - epsilon, a.right);
  k.c2 = -rh(flux, a.left, ur);
  require(k.c1 > 0.0 && k.c2 > 0.0, "zone front speeds must be positive");
  k.T2 = k.T1 + L / (k.c1 + k.c2);

  k.theta = std::max(ul / (ul - ur - epsilon), (epsilon - ur) / (ul + epsilon - ur));
  require(k.theta > 0.0 && k.theta < 1.0, "theta must lie in (0, 1)");

  k.c_bar = rh(flux, ul + epsilon, ur);
  k.c_tilde = rh(flux, ul - epsilon, ur);
  require(k.c_tilde < 0.0 && 0.0 < k.c_bar, "shock speed bounds must bracket zero");

  const double ratio = epsilon / nu;
  k.d_tilde = rh(flux, ul - ratio * (ul - epsilon) / 2.0, ur);
  k.d_bar = rh(flux, ul - ratio * ur / 2.0, ur);
  require(k.d_tilde < 0.0 && 0.0 < k.d_bar, "controlled speed bounds must bracket zero");

  const double reach = alpha - k.theta * delta;
  const double from_right = -(L - alpha - k.theta * delta) / k.d_tilde - L / speed_low;
  const double from_left = reach / speed_low + reach / k.d_bar;
  k.T3 = k.T2 + std::max(from_right, from_left);
  k.T4 = k.T3 + L / speed_low;

  const double jump = std::max(flux.eval(ul + epsilon) - flux.eval(ur),
                               flux.eval(ur) - flux.eval(ul - epsilon));
  k.M_med = jump / (2.0 * delta) * (alpha - delta) / speed_low *
            flux.max_second_deriv_on(ul - epsilon, ul + epsilon);
  k.nu0 = 0.5 * (ul - ur);

  require(k.T1 < k.T2 && k.T2 <= k.T3 && k.T3 < k.T4, "times must satisfy T1 < T2 <= T3 < T4");
  return k;
}

bool ParameterReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.pass; });
}

ParameterReport validate_parameters(const FluxModel& flux, const StabilityConstants& k,
                                    double L, double alpha, double delta, double epsilon,
                                    double nu) {
  ParameterReport r;
  auto add = [&](const char* name, double lhs, double rhs) {
    r.checks.push_back({name, lhs < rhs, lhs, rhs});
  };
  const double speed_low = flux.deriv(k.ul - epsilon);

  add("gain_knee", k.nu0, nu);
  add("gain_margin", epsilon, nu - k.nu0);
  add("speed_ratio_right", k.c_bar / ((1.0 - k.theta) * speed_low), delta / L);
  add("speed_ratio_left", std::abs(k.c_tilde) / ((1.0 - k.theta) * std::abs(flux.deriv(k.ur))),
      delta / L);
  add("delay_continuity", epsilon / nu, speed_low / k.M_med);
  const double M = flux.max_second_deriv_on(k.ul - epsilon, k.ul + epsilon);
  add("delay_contraction", 3.0 * (alpha - delta) * M * epsilon / (2.0 * delta * speed_low), nu);
  return r;
}

double locate_shock(const GridState& state, double ul, double ur) {
  const double mid = 0.5 * (ul + ur);
  const auto& u = state.values;
  for (std::size_t i = u.size() - 1; i-- > 0;) {
    if (u[i] >= mid && mid > u[i + 1]) {
      const double frac = (u[i] - mid) / (u[i] - u[i + 1]);
      return state.edge(i + 1) + state.dx() * (frac - 0.5);
    }
  }
  throw Error(ErrorCode::NoShock, "no downward crossing of the shock midpoint");
}

double default_zone_tolerance(const FluxModel& flux, double dx, double ul, double ur) {
  return 2.0 * dx * flux.max_convexity() * (ul - ur);
}

ZoneReport classify_state(const GridState& state, const FluxModel& flux,
                          const StabilityConstants& k, double epsilon, const ZoneOptions& opts) {
  ZoneReport r;
  r.t = state.time;
  r.after_T1 = state.time >= k.T1;
  r.after_T2 = state.time >= k.T2;
  const double tol = opts.tolerance;
  const double speed_cap = state.time > 0.0 ? state.length / state.time : INFINITY;
  const double speed_tol = tol * flux.max_convexity();

  int stage = 0;  // 0 left, 1 middle, 2 right
  r.ordered = true;
  r.middle_speed_ok = true;
  for (double u : state.values) {
    int label;
    if (std::abs(u - k.ur) <= tol) {
      label = 2;
      ++r.n_right;
    } else if (std::abs(u - k.ul) <= epsilon + tol) {
      label = 0;
      ++r.n_left;
    } else {
      label = 1;
      ++r.n_middle;
      if (std::abs(flux.deriv(u)) > speed_cap + speed_tol) r.middle_speed_ok = false;
    }
    if (label < stage) r.ordered = false;
    stage = std::max(stage, label);
  }
  r.three_zone = r.ordered && r.middle_speed_ok;
  r.two_zone = r.ordered && r.n_middle <= opts.max_middle;
  return r;
}

std::vector<ZoneReport> classify_zones(const Trajectory& traj, const FluxModel& flux,
                                       const StabilityConstants& k, double epsilon,
                                       const ZoneOptions& opts) {
  std::vector<ZoneReport> out;
  out.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) out.push_back(classify_state(s, flux, k, epsilon, opts));
  return out;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t_a, double t_b) {
  double n = 0.0, st = 0.0, sy = 0.0;
  for (const auto& [t, v] : series) {
    if (t < t_a || t > t_b) continue;
    n += 1.0;
    st += t;
    sy += std::log(std::max(v, 1e-15));
  }
  if (n < 2.0) throw Error(ErrorCode::WindowEmpty, "fewer than two samples in the fit window");
  const double tm = st / n;
  const double ym = sy / n;
  double stt = 0.0, sty = 0.0;
  for (const auto& [t, v] : series) {
    if (t < t_a || t > t_b) continue;
    const double dt = t - tm;
    stt += dt * dt;
    sty += dt * (std::log(std::max(v, 1e-15)) - ym);
  }
  if (!(stt > 0.0)) throw Error(ErrorCode::WindowEmpty, "fit window has no time spread");
  const double slope = sty / stt;
  return {-slope, std::exp(ym - slope * tm), static_cast<std::size_t>(n)};
}

double envelope_ratio(const std::vector<std::pair<double, double>>& series, const DecayFit& fit,
                      double t_a, double t_b) {
  double worst = 0.0;
  for (const auto& [t, v] : series) {
    if (t < t_a || t > t_b) continue;
    const double env = fit.prefactor * std::exp(-fit.rate * t);
    worst = std::max(worst, std::max(v, 1e-15) / env);
  }
  return worst;
}

std::vector<std::pair<double, double>> delay_series(const Trajectory& traj,
                                                    const FluxModel& flux, double alpha,
                                                    double delta, double t_from) {
  std::vector<std::pair<double, double>> out;
  const double x = alpha - delta;
  for (const auto& s : traj.snapshots) {
    if (s.time < t_from) continue;
    const auto idx = std::min(static_cast<std::size_t>(std::floor(x / s.dx())), s.size() - 1);
    const double speed = flux.deriv(s.values[idx]);
    if (!(speed > 0.0)) {
      std::ostringstream os;
      os << "f'(u(t, alpha - delta)) = " << speed << " at t = " << s.time;
      throw Error(ErrorCode::NonPositiveSpeed, os.str());
    }
    out.emplace_back(s.time, x / speed);
  }
  return out;
}

}  // namespace shockloop
