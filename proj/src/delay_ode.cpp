#include "shockloop/delay_ode.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <sstream>

#include "shockloop/csv.hpp"

namespace shockloop {

namespace {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

double uniform(std::mt19937_64& gen, double lo, double hi) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

void DelaySystem::check(double t_end, std::size_t samples) const {
  if (!g || !tau || !history) fail(ErrorCode::HypothesisFailed, "g, tau and history must be set");
  if (!(tau_m > 0.0 && tau_m <= tau_M)) fail(ErrorCode::HypothesisFailed, "need 0 < tau_m <= tau_M");
  if (!(c > 0.0 && eps_g >= c)) fail(ErrorCode::HypothesisFailed, "need 0 < c <= eps_g");
  if (!(M > 0.0)) fail(ErrorCode::HypothesisFailed, "bound M must be positive");
  if (std::abs(g(0.0)) > 1e-14) fail(ErrorCode::HypothesisFailed, "g(0) must vanish");

  const double n = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i + 1 < samples; ++i) {
    const double a = -M + 2.0 * M * static_cast<double>(i) / n;
    const double b = -M + 2.0 * M * static_cast<double>(i + 1) / n;
    const double slope = (g(b) - g(a)) / (b - a);
    if (slope > -c + 1e-9 || slope < -eps_g - 1e-9) {
      std::ostringstream os;
      os << "slope of g " << slope << " near " << a << " outside [" << -eps_g << ", " << -c << "]";
      fail(ErrorCode::HypothesisFailed, os.str());
    }
  }
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t_end * static_cast<double>(i) / n;
    const double d = tau(t);
    if (d < tau_m - 1e-12 || d > tau_M + 1e-12) {
      std::ostringstream os;
      os << "delay " << d << " at t = " << t << " outside [" << tau_m << ", " << tau_M << "]";
      fail(ErrorCode::BadDelay, os.str());
    }
    const double s = -3.0 * tau_M * static_cast<double>(i) / n;
    if (std::abs(history(s)) > M) fail(ErrorCode::HypothesisFailed, "history exceeds the bound M");
  }
}

double DelayTrajectory::at(double time) const {
  const double pos = time / dt + static_cast<double>(origin);
  if (pos <= 0.0) return theta.front();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= theta.size()) return theta.back();
  const double w = pos - static_cast<double>(i);
  return theta[i] + w * (theta[i + 1] - theta[i]);
}

DelayTrajectory simulate(const DelaySystem& system, double t_end, double dt) {
  if (!(t_end > 0.0)) fail(ErrorCode::ValidationError, "t_end must be positive");
  if (!(dt > 0.0 && dt <= system.tau_m / 10.0 * (1.0 + 1e-12)))
    fail(ErrorCode::ValidationError, "dt must lie in (0, tau_m / 10]");

  DelayTrajectory traj;
  traj.dt = dt;
  const auto h = static_cast<std::size_t>(std::ceil(3.0 * system.tau_M / dt - 1e-9));
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  traj.origin = h;
  traj.t.reserve(h + steps + 1);
  traj.theta.reserve(h + steps + 1);
  for (std::size_t k = 0; k <= h; ++k) {
    const double t = -static_cast<double>(h - k) * dt;
    const double v = system.history(t);
    if (std::abs(v) > system.M) fail(ErrorCode::BoundViolated, "history exceeds the bound M");
    traj.t.push_back(t);
    traj.theta.push_back(v);
  }

  for (std::size_t n = 0; n < steps; ++n) {
    const double tn = static_cast<double>(n) * dt;
    const double tm = tn + 0.5 * dt;
    const double d = system.tau(tm);
    if (d < system.tau_m - 1e-12 || d > system.tau_M + 1e-12) {
      std::ostringstream os;
      os << "delay " << d << " at t = " << tm << " outside its bounds";
      fail(ErrorCode::BadDelay, os.str());
    }
    const double td = tm - d;
    const double delayed = td < 0.0 ? system.history(td) : traj.at(td);
    const double next = traj.theta.back() + dt * system.g(delayed);
    if (!std::isfinite(next) || std::abs(next) > system.M) {
      std::ostringstream os;
      os << "|theta| = " << std::abs(next) << " exceeds M = " << system.M << " at t = " << tn + dt;
      fail(ErrorCode::BoundViolated, os.str());
    }
    traj.t.push_back(static_cast<double>(n + 1) * dt);
    traj.theta.push_back(next);
  }
  return traj;
}

double contraction_constant(const DelaySystem& s) {
  const double span = 2.0 * s.tau_M + s.tau_m;
  if (!(s.eps_g * span < 1.0)) {
    std::ostringstream os;
    os << "eps_g (2 tau_M + tau_m) = " << s.eps_g * span << " is not below 1";
    fail(ErrorCode::HypothesisFailed, os.str());
  }
  return (1.0 + s.eps_g * span * s.c * s.tau_M) / (1.0 + s.c * s.tau_M);
}

bool DecayReport::all_pass() const {
  for (const DecayCheck* c : {&nonincreasing, &contraction, &exponential, &geometric})
    if (c->evaluated && !c->pass) return false;
  return slope_ok;
}

std::vector<double> running_bound(const DelayTrajectory& traj, double tau_M) {
  const auto w = static_cast<std::size_t>(std::floor(3.0 * tau_M / traj.dt + 1e-9));
  std::vector<double> B(traj.theta.size());
  std::deque<std::size_t> window;  // indices with decreasing |theta|
  for (std::size_t k = 0; k < traj.theta.size(); ++k) {
    const double v = std::abs(traj.theta[k]);
    while (!window.empty() && std::abs(traj.theta[window.back()]) <= v) window.pop_back();
    window.push_back(k);
    while (window.front() + w < k) window.pop_front();
    B[k] = std::abs(traj.theta[window.front()]);
  }
  return B;
}

DecayReport verify_decay(const DelayTrajectory& traj, const DelaySystem& s, double t_start) {
  DecayReport r;
  r.tolerance = 10.0 * traj.dt * s.eps_g * s.M;
  r.contraction_hypothesis = s.eps_g * (2.0 * s.tau_M + s.tau_m) < 1.0;
  r.monotone_hypothesis = s.eps_g * (s.tau_m + s.tau_M) <= 1.0;
  if (r.contraction_hypothesis) r.K = contraction_constant(s);

  const double tol = r.tolerance;
  const double period = 3.0 * s.tau_M;
  if (t_start - period < traj.t.front() - 1e-12)
    fail(ErrorCode::ValidationError, "trajectory must cover [t_start - 3 tau_M, t_end]");
  const auto w = static_cast<std::size_t>(std::floor(period / traj.dt + 1e-9));
  const std::vector<double> B = running_bound(traj, s.tau_M);
  const std::size_t size = B.size();
  std::size_t k0 = 0;
  while (k0 < size && traj.t[k0] < t_start - 1e-12) ++k0;

  auto record = [](DecayCheck& c, double margin) {
    c.worst_margin = std::max(c.worst_margin, margin);
    if (margin > 0.0) c.pass = false;
  };
  auto start = [](DecayCheck& c) {
    c.evaluated = true;
    c.worst_margin = -INFINITY;
  };

  if (r.monotone_hypothesis) {
    start(r.nonincreasing);
    for (std::size_t k = k0; k + 1 < size; ++k) record(r.nonincreasing, B[k + 1] - B[k] - tol);
  }
  if (r.contraction_hypothesis) {
    start(r.contraction);
    start(r.exponential);
    start(r.geometric);
    for (std::size_t k = k0; k + w < size; ++k) {
      record(r.contraction, B[k + w] - r.K * B[k] - tol);
      if (B[k] > 0.0) r.worst_ratio = std::max(r.worst_ratio, B[k + w] / B[k]);
    }
    const double rate = std::log(r.K) / period;
    for (std::size_t k = k0; k < size; ++k) {
      const double env = std::exp(rate * (traj.t[k] - traj.t[k0])) * B[k0];
      record(r.exponential, std::abs(traj.theta[k]) - env - tol);
    }
    double factor = 1.0;
    for (std::size_t N = 1;; ++N) {
      const auto k = k0 + static_cast<std::size_t>(
                              std::floor(static_cast<double>(N) * period / traj.dt + 1e-9));
      if (k >= size) break;
      factor *= r.K;
      record(r.geometric, B[k] - factor * B[k0] - tol);
    }
  }

  for (std::size_t k = traj.origin; k + 1 < size; ++k)
    r.max_slope = std::max(r.max_slope, std::abs(traj.theta[k + 1] - traj.theta[k]) / traj.dt);
  r.slope_ok = r.max_slope <= s.eps_g * s.M + tol;
  return r;
}

DelaySystem make_tanh_system(const TanhSystemSpec& spec) {
  DelaySystem s;
  const double c0 = spec.c0;
  const double kappa = spec.kappa;
  s.g = [c0, kappa](double z) { return -c0 * z - kappa * std::tanh(z); };
  const double lo = spec.tau_min;
  const double hi = spec.tau_max;
  const double omega = spec.tau_omega;
  const double phase = spec.tau_phase;
  s.tau = [=](double t) { return lo + (hi - lo) * 0.5 * (1.0 + std::sin(omega * t + phase)); };
  const double amp = spec.history_amplitude;
  const double freq = spec.history_frequency;
  const double hphase = spec.history_phase;
  const double offset = spec.history_offset;
  s.history = [=](double t) { return offset + amp * std::cos(freq * t + hphase); };
  s.M = spec.bound_factor * (std::abs(offset) + std::abs(amp));
  s.tau_m = lo;
  s.tau_M = hi;
  s.c = c0;
  s.eps_g = c0 + kappa;
  return s;
}

TanhSystemSpec random_tanh_spec(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  TanhSystemSpec spec;
  spec.tau_min = uniform(gen, 0.5, 1.5);
  spec.tau_max = spec.tau_min * uniform(gen, 1.0, 1.6);
  const double eps_g = uniform(gen, 0.3, 0.95) / (2.0 * spec.tau_max + spec.tau_min);
  spec.c0 = eps_g * uniform(gen, 0.2, 0.8);
  spec.kappa = eps_g - spec.c0;
  spec.tau_omega = uniform(gen, 0.5, 3.0);
  spec.tau_phase = uniform(gen, 0.0, 2.0 * std::numbers::pi);
  spec.history_amplitude = uniform(gen, 0.2, 1.0);
  spec.history_frequency = uniform(gen, 0.0, 3.0);
  spec.history_phase = uniform(gen, 0.0, 2.0 * std::numbers::pi);
  spec.history_offset = uniform(gen, -0.5, 0.5);
  return spec;
}

std::string to_csv(const DelayTrajectory& traj) {
  std::string out = "t,theta\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k)
    out += format_double(traj.t[k]) + ',' + format_double(traj.theta[k]) + '\n';
  return out;
}

}  // namespace shockloop
