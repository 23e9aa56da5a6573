#include <cmath>
#include <vector>

#include "doctest.h"
#include "shockloop/delay_ode.hpp"

using namespace shockloop;

namespace {

DelaySystem linear_system(double slope, double tau, double history, double M) {
  DelaySystem s;
  s.g = [slope](double z) { return -slope * z; };
  s.tau = [tau](double) { return tau; };
  s.history = [history](double) { return history; };
  s.M = M;
  s.tau_m = s.tau_M = tau;
  s.c = s.eps_g = slope;
  return s;
}

// Exact solution of theta' = -a theta(t - 1) with theta = 1 on [-1, 0], built
// interval by interval as polynomials in s = t - n.
struct StepsOracle {
  std::vector<std::vector<double>> pieces;

  StepsOracle(double a, int intervals) {
    std::vector<double> prev{1.0};
    for (int n = 0; n < intervals; ++n) {
      double end = 0.0;
      for (double c : prev) end += c;
      std::vector<double> next(prev.size() + 1, 0.0);
      next[0] = n == 0 ? 1.0 : end;
      for (std::size_t k = 0; k < prev.size(); ++k) next[k + 1] = -a * prev[k] / static_cast<double>(k + 1);
      pieces.push_back(next);
      prev = next;
    }
  }

  double operator()(double t) const {
    auto n = static_cast<std::size_t>(std::floor(t));
    if (n >= pieces.size()) n = pieces.size() - 1;
    const double s = t - static_cast<double>(n);
    double v = 0.0;
    for (std::size_t k = pieces[n].size(); k-- > 0;) v = v * s + pieces[n][k];
    return v;
  }
};

}  // namespace

TEST_CASE("zero history stays at the origin") {
  auto s = make_tanh_system({});
  s.history = [](double) { return 0.0; };
  const auto traj = simulate(s, 20.0, 0.05);
  for (double v : traj.theta) CHECK(v == 0.0);
  const auto r = verify_decay(traj, s, 3.0);
  CHECK(r.all_pass());
  CHECK(r.contraction.worst_margin <= 0.0);
  CHECK(r.max_slope == 0.0);
}

TEST_CASE("g(z) = -z, tau = 1, history 1: theta = 1 - t on [0, 1]") {
  const auto s = linear_system(1.0, 1.0, 1.0, 1.5);
  const auto traj = simulate(s, 1.0, 0.01);
  for (std::size_t k = traj.origin; k < traj.t.size(); ++k)
    CHECK(traj.theta[k] == doctest::Approx(1.0 - traj.t[k]).epsilon(1e-13));
  CHECK(traj.t.back() == doctest::Approx(1.0));
  CHECK(traj.at(-0.5) == 1.0);
  CHECK(traj.at(0.505) == doctest::Approx(0.495).epsilon(1e-13));
}

TEST_CASE("g(z) = -0.5 z: damped decay against the method-of-steps solution") {
  const auto s = linear_system(0.5, 1.0, 1.0, 1.5);
  const StepsOracle exact(0.5, 12);
  CHECK(std::abs(exact(1.0) - 0.5) < 1e-15);
  CHECK(std::abs(exact(10.0)) < 0.1);

  double previous = INFINITY;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto traj = simulate(s, 10.0, dt);
    double err = 0.0;
    for (std::size_t k = traj.origin; k < traj.t.size(); ++k)
      err = std::max(err, std::abs(traj.theta[k] - exact(traj.t[k])));
    CHECK(err < 1e-3);
    if (std::isfinite(previous)) CHECK(previous / err > 3.0);
    previous = err;
    CHECK(std::abs(traj.at(10.0)) < 0.1);
  }
}

TEST_CASE("simulate errors") {
  auto s = linear_system(0.5, 1.0, 1.0, 1.5);
  CHECK_THROWS_AS(simulate(s, 10.0, 0.2), Error);
  auto bad_delay = s;
  bad_delay.tau = [](double t) { return t < 2.0 ? 1.0 : 3.0; };
  try {
    simulate(bad_delay, 5.0, 0.01);
    FAIL("expected BadDelay");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadDelay);
  }
  auto unbounded = linear_system(-0.5, 1.0, 1.0, 1.5);
  try {
    simulate(unbounded, 5.0, 0.01);
    FAIL("expected BoundViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundViolated);
  }
}

TEST_CASE("contraction_constant examples") {
  DelaySystem s;
  s.eps_g = 0.2;
  s.c = 0.5;
  s.tau_m = s.tau_M = 1.0;
  CHECK(contraction_constant(s) == 1.3 / 1.5);

  try {
    s.eps_g = 1.0 / 3.0;
    contraction_constant(s);
    FAIL("expected HypothesisFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisFailed);
  }

  s.eps_g = 0.3;
  s.tau_m = s.tau_M = 1.0;
  double previous = 0.0;
  for (double c : {1e-1, 1e-3, 1e-6, 1e-9}) {
    s.c = c;
    const double K = contraction_constant(s);
    CHECK(K < 1.0);
    CHECK(K > previous);
    previous = K;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("verify_decay: hypothesis failure path") {
  TanhSystemSpec spec;
  spec.c0 = 0.5;
  spec.kappa = 0.0;
  spec.tau_min = 0.8;
  spec.tau_max = 1.0;
  auto s = make_tanh_system(spec);
  CHECK(s.eps_g * (2.0 * s.tau_M + s.tau_m) == doctest::Approx(1.4));
  CHECK_THROWS_AS(contraction_constant(s), Error);
  const auto traj = simulate(s, 20.0, 0.008);
  const auto r = verify_decay(traj, s, 3.0);
  CHECK_FALSE(r.contraction_hypothesis);
  CHECK_FALSE(r.contraction.evaluated);
  CHECK_FALSE(r.exponential.evaluated);
  CHECK(r.monotone_hypothesis);
}

TEST_CASE("verify_decay: slopes in [-0.3, -0.2] pass all checks") {
  TanhSystemSpec spec;
  spec.c0 = 0.2;
  spec.kappa = 0.1;
  auto s = make_tanh_system(spec);
  CHECK(s.eps_g == doctest::Approx(0.3));
  CHECK_NOTHROW(s.check(40.0));
  const auto traj = simulate(s, 40.0, 1e-3);
  const auto r = verify_decay(traj, s, 3.0);
  CHECK(r.contraction_hypothesis);
  CHECK(r.monotone_hypothesis);
  CHECK(r.nonincreasing.pass);
  CHECK(r.contraction.pass);
  CHECK(r.exponential.pass);
  CHECK(r.geometric.pass);
  CHECK(r.slope_ok);
  CHECK(r.worst_ratio <= r.K);

  spec.kappa = 0.15;
  spec.c0 = 0.25;
  const auto steep = make_tanh_system(spec);
  CHECK(steep.eps_g * 3.0 == doctest::Approx(1.2));
  CHECK_THROWS_AS(contraction_constant(steep), Error);
}

TEST_CASE("running_bound is a sliding-window maximum") {
  DelayTrajectory traj;
  traj.dt = 1.0;
  traj.theta = {0.0, -3.0, 1.0, 2.0, 0.5, 0.1, 0.0, 0.0};
  traj.t = {0, 1, 2, 3, 4, 5, 6, 7};
  // tau_M = 2/3 gives a window of 2 steps, i.e. three samples
  const auto B = running_bound(traj, 2.0 / 3.0);
  CHECK(B == std::vector<double>{0.0, 3.0, 3.0, 3.0, 2.0, 2.0, 0.5, 0.1});
}

TEST_CASE("random systems: slope bracket, B nonincreasing, geometric chain") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto spec = random_tanh_spec(seed);
    const auto s = make_tanh_system(spec);
    CHECK(s.eps_g * (2.0 * s.tau_M + s.tau_m) < 0.95 + 1e-12);
    const double t_end = 33.0 * s.tau_M;
    s.check(t_end);
    const auto traj = simulate(s, t_end, s.tau_m / 100.0);
    const auto r = verify_decay(traj, s, 3.0 * s.tau_M);
    CAPTURE(seed);
    CHECK(r.slope_ok);
    CHECK(r.monotone_hypothesis);
    CHECK(r.nonincreasing.pass);
    CHECK(r.geometric.pass);
    CHECK(r.contraction.pass);
  }
  CHECK(random_tanh_spec(7).c0 == random_tanh_spec(7).c0);
  CHECK(random_tanh_spec(7).c0 != random_tanh_spec(8).c0);
}

TEST_CASE("trajectory CSV") {
  DelayTrajectory traj;
  traj.dt = 0.5;
  traj.t = {-0.5, 0.0, 0.5};
  traj.theta = {1.0, 1.0, 0.75};
  CHECK(to_csv(traj) == "t,theta\n-0.5,1\n0,1\n0.5,0.75\n");
}
