#include <cmath>

#include "doctest.h"
#include "shockloop/solver.hpp"
#include "shockloop/stability.hpp"

using namespace shockloop;

namespace {

const FluxModel kBurgers = FluxModel::burgers().for_level(0.5);

const ConditionCheck& find(const ParameterReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST_CASE("compute_constants examples (Burgers, m = 0.5, eps = 0.1)") {
  const auto k = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.1, 1.2, 0.5);
  CHECK(k.theta == doctest::Approx(std::max(1.0 / 1.9, 1.1 / 2.1)).epsilon(1e-14));
  CHECK(k.theta == doctest::Approx(0.5263157894736842).epsilon(1e-14));
  CHECK(k.c_bar == doctest::Approx(0.05).epsilon(1e-13));
  CHECK(k.c_tilde == doctest::Approx(-0.05).epsilon(1e-13));
  CHECK(k.A_me == doctest::Approx(0.2025).epsilon(1e-14));
  CHECK(k.T1 == doctest::Approx(1.5713484026367723).epsilon(1e-12));
  CHECK(k.nu0 == doctest::Approx(1.0));
}

TEST_CASE("compute_constants: acceptance parameters and ordering invariants") {
  const auto k = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.2, 0.5);
  // hand evaluation of the closed forms for u_l = 1, u_r = -1
  const double a = 0.5 * 0.995 * 0.995 / 2.0;
  const double ua = std::sqrt(2.0 * a);
  CHECK(k.A_me == doctest::Approx(a).epsilon(1e-14));
  CHECK(k.T1 == doctest::Approx(1.0 / ua).epsilon(1e-12));
  CHECK(k.c1 == doctest::Approx((0.995 + (-ua)) / 2.0).epsilon(1e-12));
  CHECK(k.c2 == doctest::Approx(-(ua - 1.0) / 2.0).epsilon(1e-12));
  CHECK(k.T2 == doctest::Approx(k.T1 + 1.0 / (k.c1 + k.c2)).epsilon(1e-14));
  const double d_tilde = ((1.0 - (0.005 / 1.2) * 0.995 / 2.0) - 1.0) / 2.0;
  const double d_bar = ((1.0 + (0.005 / 1.2) / 2.0) - 1.0) / 2.0;
  CHECK(k.d_tilde == doctest::Approx(d_tilde).epsilon(1e-10));
  CHECK(k.d_bar == doctest::Approx(d_bar).epsilon(1e-10));
  const double theta = 1.0 / 1.995;
  const double T3 = k.T2 + std::max(-(1.0 - 0.4 - theta * 0.1) / d_tilde - 1.0 / 0.995,
                                    (0.4 - theta * 0.1) / 0.995 + (0.4 - theta * 0.1) / d_bar);
  CHECK(k.T3 == doctest::Approx(T3).epsilon(1e-9));
  CHECK(k.T4 == doctest::Approx(k.T3 + 1.0 / 0.995).epsilon(1e-14));
  CHECK(k.c_tilde < 0.0);
  CHECK(k.c_bar > 0.0);
  CHECK(k.d_tilde < 0.0);
  CHECK(k.d_bar > 0.0);
  CHECK(k.c1 > 0.0);
  CHECK(k.c2 > 0.0);
  CHECK(k.T1 < k.T2);
  CHECK(k.T2 <= k.T3);
  CHECK(k.T3 < k.T4);
}

TEST_CASE("compute_constants rejects invalid regimes") {
  CHECK_THROWS_AS(compute_constants(kBurgers, 1.0, 0.4, 0.1, 1.5, 1.2, 0.5), Error);
  CHECK_THROWS_AS(compute_constants(kBurgers, 1.0, 0.05, 0.1, 0.01, 1.2, 0.5), Error);
  try {
    compute_constants(kBurgers, 1.0, 0.4, 0.1, 1.0, 1.2, 0.5);
    FAIL("expected InvalidRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRegime);
  }
}

TEST_CASE("validate_parameters examples") {
  const auto k = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.2, 0.5);
  CHECK(validate_parameters(kBurgers, k, 1.0, 0.4, 0.1, 0.005, 1.2).all_pass());

  const auto k0 = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.0, 0.5);
  const auto r0 = validate_parameters(kBurgers, k0, 1.0, 0.4, 0.1, 0.005, 1.0);
  CHECK_FALSE(find(r0, "gain_knee").pass);
  CHECK_FALSE(find(r0, "gain_margin").pass);

  for (double nu : {1.2, 2.0, 10.0}) {
    const auto kb = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.5, nu, 0.5);
    const auto rb = validate_parameters(kBurgers, kb, 1.0, 0.4, 0.1, 0.5, nu);
    CHECK_FALSE(find(rb, "speed_ratio_right").pass);
    CHECK_FALSE(find(rb, "speed_ratio_left").pass);
  }
}

TEST_CASE("locate_shock examples") {
  CHECK(locate_shock(stationary_shock(1.0, 200, 0.4, 0.5, kBurgers), 1.0, -1.0) == 0.4);
  CHECK(std::abs(locate_shock(shifted_shock(1.0, 200, 0.62, 0.5, kBurgers), 1.0, -1.0) - 0.62) < 0.005);
  // mixed cell 0.48 next to -1: linear crossing of 0 between the two cell centres
  CHECK(locate_shock(shifted_shock(1.0, 200, 0.6237, 0.5, kBurgers), 1.0, -1.0) ==
        doctest::Approx(0.625 + 0.005 * (0.48 / 1.48 - 0.5)).epsilon(1e-12));
  try {
    locate_shock(GridState(1.0, std::vector<double>(10, 0.3)), 1.0, -1.0);
    FAIL("expected NoShock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoShock);
  }
  // rightmost crossing wins
  GridState two(1.0, {1, 1, -1, -1, 1, 1, -1, -1});
  CHECK(locate_shock(two, 1.0, -1.0) == 0.75);
}

TEST_CASE("classify_zones examples") {
  const auto k = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.2, 0.5);
  ZoneOptions opts;
  opts.tolerance = default_zone_tolerance(kBurgers, 1.0 / 200, 1.0, -1.0);
  CHECK(opts.tolerance == doctest::Approx(0.02));

  const auto target = classify_state(stationary_shock(1.0, 200, 0.4, 0.5, kBurgers), kBurgers, k, 0.005, opts);
  CHECK(target.two_zone);
  CHECK(target.n_middle == 0);

  // left zone, a rarefaction from u_r up to u_l - eps, then the right zone
  std::vector<double> v(200);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = (i + 0.5) / 200.0;
    v[i] = x < 0.2 ? 0.995 : x < 0.7 ? 0.995 - (x - 0.2) / 0.5 * 1.995 : -1.0;
  }
  GridState fan(1.0, v, 0.5);
  const auto r = classify_state(fan, kBurgers, k, 0.005, opts);
  CHECK(r.ordered);
  CHECK(r.middle_speed_ok);
  CHECK(r.three_zone);
  CHECK_FALSE(r.two_zone);

  GridState backwards(1.0, {-1, -1, 1, 1});
  CHECK_FALSE(classify_state(backwards, kBurgers, k, 0.005, opts).ordered);

  Trajectory traj;
  traj.snapshots = {stationary_shock(1.0, 200, 0.4, 0.5, kBurgers), fan};
  const auto zones = classify_zones(traj, kBurgers, k, 0.005, opts);
  REQUIRE(zones.size() == 2);
  CHECK(zones[0].two_zone);
  CHECK(zones[1].three_zone);
}

TEST_CASE("fit_decay examples") {
  std::vector<std::pair<double, double>> e, c;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    e.emplace_back(t, 2.0 * std::exp(-0.3 * t));
    c.emplace_back(t, 0.7);
  }
  const auto fe = fit_decay(e, 0.0, 10.0);
  CHECK(std::abs(fe.rate - 0.3) < 1e-10);
  CHECK(fe.prefactor == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(envelope_ratio(e, fe, 0.0, 10.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(fit_decay(c, 2.0, 8.0).rate) < 1e-14);
  try {
    fit_decay(e, 20.0, 30.0);
    FAIL("expected WindowEmpty");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::WindowEmpty);
  }
}

TEST_CASE("delay_series at equilibrium and on a converging run") {
  const auto target = stationary_shock(1.0, 200, 0.4, 0.5, kBurgers);
  Trajectory traj;
  traj.snapshots = {target};
  const auto d = delay_series(traj, kBurgers, 0.4, 0.1);
  REQUIRE(d.size() == 1);
  CHECK(d[0].second == doctest::Approx(0.3).epsilon(1e-14));

  const auto p = ControllerParams::make(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.2, 0.5);
  const auto k = compute_constants(kBurgers, 1.0, 0.4, 0.1, 0.005, 1.2, 0.5);
  SolverConfig cfg;
  cfg.t_end = 80.0;
  cfg.snapshot_every = 1.0;
  const auto run = run_closed_loop(shifted_shock(1.0, 200, 0.45, 0.5, kBurgers), p, kBurgers, cfg);
  const double dx = 1.0 / 200;
  for (const auto& [t, tau] : delay_series(run, kBurgers, 0.4, 0.1, k.T2)) {
    CHECK(tau >= 0.3 / 1.005 - 2.0 * dx);
    CHECK(tau <= 0.3 / 0.995 + 2.0 * dx);
  }

  Trajectory bad;
  bad.snapshots = {GridState(1.0, std::vector<double>(200, -0.5))};
  CHECK_THROWS_AS(delay_series(bad, kBurgers, 0.4, 0.1), Error);
}
