#include <cmath>
#include <random>

#include "doctest.h"
#include "shockloop/front_tracking.hpp"
#include "shockloop/solver.hpp"

using namespace shockloop;

namespace {

const FluxModel kBurgers = FluxModel::burgers();

// Position of a backward characteristic at time s by linear interpolation on its polyline.
double position_at(const CharacteristicPath& p, double s) {
  for (std::size_t k = 0; k + 1 < p.times.size(); ++k) {
    const double t0 = p.times[k], t1 = p.times[k + 1];
    if (s <= t0 && s >= t1) {
      if (t0 == t1) return p.positions[k + 1];
      const double w = (t0 - s) / (t0 - t1);
      return p.positions[k] + w * (p.positions[k + 1] - p.positions[k]);
    }
  }
  return p.positions.back();
}

}  // namespace

TEST_CASE("riemann_solution examples") {
  CHECK(riemann_solution(kBurgers, 1.0, -1.0, -0.1) == 1.0);
  CHECK(riemann_solution(kBurgers, 1.0, -1.0, 0.1) == -1.0);
  CHECK(riemann_solution(kBurgers, -1.0, 1.0, 0.5) == doctest::Approx(0.5));
  CHECK(riemann_solution(kBurgers, -1.0, 1.0, -2.0) == -1.0);
  CHECK(riemann_solution(kBurgers, -1.0, 1.0, 2.0) == 1.0);
  for (double xi : {-3.0, 0.0, 0.7}) CHECK(riemann_solution(kBurgers, 0.4, 0.4, xi) == 0.4);
  const auto c = FluxModel::cosh();
  CHECK(c.deriv(riemann_solution(c, -1.0, 1.0, 0.3)) == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("a single stationary shock is unchanged") {
  const FrontSolution sol(kBurgers, {{0.0}, {1.0, -1.0}}, 10.0, 1e-3);
  CHECK(sol.events().empty());
  for (double t : {0.5, 5.0, 10.0}) {
    const auto p = sol.profile(t);
    REQUIRE(p.jumps.size() == 1);
    CHECK(p.jumps[0] == 0.0);
    CHECK(p.states == std::vector<double>{1.0, -1.0});
  }
}

TEST_CASE("two shocks merge at t = 1, x = 0") {
  const FrontSolution sol(kBurgers, {{-1.0, 1.0}, {2.0, 0.0, -2.0}}, 3.0, 1e-3);
  REQUIRE(sol.events().size() == 1);
  const auto& e = sol.events()[0];
  CHECK(e.t == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(e.x) < 1e-14);
  CHECK(e.left == 2.0);
  CHECK(e.middle == 0.0);
  CHECK(e.right == -2.0);
  CHECK(sol.value(2.0, -0.1) == 2.0);
  CHECK(sol.value(2.0, 0.1) == -2.0);
  CHECK(sol.value(0.5, 0.0) == 0.0);
  CHECK(sol.events_csv() ==
        "t_event,x_event,left_state,right_state_before,right_state_after\n1,0,2,0,-2\n");
}

TEST_CASE("rarefaction fan sampled at t = 1 gives u = x") {
  const double eta = 1e-3;
  const FrontSolution sol(kBurgers, {{0.0}, {-1.0, 1.0}}, 1.0, eta);
  for (double x = -0.99; x < 1.0; x += 0.0173) CHECK(std::abs(sol.value(1.0, x) - x) <= eta);
  CHECK(sol.value(1.0, -1.5) == -1.0);
  CHECK(sol.value(1.0, 1.5) == 1.0);
  const auto v = evolve(kBurgers, {{0.0}, {-1.0, 1.0}}, 1.0, {-0.5, 0.25}, eta);
  CHECK(std::abs(v[0] + 0.5) <= eta);
  CHECK(std::abs(v[1] - 0.25) <= eta);
}

TEST_CASE("simultaneous collisions are resolved left to right") {
  // shocks at -1, 0, 1 with speeds 1, 0, -1 (Burgers): all three meet at (1, 0)
  const FrontSolution sol(kBurgers, {{-1.0, 0.0, 1.0}, {2.0, 0.0, 0.0, -2.0}}, 2.0, 1e-3);
  // the middle jump 0 -> 0 is empty, so two shocks meet
  REQUIRE(sol.events().size() == 1);
  CHECK(sol.events()[0].left == 2.0);
  CHECK(sol.events()[0].right == -2.0);
  const FrontSolution three(kBurgers, {{-1.0, 0.0, 1.0}, {3.0, 1.0, -1.0, -3.0}}, 3.0, 1e-3);
  REQUIRE(three.events().size() == 1);
  CHECK(three.events()[0].t == doctest::Approx(0.5));
  CHECK(three.events()[0].left == 3.0);
  CHECK(three.events()[0].right == -3.0);
}

TEST_CASE("backward characteristics: constant region, shock, fan") {
  const FrontSolution shock(kBurgers, {{0.0}, {1.0, -1.0}}, 2.0, 1e-3);
  const auto left = shock.backward_characteristic(1.0, -0.5, Side::Left);
  CHECK(left.values.front() == 1.0);
  CHECK(left.positions.back() == doctest::Approx(-1.5));
  CHECK_FALSE(left.crossed_shock);

  const auto on_min = shock.backward_characteristic(1.0, 0.0, Side::Left);
  CHECK(on_min.values.front() == 1.0);
  CHECK(on_min.positions.back() == doctest::Approx(-1.0));
  const auto on_max = shock.backward_characteristic(1.0, 0.0, Side::Right);
  CHECK(on_max.values.front() == -1.0);
  CHECK(on_max.positions.back() == doctest::Approx(1.0));

  const double eta = 1e-3;
  const FrontSolution fan(kBurgers, {{0.0}, {-1.0, 1.0}}, 2.0, eta);
  const auto in_fan = fan.backward_characteristic(1.0, 0.3, Side::Left);
  CHECK(std::abs(in_fan.values.front() - 0.3) <= eta);
  CHECK(std::abs(in_fan.positions.back()) <= 2.0 * eta);
  CHECK(in_fan.times.back() == 0.0);

  CHECK_THROWS_AS(fan.backward_characteristic(3.0, 0.0, Side::Left), Error);
  CHECK_THROWS_AS(fan.value(-1.0, 0.0), Error);
}

TEST_CASE("backward characteristics do not cross") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> state(-1.0, 1.0);
  PiecewiseConstant init;
  for (int k = 0; k < 8; ++k) init.jumps.push_back(-1.0 + 0.25 * k);
  for (int k = 0; k < 9; ++k) init.states.push_back(state(gen));
  const double t = 1.2;
  const FrontSolution sol(kBurgers, init, t, 1e-2);
  CHECK_FALSE(sol.events().empty());

  std::vector<CharacteristicPath> paths;
  for (double x = -1.5; x <= 1.5; x += 0.05) {
    paths.push_back(sol.backward_characteristic(t, x, Side::Left));
    paths.push_back(sol.backward_characteristic(t, x, Side::Right));
  }
  std::size_t crossings = 0;
  for (double s = 0.0; s < t; s += t / 97.0)
    for (std::size_t i = 0; i + 1 < paths.size(); ++i)
      crossings += position_at(paths[i], s) > position_at(paths[i + 1], s) + 1e-9;
  CHECK(crossings == 0);

  // genuine characteristics carry the initial value at their foot
  for (const auto& p : paths) {
    if (p.crossed_shock) continue;
    const double foot = p.positions.back();
    if (std::abs(foot - std::round(foot * 4.0) / 4.0) < 1e-6) continue;  // lands on a jump
    CHECK(std::abs(p.values.back() - sol.value(0.0, foot)) <= 1e-2 + 1e-12);
  }
}

TEST_CASE("oracle L1 error against the solver shrinks with the mesh") {
  for (const auto& data : {std::pair{1.0, -0.5}, std::pair{-0.5, 1.0}}) {
    const FrontSolution sol(kBurgers, {{0.5}, {data.first, data.second}}, 0.3, 1e-4);
    double previous = INFINITY;
    for (std::size_t n : {100u, 200u, 400u}) {
      const auto u0 = step_profile(1.0, n, 0.5, data.first, data.second);
      SolverConfig cfg;
      cfg.t_end = 0.3;
      const auto traj = run_open_loop(
          u0, [&](double) { return data.first; }, [&](double) { return data.second; }, kBurgers, cfg);
      const double err = sol.l1_error(traj.snapshots.back(), 0.3, 0.1, 0.9);
      CHECK(err < previous);
      previous = err;
    }
    CHECK(previous < 0.01);
  }
}

TEST_CASE("front tracking errors") {
  CHECK_THROWS_AS(FrontSolution(kBurgers, {{0.0, -1.0}, {1.0, 0.0, -1.0}}, 1.0, 1e-3), Error);
  CHECK_THROWS_AS(FrontSolution(kBurgers, {{0.0}, {1.0}}, 1.0, 1e-3), Error);
  try {
    FrontSolution(kBurgers, {{-1.0, 1.0}, {2.0, 0.0, -2.0}}, 3.0, 1e-3, 0);
    FAIL("expected TooManyEvents");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyEvents);
  }
}
