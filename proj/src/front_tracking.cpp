#include "shockloop/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "shockloop/csv.hpp"

namespace shockloop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double position_tolerance(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

}  // namespace

double riemann_solution(const FluxModel& flux, double a, double b, double xi) {
  if (a == b) return a;
  if (a > b) {
    const double s = rankine_hugoniot_speed(flux, a, b).value;
    return xi < s ? a : b;
  }
  if (xi <= flux.deriv(a)) return a;
  if (xi >= flux.deriv(b)) return b;
  return flux.deriv_inverse(xi);
}

FrontSolution::FrontSolution(const FluxModel& flux, const PiecewiseConstant& initial,
                             double t_final, double eta, std::size_t max_events)
    : flux_(flux), t_final_(t_final), eta_(eta), far_left_(0.0) {
  if (initial.states.size() != initial.jumps.size() + 1 || initial.states.empty())
    throw Error(ErrorCode::ValidationError, "piecewise-constant data needs jumps+1 states");
  if (!std::is_sorted(initial.jumps.begin(), initial.jumps.end()))
    throw Error(ErrorCode::ValidationError, "jump positions must be sorted");
  if (!(eta > 0.0)) throw Error(ErrorCode::ValidationError, "fan resolution eta must be positive");
  if (!(t_final > 0.0)) throw Error(ErrorCode::ValidationError, "t_final must be positive");
  far_left_ = initial.states.front();

  for (std::size_t k = 0; k < initial.jumps.size(); ++k)
    emit_riemann(initial.jumps[k], 0.0, initial.states[k], initial.states[k + 1]);

  // indices of live fronts, left to right
  std::vector<std::size_t> active(fronts_.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;

  double now = 0.0;
  while (true) {
    double t_hit = kInf;
    std::vector<double> hit(active.size() > 0 ? active.size() - 1 : 0, kInf);
    for (std::size_t i = 0; i + 1 < active.size(); ++i) {
      const Front& l = fronts_[active[i]];
      const Front& r = fronts_[active[i + 1]];
      if (l.speed <= r.speed) continue;
      const double gap = std::max(0.0, r.position(now) - l.position(now));
      hit[i] = now + gap / (l.speed - r.speed);
      t_hit = std::min(t_hit, hit[i]);
    }
    if (!(t_hit <= t_final_)) break;
    if (events_.size() >= max_events)
      throw Error(ErrorCode::TooManyEvents, "front interaction cap reached");

    const double t_tol = 1e-12 * std::max(1.0, t_hit);
    std::vector<std::size_t> next_active;
    std::size_t i = 0;
    while (i < active.size()) {
      if (i + 1 >= active.size() || !(std::abs(hit[i] - t_hit) <= t_tol)) {
        next_active.push_back(active[i]);
        ++i;
        continue;
      }
      // maximal run of fronts meeting at one point; simultaneous events left to right
      std::size_t j = i + 1;
      while (j + 1 < active.size() && std::abs(hit[j] - t_hit) <= t_tol) ++j;
      const double x = fronts_[active[i]].position(t_hit);
      const double a = fronts_[active[i]].left;
      const double mid = fronts_[active[i]].right;
      const double b = fronts_[active[j]].right;
      for (std::size_t k = i; k <= j; ++k) fronts_[active[k]].death_t = t_hit;
      events_.push_back({t_hit, x, a, mid, b});
      const std::size_t first_new = fronts_.size();
      emit_riemann(x, t_hit, a, b);
      for (std::size_t k = first_new; k < fronts_.size(); ++k) next_active.push_back(k);
      i = j + 1;
    }
    active = std::move(next_active);
    event_times_.push_back(t_hit);
    now = t_hit;
  }
}

void FrontSolution::emit_riemann(double x, double t, double a, double b) {
  if (a == b) return;
  if (a > b) {
    fronts_.push_back({x, t, kInf, rankine_hugoniot_speed(flux_, a, b).value, a, b});
    return;
  }
  const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / eta_ - 1e-9));
  const std::size_t k = std::max<std::size_t>(pieces, 1);
  double lo = a;
  for (std::size_t j = 1; j <= k; ++j) {
    const double hi = j == k ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(k);
    fronts_.push_back({x, t, kInf, rankine_hugoniot_speed(flux_, lo, hi).value, lo, hi});
    lo = hi;
  }
}

PiecewiseConstant FrontSolution::profile(double t) const {
  std::vector<std::pair<double, const Front*>> live;
  for (const Front& f : fronts_)
    if (f.birth_t <= t && t < f.death_t) live.emplace_back(f.position(t), &f);
  std::stable_sort(live.begin(), live.end(), [](const auto& p, const auto& q) {
    if (p.first != q.first) return p.first < q.first;
    return p.second->speed < q.second->speed;  // a fan at its birth point
  });
  PiecewiseConstant out;
  if (live.empty()) {
    // no fronts: the far-field state fills the line
    out.states.push_back(far_left_);
    return out;
  }
  out.states.push_back(live.front().second->left);
  for (const auto& [x, f] : live) {
    out.jumps.push_back(x);
    out.states.push_back(f->right);
  }
  return out;
}

std::vector<FrontSolution::Alive> FrontSolution::alive_before(double t) const {
  std::vector<Alive> live;
  for (const Front& f : fronts_)
    if (f.birth_t < t && t <= f.death_t) live.push_back({f.position(t), &f});
  std::stable_sort(live.begin(), live.end(), [](const Alive& p, const Alive& q) {
    if (p.x != q.x) return p.x < q.x;
    return p.front->speed > q.front->speed;  // fronts about to collide at t
  });
  return live;
}

double FrontSolution::value(double t, double x, Side side) const {
  if (!(t >= 0.0 && t <= t_final_)) throw Error(ErrorCode::OutOfRegion, "time outside solution");
  const PiecewiseConstant p = profile(t);
  const double tol = position_tolerance(x);
  std::size_t k = 0;
  if (side == Side::Left)
    while (k < p.jumps.size() && p.jumps[k] < x - tol) ++k;
  else
    while (k < p.jumps.size() && p.jumps[k] <= x + tol) ++k;
  return p.states[k];
}

std::vector<double> FrontSolution::values(double t, const std::vector<double>& xs) const {
  if (!(t >= 0.0 && t <= t_final_)) throw Error(ErrorCode::OutOfRegion, "time outside solution");
  const PiecewiseConstant p = profile(t);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    const auto it = std::lower_bound(p.jumps.begin(), p.jumps.end(), x - position_tolerance(x));
    out.push_back(p.states[static_cast<std::size_t>(it - p.jumps.begin())]);
  }
  return out;
}

CharacteristicPath FrontSolution::backward_characteristic(double t, double x, Side side) const {
  if (!(t > 0.0 && t <= t_final_)) throw Error(ErrorCode::OutOfRegion, "time outside (0, t_final]");

  CharacteristicPath path;
  path.times.push_back(t);
  path.positions.push_back(x);
  double v = value(t, x, side);
  double s = t;
  double y = x;
  const double jump_limit = eta_ * (1.0 + 1e-9);

  auto last_event_before = [&](double time) {
    double best = 0.0;
    for (double e : event_times_)
      if (e < time) best = std::max(best, e);
    return best;
  };

  const std::size_t guard = 4 * (fronts_.size() + events_.size()) + 64;
  for (std::size_t iter = 0; s > 0.0; ++iter) {
    if (iter > guard) throw Error(ErrorCode::OutOfRegion, "characteristic tracing did not terminate");
    const auto live = alive_before(s);
    const double tol = position_tolerance(y);

    // region index: fronts strictly left of the line just before s
    auto region_of = [&](double slope) {
      std::size_t r = 0;
      for (const Alive& a : live) {
        const bool tied = std::abs(a.x - y) <= tol;
        if (a.x < y - tol || (tied && a.front->speed > slope)) ++r;
      }
      return r;
    };
    auto state_of = [&](std::size_t r) {
      if (live.empty()) return v;
      return r == 0 ? live.front().front->left : live[r - 1].front->right;
    };

    const std::size_t r1 = region_of(flux_.deriv(v));
    const double v1 = state_of(r1);
    std::size_t region = r1;
    double slide_until = -1.0;
    const Front* slide_front = nullptr;
    if (v1 != v) {
      const std::size_t r2 = region_of(flux_.deriv(v1));
      if (state_of(r2) == v1) {
        if (std::abs(v1 - v) > jump_limit) path.crossed_shock = true;
        v = v1;
        region = r2;
      } else {
        // both sides point into the front: Filippov sliding along it
        slide_front = live[std::min(r1, r2)].front;
        slide_until = std::max(slide_front->birth_t, last_event_before(s));
      }
    }

    double h;
    double carried = v;
    if (slide_front != nullptr) {
      h = s - slide_until;
      y = slide_front->position(slide_until);
    } else {
      const double slope = flux_.deriv(v);
      h = s - last_event_before(s);
      int crossing = 0;
      if (region > 0) {
        const Front& lf = *live[region - 1].front;
        const double gap = y - live[region - 1].x;
        if (slope > lf.speed && gap > 0.0) {
          const double hc = gap / (slope - lf.speed);
          if (hc < h) { h = hc; crossing = -1; }
        }
      }
      if (region < live.size()) {
        const Front& rf = *live[region].front;
        const double gap = live[region].x - y;
        if (slope < rf.speed && gap > 0.0) {
          const double hc = gap / (rf.speed - slope);
          if (hc < h) { h = hc; crossing = +1; }
        }
      }
      y -= slope * h;
      if (crossing == -1) {
        const Front& lf = *live[region - 1].front;
        y = lf.position(s - h);
        if (std::abs(lf.left - lf.right) > jump_limit) path.crossed_shock = true;
        v = lf.left;
      } else if (crossing == +1) {
        const Front& rf = *live[region].front;
        y = rf.position(s - h);
        if (std::abs(rf.left - rf.right) > jump_limit) path.crossed_shock = true;
        v = rf.right;
      }
    }
    s = std::max(0.0, s - h);
    path.times.push_back(s);
    path.positions.push_back(y);
    path.values.push_back(carried);
  }
  return path;
}

double FrontSolution::l1_error(const GridState& numerical, double t, double x_lo,
                               double x_hi) const {
  const PiecewiseConstant p = profile(t);
  double total = 0.0;
  std::size_t k = 0;  // first jump right of the current cell's left edge
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    const double a = numerical.edge(i);
    const double b = numerical.edge(i + 1);
    if (a < x_lo || b > x_hi) continue;
    while (k < p.jumps.size() && p.jumps[k] <= a) ++k;
    double lo = a;
    std::size_t piece = k;
    while (lo < b) {
      const double hi = piece < p.jumps.size() ? std::min(b, p.jumps[piece]) : b;
      total += (hi - lo) * std::abs(numerical.values[i] - p.states[piece]);
      lo = hi;
      ++piece;
    }
  }
  return total;
}

std::string FrontSolution::events_csv() const {
  std::string out = "t_event,x_event,left_state,right_state_before,right_state_after\n";
  for (const auto& e : events_) {
    out += format_double(e.t) + ',' + format_double(e.x) + ',' + format_double(e.left) + ',' +
           format_double(e.middle) + ',' + format_double(e.right) + '\n';
  }
  return out;
}

std::vector<double> evolve(const FluxModel& flux, const PiecewiseConstant& initial, double t,
                           const std::vector<double>& xs, double eta) {
  const FrontSolution sol(flux, initial, t, eta);
  return sol.values(t, xs);
}

}  // namespace shockloop
