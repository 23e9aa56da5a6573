#include "shockloop/flux.hpp"

#include <limits>
#include <sstream>

namespace shockloop {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr int kCertifySamples = 2001;

// Root of f(u) = m on the monotone branch between 0 and `far` (far may be
// negative).  Bracketed bisection down to a coarse width, then safeguarded
// Newton; a few extra Newton passes polish the residual to rounding level so
// that f(u_l) and f(u_r) agree far below the acceptance tolerance.
double branch_root(const FluxModel& flux, double m, double far) {
  double inner = 0.0;  // f(inner) - m < 0
  double outer = far;  // f(outer) - m >= 0
  for (int i = 0; i < 60 && std::abs(outer - inner) > 1e-3 * std::abs(far); ++i) {
    const double mid = 0.5 * (inner + outer);
    if (flux.eval(mid) - m < 0.0)
      inner = mid;
    else
      outer = mid;
  }
  double u = 0.5 * (inner + outer);
  double best = u;
  double best_res = std::abs(flux.eval(u) - m);
  int polish = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const double res = flux.eval(u) - m;
    if (std::abs(res) < best_res) {
      best_res = std::abs(res);
      best = u;
    }
    if (best_res <= kRootTolerance && ++polish > 4) break;
    if (res < 0.0)
      inner = u;
    else
      outer = u;
    const double slope = flux.deriv(u);
    double next = slope != 0.0 ? u - res / slope : 0.5 * (inner + outer);
    const double lo = std::min(inner, outer);
    const double hi = std::max(inner, outer);
    if (!(next > lo && next < hi)) next = 0.5 * (inner + outer);
    if (next == u) break;
    u = next;
  }
  if (!(best_res <= kRootTolerance)) {
    std::ostringstream os;
    os << "|f(u) - m| = " << best_res << " for m = " << m;
    throw Error(ErrorCode::NotConverged, os.str());
  }
  return best;
}

}  // namespace

FluxModel FluxModel::burgers(double scale) {
  FluxModel f(FluxKind::Burgers, scale);
  f.certify();
  return f;
}

FluxModel FluxModel::cosh(double scale) {
  FluxModel f(FluxKind::Cosh, scale);
  f.certify();
  return f;
}

FluxModel FluxModel::by_name(std::string_view name, double scale) {
  if (name == "burgers") return burgers(scale);
  if (name == "cosh") return cosh(scale);
  throw Error(ErrorCode::ValidationError, "unknown flux '" + std::string(name) + "'");
}

std::string FluxModel::name() const {
  return kind_ == FluxKind::Burgers ? "burgers" : "cosh";
}

FluxModel FluxModel::with_working_interval(double lo, double hi) const {
  if (!(lo < 0.0 && hi > 0.0))
    throw Error(ErrorCode::OutOfRange, "working interval must contain the sonic point 0");
  FluxModel f = *this;
  f.lo_ = lo;
  f.hi_ = hi;
  f.certify();
  return f;
}

FluxModel FluxModel::for_level(double m) const {
  if (!(m > 0.0)) throw Error(ErrorCode::NoRoot, "flux level m must be positive");
  double far = 1.0;
  while (eval(far) < m || eval(-far) < m) {
    far *= 2.0;
    if (far > 1e6) throw Error(ErrorCode::NoRoot, "level m out of reach of the flux");
  }
  const double w = std::max(branch_root(*this, m, far), -branch_root(*this, m, -far));
  return with_working_interval(-3.0 * w, 3.0 * w);
}

void FluxModel::certify() {
  if (!(scale_ > 0.0)) throw Error(ErrorCode::ValidationError, "flux scale must be positive");
  if (eval(0.0) != 0.0 || deriv(0.0) != 0.0)
    throw Error(ErrorCode::ValidationError, "flux must satisfy f(0) = f'(0) = 0");
  min_f2_ = std::numeric_limits<double>::infinity();
  max_f2_ = 0.0;
  double prev_speed = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCertifySamples; ++i) {
    const double u = lo_ + (hi_ - lo_) * i / (kCertifySamples - 1);
    const double f2 = second_deriv(u);
    min_f2_ = std::min(min_f2_, f2);
    max_f2_ = std::max(max_f2_, f2);
    const double speed = deriv(u);
    if (!(speed > prev_speed))
      throw Error(ErrorCode::ValidationError, "f' not strictly increasing on working interval");
    prev_speed = speed;
  }
  if (!(min_f2_ > 0.0))
    throw Error(ErrorCode::ValidationError, "flux not uniformly convex on working interval");
}

double FluxModel::max_second_deriv_on(double a, double b) const {
  double best = 0.0;
  for (int i = 0; i <= 256; ++i) best = std::max(best, second_deriv(a + (b - a) * i / 256.0));
  return best;
}

double FluxModel::min_second_deriv_on(double a, double b) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 256; ++i) best = std::min(best, second_deriv(a + (b - a) * i / 256.0));
  return best;
}

ShockStates shock_state_pair(const FluxModel& flux, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::NoRoot, "flux level m must be positive");
  if (flux.eval(flux.hi()) < m || flux.eval(flux.lo()) < m) {
    std::ostringstream os;
    os << "f(u) = " << m << " has no root inside [" << flux.lo() << ", " << flux.hi() << "]";
    throw Error(ErrorCode::NoRoot, os.str());
  }
  return {branch_root(flux, m, flux.hi()), branch_root(flux, m, flux.lo())};
}

JumpSpeed rankine_hugoniot_speed(const FluxModel& flux, double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= 1e-10 * scale) return {flux.deriv(0.5 * (a + b)), true};
  return {(flux.eval(a) - flux.eval(b)) / (a - b), false};
}

}  // namespace shockloop
