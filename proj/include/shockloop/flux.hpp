#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "shockloop/error.hpp"

namespace shockloop {

enum class FluxKind { Burgers, Cosh };

/// Uniformly convex flux normalized so that min f = f(0) = 0.
///
/// Burgers: f(u) = a u^2 / 2.  Cosh: f(u) = a (cosh u - 1).  The working
/// interval is the range of states on which the convexity bounds (m_f, M_f)
/// were certified by sampling; every solver state must stay inside it.
class FluxModel {
 public:
  static FluxModel burgers(double scale = 1.0);
  static FluxModel cosh(double scale = 1.0);
  /// Looks up a built-in flux by name ("burgers" or "cosh").
  static FluxModel by_name(std::string_view name, double scale = 1.0);

  /// Same flux with a new working interval; re-certifies the invariants.
  FluxModel with_working_interval(double lo, double hi) const;
  /// Working interval [-3 w, 3 w] with w = max(|u_l(m)|, |u_r(m)|).
  FluxModel for_level(double m) const;

  double eval(double u) const {
    switch (kind_) {
      case FluxKind::Burgers:
        return 0.5 * scale_ * u * u;
      case FluxKind::Cosh:
        return scale_ * (std::cosh(u) - 1.0);
    }
    return 0.0;
  }
  double deriv(double u) const {
    switch (kind_) {
      case FluxKind::Burgers:
        return scale_ * u;
      case FluxKind::Cosh:
        return scale_ * std::sinh(u);
    }
    return 0.0;
  }
  double second_deriv(double u) const {
    switch (kind_) {
      case FluxKind::Burgers:
        return scale_;
      case FluxKind::Cosh:
        return scale_ * std::cosh(u);
    }
    return 0.0;
  }
  /// Inverse of f' (the rarefaction fan profile).
  double deriv_inverse(double speed) const {
    switch (kind_) {
      case FluxKind::Burgers:
        return speed / scale_;
      case FluxKind::Cosh:
        return std::asinh(speed / scale_);
    }
    return 0.0;
  }

  FluxKind kind() const { return kind_; }
  std::string name() const;
  double scale() const { return scale_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool contains(double u) const { return u >= lo_ && u <= hi_; }
  /// min f'' on the working interval.
  double min_convexity() const { return min_f2_; }
  /// max f'' on the working interval.
  double max_convexity() const { return max_f2_; }
  /// max f'' over an arbitrary interval, by sampling.
  double max_second_deriv_on(double a, double b) const;
  double min_second_deriv_on(double a, double b) const;

 private:
  FluxModel(FluxKind kind, double scale) : kind_(kind), scale_(scale) {}
  void certify();

  FluxKind kind_;
  double scale_;
  double lo_ = -3.0;
  double hi_ = 3.0;
  double min_f2_ = 0.0;
  double max_f2_ = 0.0;
};

struct ShockStates {
  double left;   // u_l(m) > 0, f'(u_l) > 0
  double right;  // u_r(m) < 0, f'(u_r) < 0
};

/// The two roots of f(u) = m, one on each side of the sonic point.
ShockStates shock_state_pair(const FluxModel& flux, double m);

struct JumpSpeed {
  double value;
  bool degenerate;  // |a - b| too small; value is f'((a+b)/2)
};

JumpSpeed rankine_hugoniot_speed(const FluxModel& flux, double a, double b);

/// Exact Riemann interface flux; relies on min f = f(0).
inline double godunov_flux(const FluxModel& flux, double a, double b) {
  return std::max(flux.eval(std::max(a, 0.0)), flux.eval(std::min(b, 0.0)));
}

}  // namespace shockloop
