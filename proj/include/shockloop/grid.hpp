#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shockloop/flux.hpp"

namespace shockloop {

/// Cell averages on a uniform mesh of (0, L) at one time instant.
struct GridState {
  double length = 1.0;
  std::vector<double> values;
  double time = 0.0;

  GridState() = default;
  GridState(double L, std::vector<double> cells, double t = 0.0);

  std::size_t size() const { return values.size(); }
  double dx() const { return length / static_cast<double>(values.size()); }
  /// Left edge of cell i; computed as L*i/n so that edges are exact for dyadic meshes.
  double edge(std::size_t i) const {
    return length * static_cast<double>(i) / static_cast<double>(values.size());
  }
  double center(std::size_t i) const { return 0.5 * (edge(i) + edge(i + 1)); }
  double mass() const;
  double total_variation() const;
  bool same_mesh(const GridState& other) const;
};

/// Throws OutOfRange if any value lies outside the flux working interval.
void check_in_working_interval(const GridState& state, const FluxModel& flux);

/// Target shock: u_l(m) left of alpha, u_r(m) right of it, cell-exact averages.
GridState stationary_shock(double L, std::size_t n_cells, double alpha, double m,
                           const FluxModel& flux);

/// Stationary profile placed at beta (the controller target is not part of the state).
GridState shifted_shock(double L, std::size_t n_cells, double beta, double m,
                        const FluxModel& flux);

/// Cell-exact average of a single jump from `left` to `right` at `position`.
GridState step_profile(double L, std::size_t n_cells, double position, double left,
                       double right);

struct Perturbation {
  enum class Kind { Sine, Random };
  Kind kind = Kind::Sine;
  double amplitude = 0.0;
  int wavenumber = 1;       // sine: amplitude * sin(2 pi k x / L)
  std::uint64_t seed = 0;   // random: iid uniform in [-amplitude, amplitude]
};

struct PerturbedState {
  GridState state;
  double total_variation;
};

PerturbedState perturbed_shock(const GridState& base, const Perturbation& spec,
                               const FluxModel& flux);

/// `x,u` CSV with one row per cell center, 17 significant digits.
std::string to_csv(const GridState& state);

}  // namespace shockloop
