#include "shockloop/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "shockloop/csv.hpp"

namespace shockloop {

GridState::GridState(double L, std::vector<double> cells, double t)
    : length(L), values(std::move(cells)), time(t) {
  if (!(L > 0.0)) throw Error(ErrorCode::BadMesh, "domain length must be positive");
  if (values.size() < 4) throw Error(ErrorCode::BadMesh, "need at least 4 cells");
  if (!(t >= 0.0)) throw Error(ErrorCode::BadMesh, "time stamp must be nonnegative");
}

double GridState::mass() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * dx();
}

double GridState::total_variation() const {
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) tv += std::abs(values[i] - values[i - 1]);
  return tv;
}

bool GridState::same_mesh(const GridState& other) const {
  return length == other.length && values.size() == other.values.size();
}

void check_in_working_interval(const GridState& state, const FluxModel& flux) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!flux.contains(state.values[i])) {
      std::ostringstream os;
      os << "cell " << i << " value " << state.values[i] << " outside working interval ["
         << flux.lo() << ", " << flux.hi() << "]";
      throw Error(ErrorCode::OutOfRange, os.str());
    }
  }
}

GridState step_profile(double L, std::size_t n_cells, double position, double left,
                       double right) {
  if (!(position > 0.0 && position < L)) {
    std::ostringstream os;
    os << "jump position " << position << " not in (0, " << L << ")";
    throw Error(ErrorCode::BadPosition, os.str());
  }
  GridState state(L, std::vector<double>(n_cells, 0.0));
  const double dx = state.dx();
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double frac = std::clamp((position - state.edge(i)) / dx, 0.0, 1.0);
    if (frac == 1.0)
      state.values[i] = left;
    else if (frac == 0.0)
      state.values[i] = right;
    else
      state.values[i] = frac * left + (1.0 - frac) * right;
  }
  return state;
}

GridState stationary_shock(double L, std::size_t n_cells, double alpha, double m,
                           const FluxModel& flux) {
  const auto [ul, ur] = shock_state_pair(flux, m);
  return step_profile(L, n_cells, alpha, ul, ur);
}

GridState shifted_shock(double L, std::size_t n_cells, double beta, double m,
                        const FluxModel& flux) {
  return stationary_shock(L, n_cells, beta, m, flux);
}

PerturbedState perturbed_shock(const GridState& base, const Perturbation& spec,
                               const FluxModel& flux) {
  GridState out = base;
  if (spec.amplitude != 0.0) {
    const std::size_t n = base.size();
    if (spec.kind == Perturbation::Kind::Sine) {
      const double k = 2.0 * std::numbers::pi * spec.wavenumber / base.length;
      const double dx = base.dx();
      for (std::size_t i = 0; i < n; ++i) {
        // exact cell average of amplitude * sin(k x)
        const double avg = (std::cos(k * base.edge(i)) - std::cos(k * base.edge(i + 1))) / (k * dx);
        out.values[i] += spec.amplitude * avg;
      }
    } else {
      std::mt19937_64 gen(spec.seed);
      for (std::size_t i = 0; i < n; ++i) {
        // 53-bit uniform in [0,1); avoids implementation-defined distributions
        const double r = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        out.values[i] += spec.amplitude * (2.0 * r - 1.0);
      }
    }
  }
  check_in_working_interval(out, flux);
  const double tv = out.total_variation();
  return {std::move(out), tv};
}

std::string to_csv(const GridState& state) {
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += format_double(state.center(i));
    out += ',';
    out += format_double(state.values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace shockloop
