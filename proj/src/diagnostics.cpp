#include "shockloop/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace shockloop {

namespace {

double entropy_flux(const FluxModel& flux, double a, double b, double k) {
  return godunov_flux(flux, std::max(a, k), std::max(b, k)) -
         godunov_flux(flux, std::min(a, k), std::min(b, k));
}

}  // namespace

double kruzkov_residual(const StepView& view, const FluxModel& flux, double k) {
  const std::size_t n = view.before.size();
  const double lambda = view.dt / view.dx;
  auto cell = [&](std::size_t j) {  // j = 0 and j = n + 1 are the ghosts
    return j == 0 ? view.left_datum : j == n + 1 ? view.right_datum : view.before[j - 1];
  };
  double worst = -INFINITY;
  double g_left = entropy_flux(flux, cell(0), cell(1), k);
  for (std::size_t i = 0; i < n; ++i) {
    const double g_right = entropy_flux(flux, cell(i + 1), cell(i + 2), k);
    const double r = std::abs(view.after[i] - k) - std::abs(view.before[i] - k) +
                     lambda * (g_right - g_left);
    worst = std::max(worst, r);
    g_left = g_right;
  }
  return worst;
}

double positive_part_l1(const GridState& a, const GridState& b) {
  if (!a.same_mesh(b)) throw Error(ErrorCode::MeshMismatch, "positive_part_l1 needs identical meshes");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::max(a.values[i] - b.values[i], 0.0);
  return sum * a.dx();
}

}  // namespace shockloop
