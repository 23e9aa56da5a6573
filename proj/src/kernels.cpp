#include "shockloop/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace shockloop::kernels {

bool openmp_available() {
#if defined(SHOCKLOOP_HAVE_OPENMP)
  return true;
#else
  return false;
#endif
}

Backend resolve(Backend requested, std::size_t n_cells) {
  if (requested == Backend::Auto)
    return openmp_available() && n_cells >= kParallelThreshold ? Backend::OpenMP : Backend::Serial;
  if (requested == Backend::OpenMP && !openmp_available()) return Backend::Serial;
  return requested;
}

double max_wave_speed_serial(const FluxModel& flux, std::span<const double> u, double left,
                             double right) {
  double s = std::max(std::abs(flux.deriv(left)), std::abs(flux.deriv(right)));
  for (double v : u) s = std::max(s, std::abs(flux.deriv(v)));
  return s;
}

double max_wave_speed_omp(const FluxModel& flux, std::span<const double> u, double left,
                          double right) {
  double s = std::max(std::abs(flux.deriv(left)), std::abs(flux.deriv(right)));
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for reduction(max : s) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) s = std::max(s, std::abs(flux.deriv(u[i])));
  return s;
}

void godunov_fluxes_serial(const FluxModel& flux, std::span<const double> u, double left,
                           double right, std::span<double> fluxes) {
  const std::size_t n = u.size();
  fluxes[0] = godunov_flux(flux, left, u[0]);
  for (std::size_t i = 1; i < n; ++i) fluxes[i] = godunov_flux(flux, u[i - 1], u[i]);
  fluxes[n] = godunov_flux(flux, u[n - 1], right);
}

void godunov_fluxes_omp(const FluxModel& flux, std::span<const double> u, double left,
                        double right, std::span<double> fluxes) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  fluxes[0] = godunov_flux(flux, left, u[0]);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 1; i < n; ++i) fluxes[i] = godunov_flux(flux, u[i - 1], u[i]);
  fluxes[n] = godunov_flux(flux, u[n - 1], right);
}

void conservative_update_serial(std::span<const double> u, std::span<const double> fluxes,
                                double lambda, std::span<double> out) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] - lambda * (fluxes[i + 1] - fluxes[i]);
}

void conservative_update_omp(std::span<const double> u, std::span<const double> fluxes,
                             double lambda, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = u[i] - lambda * (fluxes[i + 1] - fluxes[i]);
}

double max_wave_speed(Backend b, const FluxModel& flux, std::span<const double> u, double left,
                      double right) {
  return b == Backend::OpenMP ? max_wave_speed_omp(flux, u, left, right)
                              : max_wave_speed_serial(flux, u, left, right);
}

void godunov_fluxes(Backend b, const FluxModel& flux, std::span<const double> u, double left,
                    double right, std::span<double> fluxes) {
  if (b == Backend::OpenMP)
    godunov_fluxes_omp(flux, u, left, right, fluxes);
  else
    godunov_fluxes_serial(flux, u, left, right, fluxes);
}

void conservative_update(Backend b, std::span<const double> u, std::span<const double> fluxes,
                         double lambda, std::span<double> out) {
  if (b == Backend::OpenMP)
    conservative_update_omp(u, fluxes, lambda, out);
  else
    conservative_update_serial(u, fluxes, lambda, out);
}

}  // namespace shockloop::kernels
