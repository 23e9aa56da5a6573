#pragma once

#include <span>

#include "shockloop/flux.hpp"

// Data-parallel inner loops of the finite-volume scheme.  Every kernel has a
// serial reference and an OpenMP variant; the two perform the same
// floating-point operations per cell, so results are bitwise identical.

namespace shockloop::kernels {

enum class Backend { Serial, OpenMP, Auto };

/// Auto picks OpenMP at or above this many cells (when built with OpenMP).
inline constexpr std::size_t kParallelThreshold = 8192;

bool openmp_available();
Backend resolve(Backend requested, std::size_t n_cells);

/// max |f'| over the cells and both ghost data.
double max_wave_speed_serial(const FluxModel& flux, std::span<const double> u, double left,
                             double right);
double max_wave_speed_omp(const FluxModel& flux, std::span<const double> u, double left,
                          double right);

/// Interface fluxes F_{i+1/2}, i = 0..n; `fluxes` has n+1 entries.  F_{1/2}
/// and F_{n+1/2} solve the ghost-cell Riemann problems against the data.
void godunov_fluxes_serial(const FluxModel& flux, std::span<const double> u, double left,
                           double right, std::span<double> fluxes);
void godunov_fluxes_omp(const FluxModel& flux, std::span<const double> u, double left,
                        double right, std::span<double> fluxes);

/// out_i = u_i - lambda (F_{i+1/2} - F_{i-1/2}).
void conservative_update_serial(std::span<const double> u, std::span<const double> fluxes,
                                double lambda, std::span<double> out);
void conservative_update_omp(std::span<const double> u, std::span<const double> fluxes,
                             double lambda, std::span<double> out);

double max_wave_speed(Backend b, const FluxModel& flux, std::span<const double> u, double left,
                      double right);
void godunov_fluxes(Backend b, const FluxModel& flux, std::span<const double> u, double left,
                    double right, std::span<double> fluxes);
void conservative_update(Backend b, std::span<const double> u, std::span<const double> fluxes,
                         double lambda, std::span<double> out);

}  // namespace shockloop::kernels
