#pragma once

#include "shockloop/flux.hpp"
#include "shockloop/grid.hpp"
#include "shockloop/solver.hpp"

namespace shockloop {

/// Largest cell residual of the discrete Kruzkov inequality for entropy |u - k|
///   |u_i^+ - k| - |u_i - k| + (dt/dx) (G_{i+1/2} - G_{i-1/2}),
/// with G(a, b) = F(a v k, b v k) - F(a ^ k, b ^ k) and the ghost data at both ends.
double kruzkov_residual(const StepView& view, const FluxModel& flux, double k);

/// dx * sum (a_i - b_i)^+.
double positive_part_l1(const GridState& a, const GridState& b);

}  // namespace shockloop
