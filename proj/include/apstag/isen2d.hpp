#pragma once

#include <utility>

#include "apstag/core.hpp"
#include "apstag/elliptic.hpp"
#include "apstag/imex.hpp"
#include "apstag/isen1d.hpp"

namespace apstag::isen2d {

// Staggered-average momentum minus dt times the averaged divergence of the
// convective tensor m^k m / rho. Result on the opposite parity.
std::pair<Field, Field> momentum_star_2d(const ConservedState& state, double dt, double theta);

// rho_bar - dt * D(m) with m given at the cells of `state`.
Field rho_star_2d(const ConservedState& state, const Field& m1, const Field& m2, double dt,
                  double theta);

// rho(p) - k L p = rho_star on `grid` (five-point L).
Deviation elliptic_solve_2d(const Field& rho_star, const FieldGrid& grid, const GasModel& gas,
                            double k, const SolveOptions& opt = {}, SolveStats* stats = nullptr);

ConservedState step_first_order_2d(const ConservedState& state, const GasModel& gas,
                                   const RunConfig& cfg, double dt, StepInfo* info = nullptr);

ConservedState step_imex_2d(const ConservedState& state, const GasModel& gas,
                            const RunConfig& cfg, const ImexTableau& tableau, double dt,
                            StepInfo* info = nullptr);

// max |D u| over the opposite-parity cells, u = m / rho.
double divergence_monitor(const ConservedState& state);

}  // namespace apstag::isen2d
