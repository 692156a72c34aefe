#pragma once

#include "apstag/core.hpp"
#include "apstag/elliptic.hpp"
#include "apstag/imex.hpp"

namespace apstag {

struct StepInfo {
  int newton_iterations = 0;  // summed over all solves of the step
  int cg_iterations = 0;
};

namespace isen1d {

// m - (dt/dx) * limited slope of m^2/rho, at the cells of `state`.
Field momentum_star(const ConservedState& state, double dt, double theta);

// Solves rho(p) - k * D2x p = rho_star with rho(p) = (p/C)^(1/gamma).
Field pressure_solve(const Field& rho_star, const GasModel& gas, double k,
                     const SolveOptions& opt = {});

// First-order semi-implicit step; the result lives on the opposite parity.
ConservedState step_first_order(const ConservedState& state, const GasModel& gas,
                                const RunConfig& cfg, double dt, StepInfo* info = nullptr);

// IMEX step: predictor stages at the current cells, final stage on the
// staggered cells.
ConservedState step_imex(const ConservedState& state, const GasModel& gas, const RunConfig& cfg,
                         const ImexTableau& tableau, double dt, StepInfo* info = nullptr);

}  // namespace isen1d
}  // namespace apstag
