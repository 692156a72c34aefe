#pragma once

#include <utility>

#include "apstag/core.hpp"
#include "apstag/elliptic.hpp"
#include "apstag/imex.hpp"
#include "apstag/isen1d.hpp"

// Full Euler in energy form, 1D and 2D. All fields of a 1D state leave m2 empty.
namespace apstag::euler {

// Staggered average of m minus dt * D of the explicit momentum flux
// m (x) m / rho - (gamma-1)/2 |m|^2/rho I.
std::pair<Field, Field> m_star_full(const ConservedState& state, const GasModel& gas, double dt,
                                    double theta);

// Staggered average of E minus dt * D of -(gamma-1)/2 eps^2 |m|^2 m / rho^2.
Field e_star(const ConservedState& state, const GasModel& gas, double dt, double theta);

// e_star minus dt * gamma * D(h m) with h = E/rho and m given at the cells of `state`.
Field e_star_star(const ConservedState& state, const GasModel& gas, const Field& m1,
                  const Field& m2, double dt, double theta);

// (I - kappa L_a) E = rhs on `grid`. In 1D `coef` holds face values (face k
// between cells k and k+1); in 2D it holds cell values averaged onto faces.
struct EnergySystem {
  FieldGrid grid;
  Field coef;
  double kappa = 0.0;
  Field rhs;
};

Deviation energy_elliptic_solve(const EnergySystem& sys, const SolveOptions& opt = {},
                                SolveStats* stats = nullptr);

// L_a applied to E, matching energy_elliptic_solve.
Field energy_operator(const EnergySystem& sys, const Field& E);

ConservedState step_first_order_full(const ConservedState& state, const GasModel& gas,
                                     const RunConfig& cfg, double dt, StepInfo* info = nullptr);

ConservedState step_imex_full(const ConservedState& state, const GasModel& gas,
                              const RunConfig& cfg, const ImexTableau& tableau, double dt,
                              StepInfo* info = nullptr);

// Pressure with the kinetic energy lagged from the previous state, averaged
// onto the parity of E_new. Diagnostic only.
Field lagged_pressure(const Field& E_new, const ConservedState& old, const GasModel& gas,
                      double theta);

}  // namespace apstag::euler
