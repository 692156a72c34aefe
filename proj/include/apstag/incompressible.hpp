#pragma once

#include <memory>
#include <utility>

#include "apstag/core.hpp"

// Vorticity-streamfunction solver on [0, 2pi]^2, Fourier in space, RK4 in time.
// Samples sit at the cell centres (i + 1/2) h, h = 2 pi / n, so a fine run
// restricts onto any coarser finite-volume grid by block averaging.
namespace apstag::incompressible {

struct VorticityField {
  int n = 0;
  Field omega;  // index j * n + i
};

class SpectralSolver {
 public:
  explicit SpectralSolver(int n);
  ~SpectralSolver();
  SpectralSolver(const SpectralSolver&) = delete;
  SpectralSolver& operator=(const SpectralSolver&) = delete;

  int n() const { return n_; }

  // -Laplacian(psi) = omega with zero-mean psi; throws NonZeroMeanVorticity.
  Field poisson(const Field& omega) const;
  // u = d_y psi, v = -d_x psi
  std::pair<Field, Field> velocity(const Field& omega) const;
  // -u . grad(omega), 2/3-rule dealiased
  Field rhs(const Field& omega) const;
  Field rk4_step(const Field& omega, double dt) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
};

Field poisson_solve_spectral(const VorticityField& w);
std::pair<Field, Field> velocity_from_omega(const VorticityField& w);
VorticityField rk4_step(const VorticityField& w, double dt);

// Two sech^2 layers plus a cos(x) perturbation; the grid mean is removed.
VorticityField shear_flow_init(int n, double delta = 0.05, double width = 3.14159265358979323846 / 15.0);

double kinetic_energy(const SpectralSolver& s, const Field& omega);
double enstrophy(const Field& omega, int n);

struct RunResult {
  VorticityField w;
  int steps = 0;
  double dt = 0.0;
};

// Fixed step 0.2 h / max|u| from the initial field, shortened so T is hit exactly.
RunResult run(const VorticityField& w0, double t_final, double cfl = 0.2);

}  // namespace apstag::incompressible
