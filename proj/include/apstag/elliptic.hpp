#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "apstag/core.hpp"

namespace apstag {

// Periodic tridiagonal system lower_i x_{i-1} + diag_i x_i + upper_i x_{i+1} = rhs_i
// (indices wrap). Thomas sweep plus a Sherman-Morrison correction for the two
// corner entries. Throws SingularSystem on a zero pivot.
Field cyclic_tridiag_solve(const Field& lower, const Field& diag, const Field& upper,
                           const Field& rhs);

// Same system restricted to the chains j, j+s, j+2s, ... (all wrapping). With
// s = 2 and even n this solves two independent cycles of length n/2.
Field cyclic_tridiag_solve_strided(const Field& lower, const Field& diag, const Field& upper,
                                   const Field& rhs, int stride);

// Gaussian elimination with partial pivoting on a dense row-major n x n matrix.
// Used as a reference in tests; O(n^3).
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b);

// Sum in a fixed order so repeated runs give bit-identical iterates.
double dot(const Field& a, const Field& b);

enum class Stencil { Compact, Wide };
enum class PreconditionerKind { None, Jacobi, Spectral };

// Inverse of the constant-coefficient operator d - k L on a periodic 2D grid,
// applied through FFTs (L the compact or wide five-point Laplacian).
class SpectralPreconditioner {
 public:
  SpectralPreconditioner(const FieldGrid& grid, Stencil stencil);
  ~SpectralPreconditioner();
  SpectralPreconditioner(const SpectralPreconditioner&) = delete;
  SpectralPreconditioner& operator=(const SpectralPreconditioner&) = delete;

  void set_coefficients(double d, double k) { d_ = d; k_ = k; }
  Field apply(const Field& r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double d_ = 1.0, k_ = 0.0;
};

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // final ||r||_2 / ||b||_2
};

using LinearOp = std::function<Field(const Field&)>;

// Preconditioned conjugate gradients; x holds the initial guess on entry.
// Stops when ||r||_2 <= tol * ||b||_2 (or ||r||_2 <= tol when b = 0) and throws
// CgStagnation after max_iter iterations.
CgResult conjugate_gradient(const LinearOp& apply, const Field& b, Field& x,
                            const LinearOp& precond, double tol, int max_iter);

struct SolveOptions {
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  bool linearized = false;  // single Newton step from the explicit guess
  double cg_tol = 1e-11;
  int cg_max_iter = 0;  // 0 = 10 * unknowns
  PreconditionerKind precond = PreconditionerKind::Spectral;
};

SolveOptions solve_options(const RunConfig& cfg);

struct SolveStats {
  int newton_iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;
};

// Unknown split as ref + delta with a constant ref. Differences of the
// unknown should be taken on delta to avoid cancellation when it is scaled
// by 1/eps^2.
struct Deviation {
  double ref = 0.0;
  Field delta;

  Field full() const;
};

// Solves rho(p) - k * (p_{j+s} - 2 p_j + p_{j-s}) = rhs for p, where
// rho(p) = (p / C)^(1/gamma). Newton with step halving on non-positive p.
Deviation pressure_solve_1d(const Field& rhs, double C, double gamma, double k, int stride,
                            const SolveOptions& opt, SolveStats* stats = nullptr);

// 2D counterpart: rho(p) - k L p = rhs with L compact or wide (divided).
Deviation pressure_solve_2d(const Field& rhs, const FieldGrid& grid, double C, double gamma,
                            double k, Stencil stencil, const SolveOptions& opt,
                            SolveStats* stats = nullptr);

// E - k [f_j (E_{j+s} - E_j) - f_{j-s} (E_j - E_{j-s})] = rhs, with f_j the
// coefficient on the face between j and j+s. Throws NonPositiveCoefficient.
Deviation energy_solve_1d(const Field& rhs, const Field& face_coef, double k, int stride);

// E - k div(a grad E) = rhs in 2D. Compact uses arithmetic face means of the
// cell coefficient a; Wide uses Dw(a Dw E).
Deviation energy_solve_2d(const Field& rhs, const Field& a, const FieldGrid& grid, double k,
                          Stencil stencil, const SolveOptions& opt,
                          SolveStats* stats = nullptr);

}  // namespace apstag
