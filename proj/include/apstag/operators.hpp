#pragma once

#include "apstag/core.hpp"

namespace apstag::ops {

// Returns the argument of smallest modulus when all three share a sign, else 0.
double minmod3(double a, double b, double c);

// --- 1D, periodic -----------------------------------------------------------
//
// All 1D differences are undivided (no 1/dx factor); callers multiply by
// dt/dx themselves.

// Limited slope dx * D^x f_j = MM(theta (f_j - f_{j-1}), (f_{j+1} - f_{j-1})/2,
// theta (f_{j+1} - f_j)).
Field slope(const Field& f, double theta);

// Nessyahu-Tadmor staggered average onto the opposite parity; cell k of the
// result sits between input cells k + offset and k + offset + 1.
Field staggered_average_1d(const Field& f, const Field& slopes, int offset);

// h_{j+1} - 2 h_j + h_{j-1}
Field d2x(const Field& f);

// (f_{j+1} - f_{j-1}) / 2
Field centered_diff(const Field& f);

// Difference across each cell of the opposite parity:
// out_k = f_{k+offset+1} - f_{k+offset}.
Field stagger_diff(const Field& f, int offset);

// Difference at each source cell i of a field living on the opposite parity
// (which was produced with the given offset): out_i = p_{i-offset} - p_{i-offset-1}.
Field unstagger_diff(const Field& p, int offset);

// --- 2D, periodic -----------------------------------------------------------
//
// 2D operators are divided by dx / dy. `grid` always describes the parity the
// input lives on.

Field slope_x(const Field& f, const FieldGrid& grid, double theta);
Field slope_y(const Field& f, const FieldGrid& grid, double theta);

// Jiang-Tadmor staggered average; x-slopes enter the first 1/16 group and
// y-slopes the second.
Field staggered_average_2d(const Field& f, const Field& sx, const Field& sy,
                           const FieldGrid& grid);

// Four-term averaged divergence onto the opposite parity.
Field staggered_div_2d(const Field& m1, const Field& m2, const FieldGrid& grid);

// Averaged x (resp. y) difference of a scalar onto the opposite parity, i.e.
// staggered_div_2d(p, 0) and staggered_div_2d(0, p).
Field staggered_grad_x(const Field& p, const FieldGrid& grid);
Field staggered_grad_y(const Field& p, const FieldGrid& grid);

// Gradient at the cells of `centers` of a field stored on centers.flipped():
// averages of the two staggered differences surrounding each centre.
Field unstaggered_grad_x(const Field& p_stag, const FieldGrid& centers);
Field unstaggered_grad_y(const Field& p_stag, const FieldGrid& centers);

// Central differences (h_{i+1} - h_{i-1}) / (2 dx) on one parity.
Field centered_dx(const Field& f, const FieldGrid& grid);
Field centered_dy(const Field& f, const FieldGrid& grid);

// Five-point Laplacian.
Field laplacian_2d(const Field& p, const FieldGrid& grid);

// Flux-form div(a grad E) with arithmetic-mean face coefficients.
// Throws NonPositiveCoefficient if any a <= 0.
Field laplacian_varcoef(const Field& E, const Field& a, const FieldGrid& grid);

// Wide Laplacian Dw1 Dw1 p + Dw2 Dw2 p, i.e. the five-point stencil at stride 2
// with weights 1/(4 dx^2), 1/(4 dy^2).
Field wide_laplacian_2d(const Field& p, const FieldGrid& grid);

// Dw1(a Dw1 E) + Dw2(a Dw2 E); the coefficient sits at the midpoint cell of
// each stride-2 face. No positivity check.
Field wide_varcoef_2d(const Field& E, const Field& a, const FieldGrid& grid);

}  // namespace apstag::ops
