#include "apstag/imex.hpp"

#include <algorithm>
#include <cmath>

#include "apstag/core.hpp"

namespace apstag {

ImexTableau ImexTableau::first_order() {
  ImexTableau t;
  t.stages = 2;
  t.order = 1;
  t.at = {{0.0, 0.0}, {1.0, 0.0}};
  t.a = {{0.0, 0.0}, {0.0, 1.0}};
  t.bt = {1.0, 0.0};
  t.b = {0.0, 1.0};
  return t;
}

ImexTableau ImexTableau::second_order(double c) {
  if (std::abs(c - 1.0) < 1e-14 || std::abs(c - 0.5) < 1e-14) {
    throw SolverError(ErrorCode::DegenerateTableau, "abscissa c must differ from 1 and 1/2");
  }
  const double g = (c - 0.5) / (c - 1.0);
  const double w = 1.0 / (2.0 * c);
  ImexTableau t;
  t.stages = 3;
  t.order = 2;
  t.at = {{0.0, 0.0, 0.0}, {c, 0.0, 0.0}, {1.0 - w, w, 0.0}};
  // The diagonal entry of row 2 is c itself: this keeps the row sum equal to c
  // and makes the implicit part L-stable (R(-inf) = 0).
  t.a = {{0.0, 0.0, 0.0}, {0.0, c, 0.0}, {0.0, 1.0 - g, g}};
  t.bt = t.at[2];
  t.b = t.a[2];
  return t;
}

double ImexTableau::implicit_stability(double z) const {
  // Solve (I - zA) y = 1 by forward substitution (A is lower triangular).
  std::vector<double> y(stages, 0.0);
  for (int k = 0; k < stages; ++k) {
    double rhs = 1.0;
    for (int l = 0; l < k; ++l) rhs += z * a[k][l] * y[l];
    y[k] = rhs / (1.0 - z * a[k][k]);
  }
  double r = 1.0;
  for (int k = 0; k < stages; ++k) r += z * b[k] * y[k];
  return r;
}

double ImexTableau::row_sum_mismatch() const {
  double worst = 0.0;
  for (int k = 0; k < stages; ++k) {
    double s = 0.0, st = 0.0;
    for (int l = 0; l < stages; ++l) {
      s += a[k][l];
      st += at[k][l];
    }
    worst = std::max(worst, std::abs(s - st));
  }
  return worst;
}

}  // namespace apstag
