#pragma once

#include <vector>

namespace apstag {

// Additive IMEX Runge-Kutta pair. `at`/`bt` weight the explicit (convective)
// terms, `a`/`b` the stiff ones. Both parts are globally stiffly accurate:
// the last row of each matrix equals its weight vector.
struct ImexTableau {
  int stages = 0;
  std::vector<std::vector<double>> at;
  std::vector<std::vector<double>> a;
  std::vector<double> bt;
  std::vector<double> b;
  int order = 1;

  static ImexTableau first_order();

  // Three-stage second-order pair with abscissa c. Throws DegenerateTableau for
  // c == 1 or c == 1/2.
  static ImexTableau second_order(double c);

  // Stability function of the implicit part, R(z) = 1 + z b^T (I - z A)^{-1} 1.
  double implicit_stability(double z) const;

  // Largest |sum_l a_kl - sum_l at_kl| over all rows (0 for a consistent pair).
  double row_sum_mismatch() const;
};

}  // namespace apstag
