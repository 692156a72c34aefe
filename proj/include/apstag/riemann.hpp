#pragma once

#include <vector>

// Exact solution of the ideal-gas Riemann problem (eps = 1). Used as an
// oracle for shock-tube runs.
namespace apstag::riemann {

struct Primitive {
  double rho = 1.0, u = 0.0, p = 1.0;
};

struct StarState {
  double p = 0.0, u = 0.0;
  double rho_left = 0.0, rho_right = 0.0;
};

// Newton iteration on the pressure function; throws SolverError on vacuum.
StarState solve_star(const Primitive& left, const Primitive& right, double gamma);

// Wave positions at time t for a discontinuity initially at x0.
struct Waves {
  double left_head = 0.0, left_tail = 0.0;  // equal for a left shock
  double contact = 0.0;
  double right_tail = 0.0, right_head = 0.0;
  bool left_shock = false, right_shock = false;
};

Waves wave_positions(const Primitive& left, const Primitive& right, double gamma, double x0,
                     double t);

Primitive sample(const Primitive& left, const Primitive& right, double gamma, double x0, double t,
                 double x);

}  // namespace apstag::riemann
