#include <cmath>

#include "apstag/core.hpp"
#include "apstag/riemann.hpp"
#include "doctest.h"

using namespace apstag;
using namespace apstag::riemann;

// star values for the standard test problems, from published tables
TEST_CASE("Sod star state") {
  const StarState s = solve_star({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4);
  CHECK(s.p == doctest::Approx(0.30313).epsilon(1e-4));
  CHECK(s.u == doctest::Approx(0.92745).epsilon(1e-4));
  CHECK(s.rho_left == doctest::Approx(0.42632).epsilon(1e-4));
  CHECK(s.rho_right == doctest::Approx(0.26557).epsilon(1e-4));
}

TEST_CASE("two rarefactions and two shocks") {
  const StarState r = solve_star({1.0, -2.0, 0.4}, {1.0, 2.0, 0.4}, 1.4);
  CHECK(r.p == doctest::Approx(0.00189).epsilon(1e-2));
  CHECK(std::abs(r.u) < 1e-12);
  const StarState s = solve_star({5.99924, 19.5975, 460.894}, {5.99242, -6.19633, 46.0950}, 1.4);
  CHECK(s.p == doctest::Approx(1691.64).epsilon(1e-4));
  CHECK(s.u == doctest::Approx(8.68975).epsilon(1e-4));
}

TEST_CASE("sampled solution is consistent with the wave pattern") {
  const Primitive L{1.0, 0.0, 1.0}, R{0.125, 0.0, 0.1};
  const Waves w = wave_positions(L, R, 1.4, 0.5, 0.2);
  CHECK(w.right_shock);
  CHECK_FALSE(w.left_shock);
  CHECK(w.left_head < w.left_tail);
  CHECK(w.left_tail < w.contact);
  CHECK(w.contact < w.right_head);
  CHECK(sample(L, R, 1.4, 0.5, 0.2, w.left_head - 1e-9).rho == doctest::Approx(1.0));
  CHECK(sample(L, R, 1.4, 0.5, 0.2, w.right_head + 1e-9).rho == doctest::Approx(0.125));
  // the fan joins both neighbours continuously
  const Primitive a = sample(L, R, 1.4, 0.5, 0.2, w.left_tail - 1e-9);
  const Primitive b = sample(L, R, 1.4, 0.5, 0.2, w.left_tail + 1e-9);
  CHECK(a.rho == doctest::Approx(b.rho).epsilon(1e-6));
  CHECK(a.u == doctest::Approx(b.u).epsilon(1e-6));
  CHECK(a.p == doctest::Approx(b.p).epsilon(1e-6));
  // Rankine-Hugoniot mass balance across the shock
  const StarState s = solve_star(L, R, 1.4);
  const double S = (w.right_head - 0.5) / 0.2;
  CHECK(s.rho_right * (s.u - S) == doctest::Approx(R.rho * (R.u - S)).epsilon(1e-10));
}

TEST_CASE("vacuum generating data are rejected") {
  CHECK_THROWS_AS(solve_star({1.0, -10.0, 0.4}, {1.0, 10.0, 0.4}, 1.4), SolverError);
}
