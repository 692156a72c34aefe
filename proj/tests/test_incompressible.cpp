#include <cmath>
#include <numbers>

#include "apstag/incompressible.hpp"
#include "doctest.h"

using namespace apstag;
using namespace apstag::incompressible;

namespace {

constexpr double kPi = std::numbers::pi;

VorticityField sample(int n, double (*f)(double, double)) {
  VorticityField w{n, Field(static_cast<std::size_t>(n) * n)};
  const double h = 2 * kPi / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) w.omega[j * n + i] = f((i + 0.5) * h, (j + 0.5) * h);
  }
  return w;
}

double maxdiff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("spectral Poisson inversion on single modes") {
  const auto w1 = sample(16, [](double x, double) { return std::sin(x); });
  CHECK(maxdiff(poisson_solve_spectral(w1), w1.omega) < 1e-13);
  const auto w2 = sample(16, [](double x, double y) { return 2 * std::cos(x) * std::cos(y); });
  const auto p2 = sample(16, [](double x, double y) { return std::cos(x) * std::cos(y); });
  CHECK(maxdiff(poisson_solve_spectral(w2), p2.omega) < 1e-13);
  const VorticityField zero{8, Field(64, 0.0)};
  CHECK(maxdiff(poisson_solve_spectral(zero), zero.omega) == 0.0);
}

TEST_CASE("non-zero mean vorticity is rejected") {
  const VorticityField w{8, Field(64, 0.1)};
  try {
    poisson_solve_spectral(w);
    FAIL("expected an exception");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::NonZeroMeanVorticity);
  }
}

TEST_CASE("velocity is the rotated gradient of the streamfunction") {
  // psi = sin x sin 2y  ->  omega = 5 psi
  const auto w = sample(32, [](double x, double y) { return 5 * std::sin(x) * std::sin(2 * y); });
  const auto [u, v] = velocity_from_omega(w);
  const auto ue = sample(32, [](double x, double y) { return 2 * std::sin(x) * std::cos(2 * y); });
  const auto ve = sample(32, [](double x, double y) { return -std::cos(x) * std::sin(2 * y); });
  CHECK(maxdiff(u, ue.omega) < 1e-13);
  CHECK(maxdiff(v, ve.omega) < 1e-13);
}

TEST_CASE("shear-flow velocity is solenoidal to roundoff") {
  const auto w = shear_flow_init(64);
  double mean = 0.0;
  for (double x : w.omega) mean += x;
  CHECK(std::abs(mean / w.omega.size()) < 1e-13);
  const auto [u, v] = velocity_from_omega(w);
  double umax = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) umax = std::max(umax, std::hypot(u[c], v[c]));
  CHECK(umax > 0.5);
  CHECK(umax < 2.0);
  // divergence via a second spectral pass: d_x u + d_y v computed from
  // the velocity's own streamfunction relation is identically zero, so
  // check it through centred periodic sums of Fourier derivatives instead
  const int n = 64;
  const double h = 2 * kPi / n;
  double div = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double dx = 0.0, dy = 0.0;
      // exact trigonometric-interpolant derivative (periodic sinc kernel)
      for (int m = 1; m < n; ++m) {
        const double cm = (m % 2 ? -1.0 : 1.0) * 0.5 / std::tan(0.5 * m * h);
        dx += cm * u[j * n + (i + m) % n];
        dy += cm * v[((j + m) % n) * n + i];
      }
      div = std::max(div, std::abs(dx + dy));
    }
  }
  CHECK(div < 1e-10);
}

TEST_CASE("Taylor-Green vortex is steady under RK4") {
  const auto w0 = sample(64, [](double x, double y) { return -2 * std::cos(x) * std::cos(y); });
  const RunResult r = run(w0, 1.0);
  CHECK(r.steps > 0);
  CHECK(maxdiff(r.w.omega, w0.omega) <= 1e-10);
  const VorticityField z{16, Field(256, 0.0)};
  CHECK(maxdiff(rk4_step(z, 0.1).omega, z.omega) == 0.0);
}

TEST_CASE("shear flow keeps energy and enstrophy over T = 6") {
  const auto w0 = shear_flow_init(160);
  const SpectralSolver s(160);
  const double e0 = kinetic_energy(s, w0.omega), z0 = enstrophy(w0.omega, 160);
  const RunResult r = run(w0, 6.0);
  CHECK(std::abs(kinetic_energy(s, r.w.omega) - e0) <= 1e-6 * e0);
  CHECK(std::abs(enstrophy(r.w.omega, 160) - z0) <= 1e-5 * z0);
}
