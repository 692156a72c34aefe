#include <cmath>
#include <numeric>

#include "apstag/elliptic.hpp"
#include "apstag/isen1d.hpp"
#include "doctest.h"

using namespace apstag;

namespace {

ConservedState smooth_state(int n, double eps) {
  ConservedState s;
  s.grid = FieldGrid::line(n, 0.0, 1.0);
  s.rho.resize(n);
  s.m1.resize(n);
  for (int j = 0; j < n; ++j) {
    const double x = s.grid.x(j);
    s.rho[j] = 1.0 + 0.2 * std::sin(2.0 * M_PI * x) + eps * eps * 0.1 * std::cos(4.0 * M_PI * x);
    s.m1[j] = s.rho[j] * (1.0 + 0.3 * std::cos(2.0 * M_PI * x));
  }
  return s;
}

double sum(const Field& f) { return std::accumulate(f.begin(), f.end(), 0.0); }

}  // namespace

TEST_CASE("momentum_star matches the printed formula on six cells") {
  ConservedState s;
  s.grid = FieldGrid::line(6, 0.0, 1.0);
  s.rho = {1.0, 1.0, 1.3, 0.8, 1.0, 1.0};
  s.m1 = {0.5, 0.5, 0.9, 0.1, 0.5, 0.5};
  const double dt = 0.01, theta = 1.5, lam = dt / s.grid.dx;
  const Field ms = isen1d::momentum_star(s, dt, theta);
  auto f = [&](int j) {
    j = (j + 6) % 6;
    return s.m1[j] * s.m1[j] / s.rho[j];
  };
  auto mm = [](double a, double b, double c) {
    if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
    if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
    return 0.0;
  };
  for (int j = 0; j < 6; ++j) {
    const double d = mm(theta * (f(j) - f(j - 1)), 0.5 * (f(j + 1) - f(j - 1)), theta * (f(j + 1) - f(j)));
    CHECK(ms[j] == s.m1[j] - lam * d);
  }
}

TEST_CASE("pressure_solve special cases") {
  const GasModel gas = GasModel::isentropic(2.0, 1.0);
  const Field p = isen1d::pressure_solve(Field(5, 1.3), gas, 0.7);
  for (double v : p) CHECK(v == doctest::Approx(1.69).epsilon(1e-14));
  const Field rs = {1.0, 1.2, 0.7};
  const Field p0 = isen1d::pressure_solve(rs, gas, 0.0);
  for (int j = 0; j < 3; ++j) CHECK(p0[j] == doctest::Approx(rs[j] * rs[j]));
}

TEST_CASE("pressure_solve agrees with a dense Newton oracle") {
  const GasModel gas = GasModel::isentropic(2.0, 1.0);
  const Field rs = {1.0, 1.1, 1.0, 0.9};
  const double k = 0.5;
  const Field p = isen1d::pressure_solve(rs, gas, k);
  // dense Newton on the full (non-deviation) unknown
  std::vector<double> q = {1.0, 1.21, 1.0, 0.81};
  for (int it = 0; it < 30; ++it) {
    std::vector<double> J(16, 0.0), F(4);
    for (int i = 0; i < 4; ++i) {
      const int ip = (i + 1) % 4, im = (i + 3) % 4;
      F[i] = -(std::sqrt(q[i]) - k * (q[ip] - 2 * q[i] + q[im]) - rs[i]);
      J[i * 4 + i] = 0.5 / std::sqrt(q[i]) + 2 * k;
      J[i * 4 + ip] -= k;
      J[i * 4 + im] -= k;
    }
    const auto d = dense_solve(J, F);
    for (int i = 0; i < 4; ++i) q[i] += d[i];
  }
  for (int i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-12));
}

TEST_CASE("constant state is a fixed point of both steps") {
  ConservedState s;
  s.grid = FieldGrid::line(16, 0.0, 1.0);
  s.rho.assign(16, 1.7);
  s.m1.assign(16, -0.4);
  const GasModel gas = GasModel::isentropic(1.4, 0.01);
  RunConfig cfg;
  const ConservedState a = isen1d::step_first_order(s, gas, cfg, 0.01);
  const ConservedState b = isen1d::step_imex(s, gas, cfg, ImexTableau::second_order(2.25), 0.01);
  for (int j = 0; j < 16; ++j) {
    CHECK(a.rho[j] == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(a.m1[j] == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(b.rho[j] == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(b.m1[j] == doctest::Approx(-0.4).epsilon(1e-14));
  }
  CHECK(a.grid.parity == Parity::HalfInteger);
}

TEST_CASE("first-order pair through the IMEX driver reproduces the first-order step") {
  for (double eps : {1.0, 0.05, 1e-4}) {
    ConservedState s = smooth_state(40, eps);
    const GasModel gas = GasModel::isentropic(2.0, eps);
    RunConfig cfg;
    const double dt = time_step(s, gas, cfg).dt;
    for (int step = 0; step < 3; ++step) {
      const ConservedState a = isen1d::step_first_order(s, gas, cfg, dt);
      const ConservedState b = isen1d::step_imex(s, gas, cfg, ImexTableau::first_order(), dt);
      for (int j = 0; j < 40; ++j) {
        CHECK(a.rho[j] == doctest::Approx(b.rho[j]).epsilon(1e-13));
        CHECK(a.m1[j] == doctest::Approx(b.m1[j]).epsilon(1e-12));
      }
      s = a;
    }
  }
}

TEST_CASE("mass and momentum are conserved and parity alternates") {
  for (int order = 1; order <= 2; ++order) {
    ConservedState s = smooth_state(50, 0.1);
    const GasModel gas = GasModel::isentropic(2.0, 0.1);
    RunConfig cfg;
    const double m0 = sum(s.rho), q0 = sum(s.m1);
    const ImexTableau tab = ImexTableau::second_order(2.25);
    for (int step = 0; step < 10; ++step) {
      const double dt = time_step(s, gas, cfg).dt;
      s = order == 1 ? isen1d::step_first_order(s, gas, cfg, dt) : isen1d::step_imex(s, gas, cfg, tab, dt);
    }
    CHECK(std::abs(sum(s.rho) - m0) <= 1e-12 * std::abs(m0));
    CHECK(std::abs(sum(s.m1) - q0) <= 1e-12 * std::abs(q0));
    CHECK(s.grid.parity == Parity::Integer);
  }
}

TEST_CASE("newton and linearised paths agree at second order in dt") {
  const double eps = 0.3;
  const GasModel gas = GasModel::isentropic(2.0, eps);
  const ConservedState s = smooth_state(64, eps);
  double prev = 0.0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    RunConfig a, b;
    b.pressure_path = PressurePath::Linearized;
    const ConservedState x = isen1d::step_first_order(s, gas, a, dt);
    const ConservedState y = isen1d::step_first_order(s, gas, b, dt);
    double d = 0.0;
    for (int j = 0; j < 64; ++j) d = std::max(d, std::abs(x.rho[j] - y.rho[j]));
    if (prev > 0.0) CHECK(prev / d > 3.9);
    prev = d;
  }
}
