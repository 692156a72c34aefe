#include <cmath>

#include "apstag/elliptic.hpp"
#include "apstag/operators.hpp"
#include "doctest.h"

using namespace apstag;

namespace {

std::vector<double> dense_cyclic(const Field& lo, const Field& di, const Field& up, int s) {
  const int n = static_cast<int>(di.size());
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    a[i * n + i] += di[i];
    a[i * n + ((i - s) % n + n) % n] += lo[i];
    a[i * n + (i + s) % n] += up[i];
  }
  return a;
}

}  // namespace

TEST_CASE("dense solve with pivoting") {
  std::vector<double> a = {0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 0.0};
  const auto x = dense_solve(a, {7.0, 6.0, 4.0});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(x[2] == doctest::Approx(3.0));
  CHECK_THROWS_AS(dense_solve({1.0, 2.0, 2.0, 4.0}, {1.0, 2.0}), SolverError);
}

TEST_CASE("cyclic tridiagonal matches dense elimination") {
  for (int n : {1, 2, 3, 7, 12}) {
    for (int s : {1, 2}) {
      Field lo(n), di(n), up(n), r(n);
      for (int i = 0; i < n; ++i) {
        lo[i] = -0.3 - 0.1 * std::sin(i);
        up[i] = -0.7 + 0.05 * i;
        di[i] = 3.0 + std::cos(i);
        r[i] = std::sin(1.3 * i) + 0.2;
      }
      const Field x = cyclic_tridiag_solve_strided(lo, di, up, r, s);
      const auto ref = dense_solve(dense_cyclic(lo, di, up, s), r);
      for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("CG solves an SPD system with and without preconditioning") {
  const FieldGrid g = FieldGrid::square(16, 12, 0.0, 1.0, 0.0, 1.0);
  const double k = 3.0;
  auto apply = [&](const Field& x) {
    Field y = ops::laplacian_2d(x, g);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] - k * y[i];
    return y;
  };
  Field b(g.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(0.1 * i * i);
  Field x0;
  const CgResult plain = conjugate_gradient(apply, b, x0, nullptr, 1e-12, 2000);
  SpectralPreconditioner pc(g, Stencil::Compact);
  pc.set_coefficients(2.0, k);
  Field x1;
  const CgResult pre = conjugate_gradient(apply, b, x1, [&](const Field& r) { return pc.apply(r); },
                                          1e-12, 2000);
  // the spectral inverse is exact for constant coefficients
  CHECK(pre.iterations <= 2);
  CHECK(plain.iterations > pre.iterations);
  const Field r = apply(x1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(r[i] == doctest::Approx(b[i]).epsilon(1e-9));
    CHECK(x0[i] == doctest::Approx(x1[i]).epsilon(1e-8));
  }
  Field x2;
  CHECK_THROWS_AS(conjugate_gradient(apply, b, x2, nullptr, 1e-14, 3), SolverError);
}

TEST_CASE("wide spectral preconditioner inverts the wide operator") {
  const FieldGrid g = FieldGrid::square(10, 8, 0.0, 2.0, 0.0, 1.0);
  SpectralPreconditioner pc(g, Stencil::Wide);
  pc.set_coefficients(0.5, 7.0);
  Field x(g.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(0.7 * i);
  Field y = ops::wide_laplacian_2d(x, g);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.5 * x[i] - 7.0 * y[i];
  const Field back = pc.apply(y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
}

TEST_CASE("1D pressure solve satisfies its equation") {
  const int n = 40;
  Field rhs(n);
  for (int j = 0; j < n; ++j) rhs[j] = 1.0 + 0.3 * std::sin(2.0 * M_PI * j / n);
  for (int s : {1, 2}) {
    for (double k : {0.0, 0.7, 1e10}) {
      SolveOptions opt;
      SolveStats st;
      const Deviation d = pressure_solve_1d(rhs, 1.0, 2.0, k, s, opt, &st);
      const Field p = d.full();
      for (int j = 0; j < n; ++j) {
        const double lap = d.delta[(j + s) % n] - 2.0 * d.delta[j] + d.delta[(j - s + n) % n];
        CHECK(std::sqrt(p[j]) - k * lap == doctest::Approx(rhs[j]).epsilon(1e-10));
      }
      CHECK(st.newton_iterations < 20);
    }
  }
}

TEST_CASE("linearised path stops after one Newton step") {
  const int n = 16;
  Field rhs(n);
  for (int j = 0; j < n; ++j) rhs[j] = 1.0 + 0.5 * std::cos(2.0 * M_PI * j / n);
  SolveOptions opt;
  opt.linearized = true;
  SolveStats st;
  pressure_solve_1d(rhs, 1.0, 1.4, 0.3, 1, opt, &st);
  CHECK(st.newton_iterations == 1);
}

TEST_CASE("non-positive right-hand side is rejected") {
  Field rhs = {1.0, -0.1, 1.0, 1.0};
  try {
    pressure_solve_1d(rhs, 1.0, 2.0, 1.0, 1, SolveOptions{});
    FAIL("expected error");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::NonPositiveDensity);
  }
}

TEST_CASE("Newton cap raises NewtonDivergence") {
  const int n = 16;
  Field rhs(n);
  for (int j = 0; j < n; ++j) rhs[j] = 1.0 + 0.5 * std::cos(2.0 * M_PI * j / n);
  SolveOptions opt;
  opt.newton_max_iter = 1;
  opt.newton_tol = 1e-16;
  try {
    pressure_solve_1d(rhs, 1.0, 1.4, 50.0, 1, opt);
    FAIL("expected error");
  } catch (const SolverError& e) {
    CHECK(e.code() == ErrorCode::NewtonDivergence);
  }
}

TEST_CASE("2D pressure solve with every preconditioner") {
  const FieldGrid g = FieldGrid::square(12, 10, 0.0, 1.0, 0.0, 1.0);
  Field rhs(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      rhs[g.index(i, j)] = 1.0 + 0.2 * std::sin(2.0 * M_PI * g.x(i)) * std::cos(2.0 * M_PI * g.y(j));
  for (Stencil st : {Stencil::Compact, Stencil::Wide}) {
    for (auto pk : {PreconditionerKind::None, PreconditionerKind::Jacobi, PreconditionerKind::Spectral}) {
      SolveOptions opt;
      opt.precond = pk;
      const double k = 0.05;
      const Deviation d = pressure_solve_2d(rhs, g, 1.0, 1.4, k, st, opt);
      const Field p = d.full();
      const Field l = st == Stencil::Compact ? ops::laplacian_2d(d.delta, g) : ops::wide_laplacian_2d(d.delta, g);
      for (std::size_t c = 0; c < rhs.size(); ++c)
        CHECK(std::pow(p[c], 1.0 / 1.4) - k * l[c] == doctest::Approx(rhs[c]).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy solves match the operator definition") {
  const int n = 20;
  Field rhs(n), f(n);
  for (int j = 0; j < n; ++j) {
    rhs[j] = 2.0 + std::sin(2.0 * M_PI * j / n);
    f[j] = 1.0 + 0.3 * std::cos(0.5 * j);
  }
  for (int s : {1, 2}) {
    const double k = 4.0;
    const Deviation d = energy_solve_1d(rhs, f, k, s);
    const Field E = d.full();
    for (int j = 0; j < n; ++j) {
      const int jp = (j + s) % n, jm = (j - s + n) % n;
      const double op = f[j] * (E[jp] - E[j]) - f[jm] * (E[j] - E[jm]);
      CHECK(E[j] - k * op == doctest::Approx(rhs[j]).epsilon(1e-12));
    }
  }
  f[3] = 0.0;
  CHECK_THROWS_AS(energy_solve_1d(rhs, f, 1.0, 1), SolverError);

  const FieldGrid g = FieldGrid::square(8, 8, 0.0, 1.0, 0.0, 1.0);
  Field r2(g.size()), a(g.size());
  for (std::size_t c = 0; c < r2.size(); ++c) {
    r2[c] = 3.0 + std::sin(0.3 * c);
    a[c] = 1.0 + 0.5 * std::cos(0.2 * c);
  }
  for (Stencil st : {Stencil::Compact, Stencil::Wide}) {
    for (auto pk : {PreconditionerKind::Jacobi, PreconditionerKind::Spectral}) {
      SolveOptions opt;
      opt.precond = pk;
      const Deviation d = energy_solve_2d(r2, a, g, 0.01, st, opt);
      const Field l = st == Stencil::Compact ? ops::laplacian_varcoef(d.delta, a, g) : ops::wide_varcoef_2d(d.delta, a, g);
      const Field E = d.full();
      for (std::size_t c = 0; c < r2.size(); ++c)
        CHECK(E[c] - 0.01 * l[c] == doctest::Approx(r2[c]).epsilon(1e-9));
    }
  }
}
