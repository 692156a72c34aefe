#include <cmath>

#include "apstag/operators.hpp"
#include "doctest.h"

using namespace apstag;

namespace {

Field sample(const FieldGrid& g, double (*f)(double, double)) {
  Field out(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out[g.index(i, j)] = f(g.x(i), g.y(j));
  return out;
}

double wave(double x, double y) { return std::sin(2.0 * M_PI * x) + 0.3 * std::cos(2.0 * M_PI * (x + 2.0 * y)); }
double wave2(double x, double y) { return std::cos(2.0 * M_PI * y) * (1.0 + 0.5 * std::sin(2.0 * M_PI * x)); }

}  // namespace

TEST_CASE("minmod picks the smallest modulus of equal signs") {
  CHECK(ops::minmod3(1.0, 2.0, 3.0) == 1.0);
  CHECK(ops::minmod3(-3.0, -0.5, -2.0) == -0.5);
  CHECK(ops::minmod3(1.0, -2.0, 3.0) == 0.0);
  CHECK(ops::minmod3(0.0, 2.0, 3.0) == 0.0);
}

TEST_CASE("limited slope is exact for linear data away from the seam") {
  Field f(8);
  for (int i = 0; i < 8; ++i) f[i] = 3.0 * i;
  const Field s = ops::slope(f, 1.5);
  for (int i = 1; i < 7; ++i) CHECK(s[i] == doctest::Approx(3.0));
  // extremum at the periodic seam gets clipped to 0
  CHECK(s[0] == 0.0);
}

TEST_CASE("staggered average of linear data is the midpoint value") {
  Field f(8);
  for (int i = 0; i < 8; ++i) f[i] = 2.0 * i + 1.0;
  const Field s = ops::slope(f, 2.0);
  const Field avg = ops::staggered_average_1d(f, s, 0);
  for (int k = 1; k < 6; ++k) CHECK(avg[k] == doctest::Approx(2.0 * k + 2.0));
  const Field back = ops::staggered_average_1d(f, s, -1);
  for (int k = 2; k < 7; ++k) CHECK(back[k] == doctest::Approx(2.0 * k));
}

TEST_CASE("stagger and unstagger differences are negative adjoints") {
  const int n = 11;
  Field f(n), p(n);
  for (int i = 0; i < n; ++i) {
    f[i] = std::sin(0.7 * i) + 0.1 * i * i;
    p[i] = std::cos(1.3 * i);
  }
  for (int o : {0, -1}) {
    const Field df = ops::stagger_diff(f, o);
    const Field gp = ops::unstagger_diff(p, o);
    double lhs = 0.0, rhs = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
      lhs += p[i] * df[i];
      rhs -= f[i] * gp[i];
      total += df[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(std::abs(total) < 1e-12);
  }
}

TEST_CASE("d2x and centred difference") {
  Field f = {0.0, 1.0, 4.0, 9.0, 16.0};
  const Field d2 = ops::d2x(f);
  CHECK(d2[2] == doctest::Approx(2.0));
  const Field c = ops::centered_diff(f);
  CHECK(c[2] == doctest::Approx(4.0));
  CHECK(c[0] == doctest::Approx(0.5 * (1.0 - 16.0)));
}

TEST_CASE("2D staggered divergence is adjoint to unstaggered gradient") {
  for (Parity par : {Parity::Integer, Parity::HalfInteger}) {
    FieldGrid g = FieldGrid::square(7, 5, 0.0, 1.0, 0.0, 2.0);
    g.parity = par;
    const Field m1 = sample(g, wave), m2 = sample(g, wave2);
    Field q(g.size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = std::sin(0.37 * k * k);
    const Field div = ops::staggered_div_2d(m1, m2, g);
    const Field gx = ops::unstaggered_grad_x(q, g), gy = ops::unstaggered_grad_y(q, g);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      lhs += q[k] * div[k];
      rhs -= m1[k] * gx[k] + m2[k] * gy[k];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    const Field zero(g.size(), 0.0);
    const Field sx = ops::staggered_grad_x(m1, g), sy = ops::staggered_grad_y(m2, g);
    const Field dx = ops::staggered_div_2d(m1, zero, g), dy = ops::staggered_div_2d(zero, m2, g);
    for (std::size_t k = 0; k < q.size(); ++k) {
      CHECK(sx[k] == doctest::Approx(dx[k]));
      CHECK(sy[k] == doctest::Approx(dy[k]));
    }
  }
}

TEST_CASE("2D staggered divergence converges at second order") {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const FieldGrid g = FieldGrid::square(n, n, 0.0, 1.0, 0.0, 1.0);
    const Field m1 = sample(g, wave), m2 = sample(g, wave2);
    const Field div = ops::staggered_div_2d(m1, m2, g);
    const FieldGrid s = g.flipped();
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double x = s.x(i), y = s.y(j);
        const double exact = 2.0 * M_PI * std::cos(2.0 * M_PI * x) -
                             0.3 * 2.0 * M_PI * std::sin(2.0 * M_PI * (x + 2.0 * y)) -
                             2.0 * M_PI * std::sin(2.0 * M_PI * y) * (1.0 + 0.5 * std::sin(2.0 * M_PI * x));
        err = std::max(err, std::abs(div[s.index(i, j)] - exact));
      }
    }
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.9);
    prev = err;
  }
}

TEST_CASE("JT average reproduces bilinear-free smooth data to second order") {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const FieldGrid g = FieldGrid::square(n, n, 0.0, 1.0, 0.0, 1.0);
    const Field f = sample(g, wave);
    const Field avg = ops::staggered_average_2d(f, ops::slope_x(f, g, 1.0), ops::slope_y(f, g, 1.0), g);
    const FieldGrid s = g.flipped();
    double err = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) err = std::max(err, std::abs(avg[s.index(i, j)] - wave(s.x(i), s.y(j))));
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.5);
    prev = err;
  }
}

TEST_CASE("JT average integrates the piecewise-linear reconstruction") {
  for (Parity par : {Parity::Integer, Parity::HalfInteger}) {
    FieldGrid g = FieldGrid::square(5, 4, 0.0, 1.0, 0.0, 1.0);
    g.parity = par;
    Field f(g.size()), sx(g.size()), sy(g.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] = std::sin(1.7 * k);
      sx[k] = std::cos(2.3 * k);
      sy[k] = std::sin(0.4 * k * k);
    }
    const Field avg = ops::staggered_average_2d(f, sx, sy, g);
    const int o = g.stagger_offset();
    for (int l = 0; l < g.ny; ++l) {
      for (int k = 0; k < g.nx; ++k) {
        // each source cell contributes the quarter nearest the staggered centre
        double sum = 0.0;
        for (int b = 0; b < 2; ++b) {
          for (int a = 0; a < 2; ++a) {
            const std::size_t c = g.at(k + o + a, l + o + b);
            const double ox = a == 0 ? 0.25 : -0.25, oy = b == 0 ? 0.25 : -0.25;
            sum += f[c] + ox * sx[c] + oy * sy[c];
          }
        }
        CHECK(avg[g.index(k, l)] == doctest::Approx(0.25 * sum));
      }
    }
  }
}

TEST_CASE("Laplacians agree with their definitions") {
  const FieldGrid g = FieldGrid::square(9, 6, 0.0, 1.0, 0.0, 1.5);
  const Field f = sample(g, wave);
  const Field one(g.size(), 1.0);
  const Field l = ops::laplacian_2d(f, g), lv = ops::laplacian_varcoef(f, one, g);
  const Field w = ops::wide_laplacian_2d(f, g), wv = ops::wide_varcoef_2d(f, one, g);
  const Field ww = ops::centered_dx(ops::centered_dx(f, g), g);
  const Field wy = ops::centered_dy(ops::centered_dy(f, g), g);
  for (std::size_t k = 0; k < f.size(); ++k) {
    CHECK(l[k] == doctest::Approx(lv[k]));
    CHECK(w[k] == doctest::Approx(wv[k]));
    CHECK(w[k] == doctest::Approx(ww[k] + wy[k]));
  }
  Field bad = one;
  bad[3] = 0.0;
  CHECK_THROWS_AS(ops::laplacian_varcoef(f, bad, g), SolverError);
}

TEST_CASE("variable-coefficient Laplacian is symmetric and conservative") {
  const FieldGrid g = FieldGrid::square(6, 7, 0.0, 1.0, 0.0, 1.0);
  Field a(g.size()), u(g.size()), v(g.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = 1.0 + 0.5 * std::sin(1.1 * k);
    u[k] = std::cos(0.3 * k * k);
    v[k] = std::sin(0.9 * k);
  }
  for (int wide = 0; wide < 2; ++wide) {
    const Field lu = wide ? ops::wide_varcoef_2d(u, a, g) : ops::laplacian_varcoef(u, a, g);
    const Field lv = wide ? ops::wide_varcoef_2d(v, a, g) : ops::laplacian_varcoef(v, a, g);
    double s1 = 0.0, s2 = 0.0, tot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      s1 += v[k] * lu[k];
      s2 += u[k] * lv[k];
      tot += lu[k];
    }
    CHECK(s1 == doctest::Approx(s2).epsilon(1e-12));
    CHECK(std::abs(tot) < 1e-9);
  }
}
