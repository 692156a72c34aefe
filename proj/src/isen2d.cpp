#include "apstag/isen2d.hpp"

#include <cmath>

#include "apstag/operators.hpp"

namespace apstag::isen2d {

namespace {

void axpy(Field& y, double a, const Field& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

void add_info(StepInfo* info, const SolveStats& st) {
  if (!info) return;
  info->newton_iterations += st.newton_iterations;
  info->cg_iterations += st.cg_iterations;
}

struct Tensor {
  Field f11, f12, f22;
};

Tensor convective_tensor(const Field& rho, const Field& m1, const Field& m2) {
  Tensor t{Field(rho.size()), Field(rho.size()), Field(rho.size())};
  for (std::size_t c = 0; c < rho.size(); ++c) {
    if (!(rho[c] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity, "rho <= 0 at cell " + std::to_string(c));
    }
    t.f11[c] = m1[c] * m1[c] / rho[c];
    t.f12[c] = m1[c] * m2[c] / rho[c];
    t.f22[c] = m2[c] * m2[c] / rho[c];
  }
  return t;
}

// Limited divergence of the rows of the tensor, at the cells of g.
std::pair<Field, Field> limited_div(const Tensor& t, const FieldGrid& g, double theta) {
  Field d1 = ops::slope_x(t.f11, g, theta), d2 = ops::slope_x(t.f12, g, theta);
  const Field y1 = ops::slope_y(t.f12, g, theta), y2 = ops::slope_y(t.f22, g, theta);
  for (std::size_t c = 0; c < d1.size(); ++c) {
    d1[c] = d1[c] / g.dx + y1[c] / g.dy;
    d2[c] = d2[c] / g.dx + y2[c] / g.dy;
  }
  return {d1, d2};
}

Field jt(const Field& f, const FieldGrid& g, double theta) {
  return ops::staggered_average_2d(f, ops::slope_x(f, g, theta), ops::slope_y(f, g, theta), g);
}

Field pressure_deviation(const Field& rho, const GasModel& gas) {
  double mean = 0.0;
  for (double r : rho) mean += r;
  const double ref = gas.C * std::pow(mean / rho.size(), gas.gamma);
  Field d(rho.size());
  for (std::size_t c = 0; c < rho.size(); ++c) d[c] = gas.C * std::pow(rho[c], gas.gamma) - ref;
  return d;
}

struct Stage {
  Field m1, m2;
  Tensor t;
  Field conv1, conv2;  // limited divergence of the convective tensor
  Field div;           // wide divergence of m
  Field g1, g2;        // wide gradient of the pressure deviation
  Field delta;
};

}  // namespace

std::pair<Field, Field> momentum_star_2d(const ConservedState& s, double dt, double theta) {
  const Tensor t = convective_tensor(s.rho, s.m1, s.m2);
  Field a = jt(s.m1, s.grid, theta), b = jt(s.m2, s.grid, theta);
  axpy(a, -dt, ops::staggered_div_2d(t.f11, t.f12, s.grid));
  axpy(b, -dt, ops::staggered_div_2d(t.f12, t.f22, s.grid));
  return {a, b};
}

Field rho_star_2d(const ConservedState& s, const Field& m1, const Field& m2, double dt,
                  double theta) {
  Field r = jt(s.rho, s.grid, theta);
  axpy(r, -dt, ops::staggered_div_2d(m1, m2, s.grid));
  return r;
}

Deviation elliptic_solve_2d(const Field& rho_star, const FieldGrid& grid, const GasModel& gas,
                            double k, const SolveOptions& opt, SolveStats* stats) {
  return pressure_solve_2d(rho_star, grid, gas.C, gas.gamma, k, Stencil::Compact, opt, stats);
}

ConservedState step_first_order_2d(const ConservedState& s, const GasModel& gas,
                                   const RunConfig& cfg, double dt, StepInfo* info) {
  const FieldGrid& g = s.grid;
  const FieldGrid sg = g.flipped();
  const double ie2 = 1.0 / (gas.eps * gas.eps);

  const Tensor t = convective_tensor(s.rho, s.m1, s.m2);
  const auto [c1, c2] = limited_div(t, g, cfg.theta);
  Field ms1 = s.m1, ms2 = s.m2;
  axpy(ms1, -dt, c1);
  axpy(ms2, -dt, c2);
  const Field rho_star = rho_star_2d(s, ms1, ms2, dt, cfg.theta);

  const double k = dt * dt * ie2;
  SolveStats st;
  const Deviation p = elliptic_solve_2d(rho_star, sg, gas, k, solve_options(cfg), &st);
  add_info(info, st);

  ConservedState out;
  out.grid = sg;
  out.t = s.t + dt;
  out.rho = rho_star;
  axpy(out.rho, k, ops::laplacian_2d(p.delta, sg));
  auto [a, b] = momentum_star_2d(s, dt, cfg.theta);
  axpy(a, -dt * ie2, ops::centered_dx(p.delta, sg));
  axpy(b, -dt * ie2, ops::centered_dy(p.delta, sg));
  out.m1 = std::move(a);
  out.m2 = std::move(b);
  return out;
}

ConservedState step_imex_2d(const ConservedState& s, const GasModel& gas, const RunConfig& cfg,
                            const ImexTableau& tab, double dt, StepInfo* info) {
  const FieldGrid& g = s.grid;
  const FieldGrid sg = g.flipped();
  const double ie2 = 1.0 / (gas.eps * gas.eps);
  const int ns = tab.stages;
  const SolveOptions opt = solve_options(cfg);

  std::vector<Stage> stages(ns - 1);
  auto fill = [&](Stage& st, const Field& rho, const Field& m1, const Field& m2) {
    st.m1 = m1;
    st.m2 = m2;
    st.t = convective_tensor(rho, m1, m2);
    std::tie(st.conv1, st.conv2) = limited_div(st.t, g, cfg.theta);
    st.div = ops::centered_dx(m1, g);
    axpy(st.div, 1.0, ops::centered_dy(m2, g));
    st.g1 = ops::centered_dx(st.delta, g);
    st.g2 = ops::centered_dy(st.delta, g);
  };
  stages[0].delta = pressure_deviation(s.rho, gas);
  fill(stages[0], s.rho, s.m1, s.m2);

  auto momentum_part = [&](int k) {
    Field M1 = s.m1, M2 = s.m2;
    for (int l = 0; l < k; ++l) {
      if (tab.at[k][l] != 0.0) {
        axpy(M1, -dt * tab.at[k][l], stages[l].conv1);
        axpy(M2, -dt * tab.at[k][l], stages[l].conv2);
      }
      if (tab.a[k][l] != 0.0) {
        axpy(M1, -dt * tab.a[k][l] * ie2, stages[l].g1);
        axpy(M2, -dt * tab.a[k][l] * ie2, stages[l].g2);
      }
    }
    return std::make_pair(M1, M2);
  };

  for (int k = 1; k < ns - 1; ++k) {
    Field R = s.rho;
    for (int l = 0; l < k; ++l) {
      if (tab.a[k][l] != 0.0) axpy(R, -dt * tab.a[k][l], stages[l].div);
    }
    auto [M1, M2] = momentum_part(k);
    const double mu = dt * tab.a[k][k];
    Field rhs = R;
    axpy(rhs, -mu, ops::centered_dx(M1, g));
    axpy(rhs, -mu, ops::centered_dy(M2, g));
    // compact Schur complement, as in 1D
    const double kap = mu * mu * ie2;
    SolveStats st;
    const Deviation p = pressure_solve_2d(rhs, g, gas.C, gas.gamma, kap, Stencil::Compact, opt, &st);
    add_info(info, st);
    axpy(M1, -mu * ie2, ops::centered_dx(p.delta, g));
    axpy(M2, -mu * ie2, ops::centered_dy(p.delta, g));
    Field rho = rhs;
    axpy(rho, kap, ops::laplacian_2d(p.delta, g));
    stages[k].delta = p.delta;
    fill(stages[k], rho, M1, M2);
  }

  const int last = ns - 1;
  const double bs = tab.b[last];
  const auto [Ms1, Ms2] = momentum_part(last);

  Field rho_star = jt(s.rho, g, cfg.theta);
  for (int l = 0; l < last; ++l) {
    if (tab.b[l] != 0.0) axpy(rho_star, -dt * tab.b[l], ops::staggered_div_2d(stages[l].m1, stages[l].m2, g));
  }
  axpy(rho_star, -dt * bs, ops::staggered_div_2d(Ms1, Ms2, g));

  const double kap = dt * dt * bs * bs * ie2;
  SolveStats st;
  const Deviation p = elliptic_solve_2d(rho_star, sg, gas, kap, opt, &st);
  add_info(info, st);

  ConservedState out;
  out.grid = sg;
  out.t = s.t + dt;
  out.rho = rho_star;
  axpy(out.rho, kap, ops::laplacian_2d(p.delta, sg));
  out.m1 = jt(s.m1, g, cfg.theta);
  out.m2 = jt(s.m2, g, cfg.theta);
  for (int l = 0; l < last; ++l) {
    const Stage& S = stages[l];
    if (tab.bt[l] != 0.0) {
      axpy(out.m1, -dt * tab.bt[l], ops::staggered_div_2d(S.t.f11, S.t.f12, g));
      axpy(out.m2, -dt * tab.bt[l], ops::staggered_div_2d(S.t.f12, S.t.f22, g));
    }
    if (tab.b[l] != 0.0) {
      axpy(out.m1, -dt * tab.b[l] * ie2, ops::staggered_grad_x(S.delta, g));
      axpy(out.m2, -dt * tab.b[l] * ie2, ops::staggered_grad_y(S.delta, g));
    }
  }
  axpy(out.m1, -dt * bs * ie2, ops::centered_dx(p.delta, sg));
  axpy(out.m2, -dt * bs * ie2, ops::centered_dy(p.delta, sg));
  return out;
}

double divergence_monitor(const ConservedState& s) {
  Field u(s.rho.size()), v(s.rho.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    u[c] = s.m1[c] / s.rho[c];
    v[c] = s.m2[c] / s.rho[c];
  }
  double m = 0.0;
  for (double d : ops::staggered_div_2d(u, v, s.grid)) m = std::max(m, std::abs(d));
  return m;
}

}  // namespace apstag::isen2d
