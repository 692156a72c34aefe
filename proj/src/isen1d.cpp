#include "apstag/isen1d.hpp"

#include <cmath>

#include "apstag/operators.hpp"

namespace apstag::isen1d {

namespace {

Field flux(const Field& rho, const Field& m) {
  Field f(rho.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!(rho[j] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity, "rho <= 0 at cell " + std::to_string(j));
    }
    f[j] = m[j] * m[j] / rho[j];
  }
  return f;
}

void axpy(Field& y, double a, const Field& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

void add_info(StepInfo* info, const SolveStats& st) {
  if (!info) return;
  info->newton_iterations += st.newton_iterations;
  info->cg_iterations += st.cg_iterations;
}

// Explicit and stiff derivatives of one predictor stage, at cell centres.
struct Stage {
  Field m;
  Field f;      // m^2 / rho
  Field conv;   // limited slope of f
  Field dm;     // (m_{j+1} - m_{j-1}) / 2
  Field dp;     // (p_{j+1} - p_{j-1}) / 2, from the pressure deviation
  Field delta;  // pressure minus a constant
};

}  // namespace

Field momentum_star(const ConservedState& s, double dt, double theta) {
  const double lam = dt / s.grid.dx;
  Field out = s.m1;
  axpy(out, -lam, ops::slope(flux(s.rho, s.m1), theta));
  return out;
}

Field pressure_solve(const Field& rho_star, const GasModel& gas, double k, const SolveOptions& opt) {
  return pressure_solve_1d(rho_star, gas.C, gas.gamma, k, 1, opt).full();
}

ConservedState step_first_order(const ConservedState& s, const GasModel& gas,
                                const RunConfig& cfg, double dt, StepInfo* info) {
  const int o = s.grid.stagger_offset();
  const double lam = dt / s.grid.dx;
  const double ie2 = 1.0 / (gas.eps * gas.eps);

  const Field rho_bar = ops::staggered_average_1d(s.rho, ops::slope(s.rho, cfg.theta), o);
  const Field m_bar = ops::staggered_average_1d(s.m1, ops::slope(s.m1, cfg.theta), o);
  const Field f = flux(s.rho, s.m1);
  Field m_star = s.m1;
  axpy(m_star, -lam, ops::slope(f, cfg.theta));

  Field rho_star = rho_bar;
  axpy(rho_star, -lam, ops::stagger_diff(m_star, o));

  SolveStats st;
  const Deviation p = pressure_solve_1d(rho_star, gas.C, gas.gamma, lam * lam * ie2, 1,
                                        solve_options(cfg), &st);
  add_info(info, st);

  Field m_c = m_star;
  axpy(m_c, -lam * ie2, ops::unstagger_diff(p.delta, o));

  ConservedState out;
  out.grid = s.grid.flipped();
  out.t = s.t + dt;
  out.rho = rho_bar;
  axpy(out.rho, -lam, ops::stagger_diff(m_c, o));
  // centre pressures are averages of the staggered neighbours, so
  // p_{j+1} - p_j = (p_{j+3/2} - p_{j-1/2}) / 2
  out.m1 = m_bar;
  axpy(out.m1, -lam, ops::stagger_diff(f, o));
  axpy(out.m1, -lam * ie2, ops::centered_diff(p.delta));
  return out;
}

ConservedState step_imex(const ConservedState& s, const GasModel& gas, const RunConfig& cfg,
                         const ImexTableau& tab, double dt, StepInfo* info) {
  const int o = s.grid.stagger_offset();
  const double lam = dt / s.grid.dx;
  const double ie2 = 1.0 / (gas.eps * gas.eps);
  const int ns = tab.stages;
  const SolveOptions opt = solve_options(cfg);

  std::vector<Stage> stages(ns - 1);
  auto fill = [&](Stage& st, const Field& rho, const Field& m) {
    st.m = m;
    st.f = flux(rho, m);
    st.conv = ops::slope(st.f, cfg.theta);
    st.dm = ops::centered_diff(m);
    st.dp = ops::centered_diff(st.delta);
  };
  {
    double pm = 0.0;
    for (double r : s.rho) pm += r;
    pm = gas.C * std::pow(pm / s.rho.size(), gas.gamma);
    stages[0].delta.resize(s.rho.size());
    for (std::size_t j = 0; j < s.rho.size(); ++j) stages[0].delta[j] = gas.C * std::pow(s.rho[j], gas.gamma) - pm;
  }
  fill(stages[0], s.rho, s.m1);

  // explicit part of the momentum at stage k
  auto momentum_part = [&](int k) {
    Field M = s.m1;
    for (int l = 0; l < k; ++l) {
      if (tab.at[k][l] != 0.0) axpy(M, -lam * tab.at[k][l], stages[l].conv);
      if (tab.a[k][l] != 0.0) axpy(M, -lam * tab.a[k][l] * ie2, stages[l].dp);
    }
    return M;
  };

  for (int k = 1; k < ns - 1; ++k) {
    Field R = s.rho;
    for (int l = 0; l < k; ++l) {
      if (tab.a[k][l] != 0.0) axpy(R, -lam * tab.a[k][l], stages[l].dm);
    }
    const Field M = momentum_part(k);
    const double mu = lam * tab.a[k][k];
    Field rhs = R;
    axpy(rhs, -mu, ops::centered_diff(M));
    SolveStats st;
    // Schur complement with the compact Laplacian: the wide one leaves the
    // checkerboard modes undamped and the step blows up once the acoustic
    // Courant number exceeds about 2.5.
    const double kap = mu * mu * ie2;
    const Deviation p = pressure_solve_1d(rhs, gas.C, gas.gamma, kap, 1, opt, &st);
    add_info(info, st);
    Field m = M;
    axpy(m, -mu * ie2, ops::centered_diff(p.delta));
    Field rho = rhs;
    axpy(rho, kap, ops::d2x(p.delta));
    stages[k].delta = p.delta;
    fill(stages[k], rho, m);
  }

  // final stage on the staggered cells
  const int last = ns - 1;
  const double bs = tab.b[last];
  const Field rho_bar = ops::staggered_average_1d(s.rho, ops::slope(s.rho, cfg.theta), o);
  const Field m_bar = ops::staggered_average_1d(s.m1, ops::slope(s.m1, cfg.theta), o);
  const Field Ms = momentum_part(last);

  Field rho_expl = rho_bar;
  for (int l = 0; l < last; ++l) {
    if (tab.b[l] != 0.0) axpy(rho_expl, -lam * tab.b[l], ops::stagger_diff(stages[l].m, o));
  }
  Field rho_star = rho_expl;
  axpy(rho_star, -lam * bs, ops::stagger_diff(Ms, o));

  SolveStats st;
  const Deviation p = pressure_solve_1d(rho_star, gas.C, gas.gamma, lam * lam * bs * bs * ie2, 1, opt, &st);
  add_info(info, st);

  Field m_c = Ms;
  axpy(m_c, -lam * bs * ie2, ops::unstagger_diff(p.delta, o));

  ConservedState out;
  out.grid = s.grid.flipped();
  out.t = s.t + dt;
  out.rho = rho_expl;
  axpy(out.rho, -lam * bs, ops::stagger_diff(m_c, o));
  out.m1 = m_bar;
  for (int l = 0; l < last; ++l) {
    if (tab.bt[l] != 0.0) axpy(out.m1, -lam * tab.bt[l], ops::stagger_diff(stages[l].f, o));
    if (tab.b[l] != 0.0) {
      axpy(out.m1, -lam * tab.b[l] * ie2, ops::stagger_diff(stages[l].delta, o));
    }
  }
  axpy(out.m1, -lam * bs * ie2, ops::centered_diff(p.delta));
  return out;
}

}  // namespace apstag::isen1d
