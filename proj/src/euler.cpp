#include "apstag/euler.hpp"

#include <cmath>

#include "apstag/operators.hpp"

namespace apstag::euler {

namespace {

void axpy(Field& y, double a, const Field& x) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

Field ratio(const Field& a, const Field& b) {
  Field r(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (!(b[c] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity, "rho <= 0 at cell " + std::to_string(c));
    }
    r[c] = a[c] / b[c];
    if (!(r[c] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveCoefficient,
                        "E/rho <= 0 at cell " + std::to_string(c));
    }
  }
  return r;
}

Field product(const Field& a, const Field& b) {
  Field r(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) r[c] = a[c] * b[c];
  return r;
}

double mean(const Field& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(f.size());
}

// Dimension-agnostic wrappers around the staggered operators. `g` is the
// parity the input fields live on; everything is divided by dx / dy.
struct Ops {
  const FieldGrid& g;
  double theta;

  bool two() const { return g.dim == 2; }
  int o() const { return g.stagger_offset(); }

  Field avg(const Field& f) const {
    if (two()) return ops::staggered_average_2d(f, ops::slope_x(f, g, theta), ops::slope_y(f, g, theta), g);
    return ops::staggered_average_1d(f, ops::slope(f, theta), o());
  }
  Field scaled(Field f, double s) const {
    for (double& v : f) v *= s;
    return f;
  }
  // centre -> staggered divergence
  Field div_s(const Field& f1, const Field& f2) const {
    if (two()) return ops::staggered_div_2d(f1, f2, g);
    return scaled(ops::stagger_diff(f1, o()), 1.0 / g.dx);
  }
  Field grad_s(const Field& f, int k) const {
    if (two()) return k == 0 ? ops::staggered_grad_x(f, g) : ops::staggered_grad_y(f, g);
    return scaled(ops::stagger_diff(f, o()), 1.0 / g.dx);
  }
  // staggered -> centre gradient
  Field grad_c(const Field& fs, int k) const {
    if (two()) return k == 0 ? ops::unstaggered_grad_x(fs, g) : ops::unstaggered_grad_y(fs, g);
    return scaled(ops::unstagger_diff(fs, o()), 1.0 / g.dx);
  }
  // (f_{i+1} - f_{i-1}) / 2h on grid `on`
  Field wide(const Field& f, int k, const FieldGrid& on) const {
    if (on.dim == 2) return k == 0 ? ops::centered_dx(f, on) : ops::centered_dy(f, on);
    return scaled(ops::centered_diff(f), 1.0 / on.dx);
  }
  Field wide_div(const Field& f1, const Field& f2) const {
    Field d = wide(f1, 0, g);
    if (two()) axpy(d, 1.0, wide(f2, 1, g));
    return d;
  }
  Field limited(const Field& f, int k) const {
    if (two()) return k == 0 ? scaled(ops::slope_x(f, g, theta), 1.0 / g.dx)
                             : scaled(ops::slope_y(f, g, theta), 1.0 / g.dy);
    return scaled(ops::slope(f, theta), 1.0 / g.dx);
  }
  Field limited_div(const Field& f1, const Field& f2) const {
    Field d = limited(f1, 0);
    if (two()) axpy(d, 1.0, limited(f2, 1));
    return d;
  }
};

// Explicit fluxes of one state at its own cells.
struct Fluxes {
  Field t11, t12, t22;  // m (x) m / rho - (gamma-1)/2 |m|^2/rho I
  Field e1, e2;         // -(gamma-1)/2 eps^2 |m|^2 m / rho^2
};

Fluxes explicit_fluxes(const Field& rho, const Field& m1, const Field& m2, const GasModel& gas) {
  const std::size_t n = rho.size();
  const bool two = !m2.empty();
  const double g2 = 0.5 * (gas.gamma - 1.0);
  const double e2 = gas.eps * gas.eps;
  Fluxes f;
  f.t11.resize(n);
  f.e1.resize(n);
  if (two) {
    f.t12.resize(n);
    f.t22.resize(n);
    f.e2.resize(n);
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (!(rho[c] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity, "rho <= 0 at cell " + std::to_string(c));
    }
    const double a = m1[c], b = two ? m2[c] : 0.0;
    const double q = (a * a + b * b) / rho[c];
    f.t11[c] = a * a / rho[c] - g2 * q;
    f.e1[c] = -g2 * e2 * q * a / rho[c];
    if (two) {
      f.t12[c] = a * b / rho[c];
      f.t22[c] = b * b / rho[c] - g2 * q;
      f.e2[c] = -g2 * e2 * q * b / rho[c];
    }
  }
  return f;
}

Field face_means(const Field& h) {
  const std::size_t n = h.size();
  Field f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = 0.5 * (h[j] + h[(j + 1) % n]);
  return f;
}

struct Stage {
  Field m1, m2;
  Field E;             // stage energy minus a constant
  Fluxes fl;
  Field conv1, conv2;  // limited divergence of the momentum tensor rows
  Field conv_e;        // limited divergence of the explicit energy flux
  Field hm1, hm2;      // h m with h from the explicit stage value
  Field div_m, div_hm; // wide divergences
  Field gE1, gE2;      // wide gradient of E
};

ConservedState imex_core(const ConservedState& s, const GasModel& gas, const RunConfig& cfg,
                         const ImexTableau& tab, double dt, StepInfo* info, bool h_from_old) {
  const FieldGrid& g = s.grid;
  const FieldGrid sg = g.flipped();
  const Ops D{g, cfg.theta};
  const bool two = g.dim == 2;
  const double gm1 = gas.gamma - 1.0;
  const double ie2 = 1.0 / (gas.eps * gas.eps);
  const int ns = tab.stages;
  const SolveOptions opt = solve_options(cfg);
  const std::size_t n = s.rho.size();

  auto add_info = [&](const SolveStats& st) {
    if (!info) return;
    info->newton_iterations += st.newton_iterations;
    info->cg_iterations += st.cg_iterations;
  };

  std::vector<Stage> stages(ns - 1);
  auto fill = [&](Stage& st, const Field& rho, const Field& m1, const Field& m2, const Field& h) {
    st.m1 = m1;
    st.m2 = m2;
    st.fl = explicit_fluxes(rho, m1, m2, gas);
    st.conv1 = D.limited_div(st.fl.t11, st.fl.t12);
    if (two) st.conv2 = D.limited_div(st.fl.t12, st.fl.t22);
    st.conv_e = D.limited_div(st.fl.e1, st.fl.e2);
    st.hm1 = product(h, m1);
    if (two) st.hm2 = product(h, m2);
    st.div_m = D.wide_div(m1, m2);
    st.div_hm = D.wide_div(st.hm1, st.hm2);
    st.gE1 = D.wide(st.E, 0, g);
    if (two) st.gE2 = D.wide(st.E, 1, g);
  };

  // explicit stage value U*^(k): density and energy only
  auto explicit_h = [&](int k) {
    Field r = s.rho, e = s.E;
    for (int l = 0; l < k; ++l) {
      const double a = tab.at[k][l];
      if (a == 0.0) continue;
      axpy(r, -dt * a, stages[l].div_m);
      axpy(e, -dt * a, stages[l].conv_e);
      axpy(e, -dt * a * gas.gamma, stages[l].div_hm);
    }
    return std::make_pair(ratio(e, r), std::make_pair(r, e));
  };

  auto momentum_part = [&](int k) {
    Field M1 = s.m1, M2 = s.m2;
    for (int l = 0; l < k; ++l) {
      const Stage& S = stages[l];
      if (tab.at[k][l] != 0.0) {
        axpy(M1, -dt * tab.at[k][l], S.conv1);
        if (two) axpy(M2, -dt * tab.at[k][l], S.conv2);
      }
      if (tab.a[k][l] != 0.0) {
        axpy(M1, -dt * tab.a[k][l] * gm1 * ie2, S.gE1);
        if (two) axpy(M2, -dt * tab.a[k][l] * gm1 * ie2, S.gE2);
      }
    }
    return std::make_pair(M1, M2);
  };

  {
    const double ref = mean(s.E);
    stages[0].E = s.E;
    for (double& v : stages[0].E) v -= ref;
    fill(stages[0], s.rho, s.m1, s.m2, ratio(s.E, s.rho));
  }

  for (int k = 1; k < ns - 1; ++k) {
    const Field h = explicit_h(k).first;
    Field R = s.rho, Q = s.E;
    for (int l = 0; l < k; ++l) {
      const Stage& S = stages[l];
      if (tab.a[k][l] != 0.0) {
        axpy(R, -dt * tab.a[k][l], S.div_m);
        axpy(Q, -dt * tab.a[k][l] * gas.gamma, S.div_hm);
      }
      if (tab.at[k][l] != 0.0) axpy(Q, -dt * tab.at[k][l], S.conv_e);
    }
    auto [M1, M2] = momentum_part(k);
    const double mu = dt * tab.a[k][k];
    Field rhs = Q;
    axpy(rhs, -mu * gas.gamma, D.wide_div(product(h, M1), two ? product(h, M2) : Field()));
    // compact Schur complement at the centres (see isen1d)
    EnergySystem sys{g, two ? h : face_means(h), mu * mu * gas.gamma * gm1 * ie2, rhs};
    SolveStats st;
    const Deviation E = energy_elliptic_solve(sys, opt, &st);
    add_info(st);
    axpy(M1, -mu * gm1 * ie2, D.wide(E.delta, 0, g));
    if (two) axpy(M2, -mu * gm1 * ie2, D.wide(E.delta, 1, g));
    Field rho = R;
    axpy(rho, -mu, D.wide_div(M1, M2));
    stages[k].E = E.delta;
    fill(stages[k], rho, M1, M2, h);
  }

  // final stage on the staggered cells
  const int last = ns - 1;
  const double bs = tab.b[last];
  Field hc, rs, es;
  if (h_from_old) {
    rs = s.rho;
    es = s.E;
  } else {
    auto r = explicit_h(last);
    rs = std::move(r.second.first);
    es = std::move(r.second.second);
  }
  hc = ratio(es, rs);
  const auto [Ms1, Ms2] = momentum_part(last);

  Field Ess = D.avg(s.E);
  Field rho_new = D.avg(s.rho);
  for (int l = 0; l < last; ++l) {
    const Stage& S = stages[l];
    if (tab.bt[l] != 0.0) axpy(Ess, -dt * tab.bt[l], D.div_s(S.fl.e1, S.fl.e2));
    if (tab.b[l] != 0.0) {
      axpy(Ess, -dt * tab.b[l] * gas.gamma, D.div_s(S.hm1, S.hm2));
      axpy(rho_new, -dt * tab.b[l], D.div_s(S.m1, S.m2));
    }
  }
  axpy(Ess, -dt * bs * gas.gamma, D.div_s(product(hc, Ms1), two ? product(hc, Ms2) : Field()));

  EnergySystem sys;
  sys.grid = sg;
  sys.kappa = dt * dt * bs * bs * gas.gamma * gm1 * ie2;
  sys.rhs = Ess;
  if (two) {
    sys.coef = ratio(D.avg(es), D.avg(rs));
  } else {
    // face between staggered k and k+1 is centre k+o+1: reuse the centre
    // values so the solve matches the flux form exactly
    sys.coef.resize(n);
    const int o = g.stagger_offset();
    for (int k = 0; k < static_cast<int>(n); ++k) sys.coef[k] = hc[g.wrap_x(k + o + 1)];
  }
  SolveStats st;
  const Deviation E = energy_elliptic_solve(sys, opt, &st);
  add_info(st);

  Field mc1 = Ms1, mc2 = Ms2;
  axpy(mc1, -dt * bs * gm1 * ie2, D.grad_c(E.delta, 0));
  if (two) axpy(mc2, -dt * bs * gm1 * ie2, D.grad_c(E.delta, 1));
  axpy(rho_new, -dt * bs, D.div_s(mc1, mc2));

  ConservedState out;
  out.grid = sg;
  out.t = s.t + dt;
  out.rho = std::move(rho_new);
  out.E = Ess;
  axpy(out.E, sys.kappa, energy_operator(sys, E.delta));
  out.m1 = D.avg(s.m1);
  if (two) out.m2 = D.avg(s.m2);
  for (int l = 0; l < last; ++l) {
    const Stage& S = stages[l];
    if (tab.bt[l] != 0.0) {
      axpy(out.m1, -dt * tab.bt[l], D.div_s(S.fl.t11, S.fl.t12));
      if (two) axpy(out.m2, -dt * tab.bt[l], D.div_s(S.fl.t12, S.fl.t22));
    }
    if (tab.b[l] != 0.0) {
      axpy(out.m1, -dt * tab.b[l] * gm1 * ie2, D.grad_s(S.E, 0));
      if (two) axpy(out.m2, -dt * tab.b[l] * gm1 * ie2, D.grad_s(S.E, 1));
    }
  }
  axpy(out.m1, -dt * bs * gm1 * ie2, D.wide(E.delta, 0, sg));
  if (two) axpy(out.m2, -dt * bs * gm1 * ie2, D.wide(E.delta, 1, sg));
  return out;
}

}  // namespace

std::pair<Field, Field> m_star_full(const ConservedState& s, const GasModel& gas, double dt,
                                    double theta) {
  const Ops D{s.grid, theta};
  const Fluxes f = explicit_fluxes(s.rho, s.m1, s.m2, gas);
  Field a = D.avg(s.m1), b;
  axpy(a, -dt, D.div_s(f.t11, f.t12));
  if (s.grid.dim == 2) {
    b = D.avg(s.m2);
    axpy(b, -dt, D.div_s(f.t12, f.t22));
  }
  return {a, b};
}

Field e_star(const ConservedState& s, const GasModel& gas, double dt, double theta) {
  const Ops D{s.grid, theta};
  const Fluxes f = explicit_fluxes(s.rho, s.m1, s.m2, gas);
  Field e = D.avg(s.E);
  axpy(e, -dt, D.div_s(f.e1, f.e2));
  return e;
}

Field e_star_star(const ConservedState& s, const GasModel& gas, const Field& m1, const Field& m2,
                  double dt, double theta) {
  const Ops D{s.grid, theta};
  const Field h = ratio(s.E, s.rho);
  Field e = e_star(s, gas, dt, theta);
  axpy(e, -dt * gas.gamma, D.div_s(product(h, m1), m2.empty() ? Field() : product(h, m2)));
  return e;
}

Field energy_operator(const EnergySystem& sys, const Field& E) {
  const FieldGrid& g = sys.grid;
  if (g.dim == 2) return ops::laplacian_varcoef(E, sys.coef, g);
  const int n = g.nx;
  Field out(E.size());
  const double ih = 1.0 / (g.dx * g.dx);
  for (int j = 0; j < n; ++j) {
    const int jp = g.wrap_x(j + 1), jm = g.wrap_x(j - 1);
    out[j] = ih * (sys.coef[j] * (E[jp] - E[j]) - sys.coef[jm] * (E[j] - E[jm]));
  }
  return out;
}

Deviation energy_elliptic_solve(const EnergySystem& sys, const SolveOptions& opt,
                                SolveStats* stats) {
  const FieldGrid& g = sys.grid;
  if (g.dim == 2) {
    return energy_solve_2d(sys.rhs, sys.coef, g, sys.kappa, Stencil::Compact, opt, stats);
  }
  return energy_solve_1d(sys.rhs, sys.coef, sys.kappa / (g.dx * g.dx), 1);
}

ConservedState step_first_order_full(const ConservedState& s, const GasModel& gas,
                                     const RunConfig& cfg, double dt, StepInfo* info) {
  return imex_core(s, gas, cfg, ImexTableau::first_order(), dt, info, true);
}

ConservedState step_imex_full(const ConservedState& s, const GasModel& gas, const RunConfig& cfg,
                              const ImexTableau& tab, double dt, StepInfo* info) {
  return imex_core(s, gas, cfg, tab, dt, info, false);
}

Field lagged_pressure(const Field& E_new, const ConservedState& old, const GasModel& gas,
                      double theta) {
  const Ops D{old.grid, theta};
  Field q(old.rho.size());
  for (std::size_t c = 0; c < q.size(); ++c) {
    double m2 = old.m1[c] * old.m1[c];
    if (!old.m2.empty()) m2 += old.m2[c] * old.m2[c];
    q[c] = m2 / old.rho[c];
  }
  const Field qa = D.avg(q);
  Field p(E_new.size());
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = (gas.gamma - 1.0) * (E_new[c] - 0.5 * gas.eps * gas.eps * qa[c]);
  }
  return p;
}

}  // namespace apstag::euler
