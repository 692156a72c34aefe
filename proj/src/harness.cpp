#include "apstag/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "apstag/euler.hpp"
#include "apstag/incompressible.hpp"
#include "apstag/isen2d.hpp"
#include "apstag/riemann.hpp"

#ifndef APSTAG_GIT_DESCRIBE
#define APSTAG_GIT_DESCRIBE "unknown"
#endif

namespace apstag::harness {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<CaseInfo> kCatalog = {
    {"constant", "uniform isentropic state, 1D"},
    {"riemann", "isentropic Riemann data on [0,1], gamma = 2, T = 0.05"},
    {"isen-smooth", "isentropic simple wave sin(2 pi x / 5), gamma = 2, T = 0.3"},
    {"isen-pulses", "isentropic colliding acoustic waves on [-1,1], gamma = 1.4"},
    {"isen-2d", "2D isentropic well-prepared data on [0,1]^2, gamma = 2, T = 1"},
    {"sod", "Sod shock tube, full Euler, eps = 1, T = 0.18"},
    {"euler-smooth", "full Euler simple wave, gamma = 1.4, T = 0.3"},
    {"euler-pulses", "full Euler colliding pulses on [-2/eps, 2/eps]"},
    {"euler-2d", "2D full Euler well-prepared data on [0,1]^2, gamma = 1.4"},
    {"shear-euler", "double shear layer on [0,2 pi]^2, full Euler, T = 1"},
    {"shear-isen", "double shear layer on [0,2 pi]^2, isentropic, T = 1"},
};

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

void resize(ConservedState& s, bool energy) {
  const std::size_t n = s.grid.size();
  s.rho.assign(n, 0.0);
  s.m1.assign(n, 0.0);
  if (s.grid.dim == 2) s.m2.assign(n, 0.0);
  if (energy) s.E.assign(n, 0.0);
}

void fill_shear(ConservedState& s, const GasModel& gas) {
  const int n = s.grid.nx;
  const auto w = incompressible::shear_flow_init(n);
  const auto [u, v] = incompressible::velocity_from_omega(w);
  for (std::size_t c = 0; c < s.grid.size(); ++c) {
    s.rho[c] = 1.0;
    s.m1[c] = u[c];
    s.m2[c] = v[c];
    if (!s.E.empty()) s.E[c] = total_energy(1.0, u[c], v[c], 1.0, gas);
  }
}

double total(const Field& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s;
}

double l1(const Field& f) {
  double s = 0.0;
  for (double v : f) s += std::abs(v);
  return s;
}

double drift(double now, double start, double scale) {
  return std::abs(now - start) / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

const std::vector<CaseInfo>& catalog() { return kCatalog; }

const char* git_describe() { return APSTAG_GIT_DESCRIBE; }

CaseSpec make_case(const std::string& id, const Overrides& o) {
  CaseSpec c;
  c.id = id;
  double eps = 1.0;
  double T = 0.1;
  if (id == "constant") {
    c.gas = GasModel::isentropic(1.4, 1.0);
    c.n = 64;
  } else if (id == "riemann") {
    eps = 0.8;
    c.gas = GasModel::isentropic(2.0, eps);
    c.n = 200;
    c.cfg.cfl_imp = 0.5;
    T = 0.05;
  } else if (id == "isen-smooth" || id == "euler-smooth") {
    eps = 0.8;
    c.gas = id == "isen-smooth" ? GasModel::isentropic(2.0, eps) : GasModel::full_euler(1.4, eps);
    c.x_min = -2.5;
    c.x_max = 2.5;
    c.n = 640;
    c.cfg.cfl_imp = 0.45;
    T = 0.3;
  } else if (id == "isen-pulses") {
    eps = 0.1;
    c.gas = GasModel::isentropic(1.4, eps);
    c.x_min = -1.0;
    c.n = 100;
    c.cfg.cfl_imp = 0.5;
    T = 0.08;
  } else if (id == "isen-2d" || id == "euler-2d") {
    eps = 0.05;
    c.dim = 2;
    c.gas = id == "isen-2d" ? GasModel::isentropic(2.0, eps) : GasModel::full_euler(1.4, eps);
    c.n = 40;
    c.cfg.cfl_imp = 0.5;
    T = 1.0;
  } else if (id == "sod") {
    c.gas = GasModel::full_euler(1.4, 1.0);
    c.n = 200;
    c.cfg.cfl_imp = 0.5;
    c.mirrored = true;
    T = 0.18;
  } else if (id == "euler-pulses") {
    eps = 1.0 / 11.0;
    c.gas = GasModel::full_euler(1.4, eps);
    c.n = 440;
    c.cfg.cfl_imp = 0.5;
    T = 0.815;
  } else if (id == "shear-euler" || id == "shear-isen") {
    eps = 0.1;
    c.dim = 2;
    c.gas = id == "shear-euler" ? GasModel::full_euler(1.4, eps) : GasModel::isentropic(1.4, eps);
    c.x_max = c.y_max = 2 * kPi;
    c.n = 64;
    c.cfg.cfl_imp = 0.5;
    T = 1.0;
  } else {
    throw std::invalid_argument("unknown case '" + id + "'");
  }

  if (o.eps) {
    if (id == "constant" || id == "sod") throw std::invalid_argument(id + " has a fixed eps");
    eps = *o.eps;
  }
  c.gas.eps = eps;
  if (o.n) c.n = *o.n;
  if (o.order) c.cfg.order = *o.order;
  if (o.cfl) c.cfg.cfl_imp = *o.cfl;
  if (o.theta) c.cfg.theta = *o.theta;
  if (o.acoustic_step) c.cfg.acoustic_step = *o.acoustic_step;
  c.cfg.t_final = o.t_final ? *o.t_final : T;
  if (id == "euler-pulses") {
    c.x_min = -2.0 / eps;
    c.x_max = 2.0 / eps;
  }

  if (c.n < 2) throw std::invalid_argument("n must be at least 2");
  if (c.cfg.order != 1 && c.cfg.order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (!(c.cfg.t_final > 0.0)) throw std::invalid_argument("tfinal must be positive");
  try {
    c.gas.validate();
    c.cfg.validate();
  } catch (const SolverError& e) {
    throw std::invalid_argument(e.what());
  }
  return c;
}

ConservedState initial_state(const CaseSpec& spec) {
  ConservedState s;
  const GasModel& gas = spec.gas;
  const double eps = gas.eps, e2 = eps * eps, g = gas.gamma;
  const bool energy = !gas.is_isentropic();
  if (spec.dim == 2) {
    s.grid = FieldGrid::square(spec.n, spec.n, spec.x_min, spec.x_max, spec.y_min, spec.y_max);
  } else if (spec.mirrored) {
    s.grid = FieldGrid::line(2 * spec.n, spec.x_min, 2 * spec.x_max - spec.x_min);
  } else {
    s.grid = FieldGrid::line(spec.n, spec.x_min, spec.x_max);
  }
  resize(s, energy);
  const std::string& id = spec.id;

  if (id == "shear-euler" || id == "shear-isen") {
    fill_shear(s, gas);
    return s;
  }
  for (int j = 0; j < s.grid.ny; ++j) {
    for (int i = 0; i < s.grid.nx; ++i) {
      const std::size_t c = s.grid.index(i, j);
      const double x = s.grid.x(i);
      double rho = 1.0, u = 0.0, v = 0.0, p = -1.0;
      if (id == "constant") {
        u = 0.5;
      } else if (id == "riemann") {
        // piecewise constant in (0,0.2], (0.2,0.3], (0.3,0.7], (0.7,0.8], rest
        double m;
        if (x <= 0.2 || x > 0.8) {
          m = 1 - e2 / 2;
        } else if (x <= 0.3) {
          rho = 1 + e2;
          m = 1;
        } else if (x <= 0.7) {
          m = 1 + e2 / 2;
        } else {
          rho = 1 - e2;
          m = 1;
        }
        u = m / rho;
      } else if (id == "isen-smooth" || id == "euler-smooth") {
        // simple wave: the Riemann invariant u - 2c/(gamma-1) is constant
        const double cs = std::sqrt(g) / eps;
        u = std::sin(2 * kPi * x / 5);
        rho = std::pow(1 + 0.5 * (g - 1) * u / cs, 2 / (g - 1));
        p = std::pow(rho, g);
      } else if (id == "isen-pulses") {
        const double w = 1 - std::cos(2 * kPi * x);
        rho = 0.955 + 0.5 * eps * w;
        u = -sgn(x) * std::sqrt(g) * w;
      } else if (id == "euler-pulses") {
        const double L = spec.x_max, w = 1 - std::cos(2 * kPi * x / L);
        rho = 0.955 + 0.5 * eps * 2.0 * w;
        u = 0.5 * 2 * std::sqrt(g) * sgn(x) * w;
        p = 1.0 + 0.5 * eps * 2 * g * w;
      } else if (id == "isen-2d" || id == "euler-2d") {
        const double y = s.grid.y(j);
        const double sp = std::sin(2 * kPi * (x + y)), sm = std::sin(2 * kPi * (x - y));
        rho = 1 + e2 * sp * sp;
        u = (sm + e2 * sp) / rho;
        v = (sm + e2 * std::cos(2 * kPi * (x + y))) / rho;
        p = 1 + e2 * sp;
      } else if (id == "sod") {
        const double h = spec.x_max - spec.x_min;
        const bool left = x < spec.x_min + 0.5 * h || x > spec.x_min + 1.5 * h;
        rho = left ? 1.0 : 0.125;
        p = left ? 1.0 : 0.1;
      }
      s.rho[c] = rho;
      s.m1[c] = rho * u;
      if (spec.dim == 2) s.m2[c] = rho * v;
      if (energy) {
        if (p < 0) p = gas.C * std::pow(rho, g);
        s.E[c] = total_energy(rho, u, v, p, gas);
      }
    }
  }
  return s;
}

ConservedState advance(const ConservedState& s, const CaseSpec& spec, double dt, StepInfo* info) {
  const RunConfig& cfg = spec.cfg;
  const GasModel& gas = spec.gas;
  if (cfg.order == 1) {
    if (!gas.is_isentropic()) return euler::step_first_order_full(s, gas, cfg, dt, info);
    if (spec.dim == 2) return isen2d::step_first_order_2d(s, gas, cfg, dt, info);
    return isen1d::step_first_order(s, gas, cfg, dt, info);
  }
  const ImexTableau tab = ImexTableau::second_order(cfg.imex_c);
  if (!gas.is_isentropic()) return euler::step_imex_full(s, gas, cfg, tab, dt, info);
  if (spec.dim == 2) return isen2d::step_imex_2d(s, gas, cfg, tab, dt, info);
  return isen1d::step_imex(s, gas, cfg, tab, dt, info);
}

RunReport run_case(const CaseSpec& spec) {
  RunReport rep;
  rep.spec = spec;
  const auto t0 = std::chrono::steady_clock::now();
  const double T = spec.cfg.t_final;
  ConservedState s = initial_state(spec);
  rep.snapshots.push_back(s);

  const double mass0 = total(s.rho), mom0 = total(s.m1) + total(s.m2), en0 = total(s.E);
  const double mass_scale = l1(s.rho), mom_scale = l1(s.m1) + l1(s.m2), en_scale = l1(s.E);

  int fixed_steps = 0;
  if (spec.fixed_dt > 0.0) {
    fixed_steps = static_cast<int>(std::ceil(T / spec.fixed_dt - 1e-9));
    fixed_steps += fixed_steps % 2;
  }
  Monitors& m = rep.monitors;
  try {
    while (fixed_steps > 0 ? rep.steps < fixed_steps : s.t < T * (1 - 1e-14)) {
      const TimeStep ts = time_step(s, spec.gas, spec.cfg);
      double dt;
      if (fixed_steps > 0) {
        dt = T / fixed_steps;
      } else {
        dt = ts.dt;
        const double rem = T - s.t;
        if (rem <= dt) {
          dt = rep.steps % 2 == 1 ? rem : rem / 2;
        } else if (rem <= 2 * dt && rep.steps % 2 == 0) {
          dt = rem / 2;
        }
      }
      StepInfo info;
      const bool last = fixed_steps > 0 ? rep.steps + 1 == fixed_steps : s.t + dt >= T * (1 - 1e-14);
      s = advance(s, spec, dt, &info);
      if (last) s.t = T;
      ++rep.steps;
      m.t.push_back(s.t);
      m.dt.push_back(dt);
      m.classical_cfl.push_back(ts.classical_cfl * dt / ts.dt);
      m.mass_drift.push_back(drift(total(s.rho), mass0, mass_scale));
      m.momentum_drift.push_back(drift(total(s.m1) + total(s.m2), mom0, mom_scale));
      m.energy_drift.push_back(s.E.empty() ? 0.0 : drift(total(s.E), en0, en_scale));
      m.newton_iterations.push_back(info.newton_iterations);
      m.cg_iterations.push_back(info.cg_iterations);
      if (spec.cfg.output_every > 0 && rep.steps % spec.cfg.output_every == 0 && !last) {
        rep.snapshots.push_back(s);
      }
    }
  } catch (const SolverError& e) {
    rep.ok = false;
    rep.error = std::string(to_string(e.code())) + ": " + e.what();
    rep.error_step = rep.steps + 1;
  }
  rep.snapshots.push_back(s);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Field quantity(const ConservedState& s, const GasModel& gas, const std::string& name) {
  if (name == "rho") return s.rho;
  if (name == "m1") return s.m1;
  if (name == "m2" && !s.m2.empty()) return s.m2;
  if (name == "E" && !s.E.empty()) return s.E;
  if (name == "p") return pressure(s, gas);
  if (name == "u" || (name == "v" && !s.m2.empty())) {
    const Field& m = name == "u" ? s.m1 : s.m2;
    Field out(m.size());
    for (std::size_t c = 0; c < m.size(); ++c) out[c] = m[c] / s.rho[c];
    return out;
  }
  throw std::invalid_argument("unknown or absent quantity '" + name + "'");
}

Field restrict_to(const Field& fine, int fine_nx, int fine_ny, int nx, int ny) {
  if (nx <= 0 || ny <= 0 || fine_nx % nx != 0 || fine_ny % ny != 0 ||
      (ny > 1 && fine_nx / nx != fine_ny / ny)) {
    throw std::invalid_argument("restriction needs an integer refinement ratio");
  }
  const int rx = fine_nx / nx, ry = fine_ny / ny;
  Field out(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int b = 0; b < ry; ++b) {
        for (int a = 0; a < rx; ++a) {
          acc += fine[static_cast<std::size_t>(j * ry + b) * fine_nx + i * rx + a];
        }
      }
      out[static_cast<std::size_t>(j) * nx + i] = acc / (rx * ry);
    }
  }
  return out;
}

double compare_l1(const ConservedState& run, const ConservedState& reference, const GasModel& gas,
                  const std::string& name) {
  if (run.grid.parity != reference.grid.parity) {
    throw std::invalid_argument("run and reference live on different parities");
  }
  const FieldGrid& g = run.grid;
  const FieldGrid& r = reference.grid;
  const std::vector<std::string> parts =
      name == "vel" ? std::vector<std::string>{"u", "v"} : std::vector<std::string>{name};
  double num = 0.0, den = 0.0;
  for (const auto& q : parts) {
    const Field a = quantity(run, gas, q);
    const Field b = restrict_to(quantity(reference, gas, q), r.nx, r.ny, g.nx, g.ny);
    for (std::size_t c = 0; c < a.size(); ++c) {
      num += std::abs(a[c] - b[c]);
      den += std::abs(b[c]);
    }
  }
  return den > 0.0 ? num / den : num;
}

ConservedState shear_reference(int n, double t_final) {
  const auto res = incompressible::run(incompressible::shear_flow_init(n), t_final);
  const auto [u, v] = incompressible::velocity_from_omega(res.w);
  ConservedState s;
  s.grid = FieldGrid::square(n, n, 0.0, 2 * kPi, 0.0, 2 * kPi);
  s.t = t_final;
  s.rho.assign(s.grid.size(), 1.0);
  s.m1 = u;
  s.m2 = v;
  return s;
}

std::vector<double> eoc_from_errors(const std::vector<double>& e) {
  std::vector<double> out(e.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < e.size(); ++k) out[k] = std::log2(e[k - 1] / e[k]);
  return out;
}

std::vector<EocRow> compute_eoc(const CaseSpec& spec, const std::vector<int>& n_list,
                                const std::vector<std::string>& vars) {
  if (n_list.empty()) throw std::invalid_argument("empty resolution list");
  for (std::size_t k = 1; k < n_list.size(); ++k) {
    if (n_list[k] != 2 * n_list[k - 1]) throw std::invalid_argument("resolutions must double");
  }
  std::vector<int> all = n_list;
  all.push_back(2 * n_list.back());
  // independent runs; each is single threaded
  std::vector<std::future<RunReport>> jobs;
  for (int n : all) {
    CaseSpec c = spec;
    c.n = n;
    jobs.push_back(std::async(std::launch::async, [c] { return run_case(c); }));
  }
  std::vector<ConservedState> finals;
  for (auto& j : jobs) {
    RunReport r = j.get();
    if (!r.ok) {
      throw SolverError(ErrorCode::InvalidArgument,
                        "run at n = " + std::to_string(r.spec.n) + " failed: " + r.error);
    }
    finals.push_back(r.final_state());
  }
  std::vector<EocRow> rows(n_list.size());
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    rows[k].n = n_list[k];
    for (const auto& v : vars) rows[k].error.push_back(compare_l1(finals[k], finals[k + 1], spec.gas, v));
  }
  for (std::size_t q = 0; q < vars.size(); ++q) {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.error[q]);
    const auto o = eoc_from_errors(e);
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k].eoc.push_back(o[k]);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_fields_csv(std::ostream& os, const ConservedState& s, const CaseSpec& spec) {
  const bool two = s.grid.dim == 2, energy = s.has_energy();
  os << (two ? "x,y,rho,m1,m2" : "x,rho,m1") << (energy ? ",E" : "") << ",p,u" << (two ? ",v" : "")
     << '\n';
  const Field p = pressure(s, spec.gas);
  // a mirrored tube only reports its physical half
  const int nx = spec.mirrored ? s.grid.nx / 2 : s.grid.nx;
  for (int j = 0; j < s.grid.ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t c = s.grid.index(i, j);
      os << format_double(s.grid.x(i));
      if (two) os << ',' << format_double(s.grid.y(j));
      os << ',' << format_double(s.rho[c]) << ',' << format_double(s.m1[c]);
      if (two) os << ',' << format_double(s.m2[c]);
      if (energy) os << ',' << format_double(s.E[c]);
      os << ',' << format_double(p[c]) << ',' << format_double(s.m1[c] / s.rho[c]);
      if (two) os << ',' << format_double(s.m2[c] / s.rho[c]);
      os << '\n';
    }
  }
}

void write_monitors_csv(std::ostream& os, const Monitors& m) {
  os << "step,t,dt,classical_cfl,mass_drift,momentum_drift,energy_drift,newton_iterations,"
        "cg_iterations\n";
  for (std::size_t k = 0; k < m.t.size(); ++k) {
    os << k + 1 << ',' << format_double(m.t[k]) << ',' << format_double(m.dt[k]) << ','
       << format_double(m.classical_cfl[k]) << ',' << format_double(m.mass_drift[k]) << ','
       << format_double(m.momentum_drift[k]) << ',' << format_double(m.energy_drift[k]) << ','
       << m.newton_iterations[k] << ',' << m.cg_iterations[k] << '\n';
  }
}

void write_eoc_csv(std::ostream& os, const std::vector<EocRow>& rows,
                   const std::vector<std::string>& vars) {
  os << "n";
  for (const auto& v : vars) os << ",error_" << v << ",eoc_" << v;
  os << '\n';
  for (const auto& r : rows) {
    os << r.n;
    for (std::size_t q = 0; q < vars.size(); ++q) {
      os << ',' << format_double(r.error[q]) << ',';
      if (!std::isnan(r.eoc[q])) os << format_double(r.eoc[q]);
    }
    os << '\n';
  }
}

void write_report(std::ostream& os, const Report& r) {
  for (const auto& [k, v] : r) os << k << ": " << v << '\n';
}

std::map<std::string, std::string> parse_ini(std::istream& is) {
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace apstag::harness

namespace apstag::harness {

namespace {

// first crossing of `level` scanning from `from` in direction `dir`
double crossing(const std::vector<double>& x, const Field& f, double level, int from, int dir) {
  const int n = static_cast<int>(f.size());
  for (int i = from; i + dir >= 0 && i + dir < n; i += dir) {
    const double a = f[i] - level, b = f[i + dir] - level;
    if (a == 0.0) return x[i];
    if ((a > 0) != (b > 0)) return x[i] + (x[i + dir] - x[i]) * a / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct Profile {
  Field rho, u, p;
};

ShockTubeMetrics locate(const std::vector<double>& x, const Profile& P, const riemann::Primitive& L,
                        const riemann::Primitive& R, const riemann::StarState& s) {
  const int n = static_cast<int>(x.size());
  ShockTubeMetrics m;
  m.shock = crossing(x, P.rho, 0.5 * (s.rho_right + R.rho), n - 1, -1);
  m.contact = crossing(x, P.rho, 0.5 * (s.rho_left + s.rho_right), n - 1, -1);
  // the fan edges are kinks; extrapolate the line through the 25% and 75%
  // crossings of the fan out to each plateau so corner rounding does not count
  const double jump = L.rho - s.rho_left;
  const double a = crossing(x, P.rho, L.rho - 0.25 * jump, 0, 1);
  const double b = crossing(x, P.rho, L.rho - 0.75 * jump, 0, 1);
  const double slope = (b - a) / (0.5 * jump);  // dx per unit drop in rho
  m.fan_head = a - 0.25 * jump * slope;
  m.fan_tail = b + 0.25 * jump * slope;
  return m;
}

}  // namespace

double ShockTubeMetrics::max_position_error() const {
  return std::max({std::abs(shock - shock_exact), std::abs(contact - contact_exact),
                   std::abs(fan_head - fan_head_exact), std::abs(fan_tail - fan_tail_exact)});
}

ShockTubeMetrics shock_tube_metrics(const ConservedState& st, const CaseSpec& spec) {
  const riemann::Primitive L{1.0, 0.0, 1.0}, R{0.125, 0.0, 0.1};
  const double g = spec.gas.gamma, T = st.t;
  const double x0 = 0.5 * (spec.x_min + spec.x_max);
  const riemann::StarState star = riemann::solve_star(L, R, g);
  const int n = spec.mirrored ? st.grid.nx / 2 : st.grid.nx;
  const double dx = st.grid.dx;

  std::vector<double> x(n);
  Profile num, ex;  // ex holds cell averages of the exact solution
  const Field p = pressure(st, spec.gas);
  for (int i = 0; i < n; ++i) {
    x[i] = st.grid.x(i);
    num.rho.push_back(st.rho[i]);
    num.u.push_back(st.m1[i] / st.rho[i]);
    num.p.push_back(p[i]);
    // cell average of the exact solution by the midpoint rule on 64 subcells
    double r = 0.0, u = 0.0, q = 0.0;
    for (int k = 0; k < 64; ++k) {
      const auto e = riemann::sample(L, R, g, x0, T, x[i] + dx * ((k + 0.5) / 64 - 0.5));
      r += e.rho / 64;
      u += e.u / 64;
      q += e.p / 64;
    }
    ex.rho.push_back(r);
    ex.u.push_back(u);
    ex.p.push_back(q);
  }
  ShockTubeMetrics m = locate(x, num, L, R, star);
  const ShockTubeMetrics e = locate(x, ex, L, R, star);
  m.dx = dx;
  m.shock_exact = e.shock;
  m.contact_exact = e.contact;
  m.fan_head_exact = e.fan_head;
  m.fan_tail_exact = e.fan_tail;

  // exact rho and p never increase along the tube and 0 <= u <= u*, so any
  // rise, or any u outside that band, is spurious
  auto rise = [&](const Field& f) {
    double lo = f[0], worst = 0.0;
    for (int i = 1; i < n; ++i) {
      worst = std::max(worst, f[i] - lo);
      lo = std::min(lo, f[i]);
    }
    return worst;
  };
  double u_out = 0.0;
  for (double u : num.u) u_out = std::max({u_out, u - star.u, -u});
  m.overshoot = std::max({rise(num.rho) / (L.rho - R.rho), rise(num.p) / (L.p - R.p), u_out / star.u});
  return m;
}

}  // namespace apstag::harness

namespace apstag::harness {

namespace {

struct ApCase {
  std::string name;
  ConservedState s;
  GasModel gas;
};

ApCase ap_case(const std::string& name, double eps, int n) {
  const double e2 = eps * eps;
  if (name == "isen-1d" || name == "euler-1d") {
    ApCase c{name, {}, name == "isen-1d" ? GasModel::isentropic(2.0, eps) : GasModel::full_euler(1.4, eps)};
    c.s.grid = FieldGrid::line(n, 0.0, 1.0);
    resize(c.s, name == "euler-1d");
    for (int i = 0; i < n; ++i) {
      const double x = c.s.grid.x(i), sn = std::sin(2 * kPi * x);
      // constant leading-order density and pressure, uniform leading-order flow
      c.s.rho[i] = 1 + e2 * sn * sn;
      if (name == "isen-1d") {
        c.s.m1[i] = 1 + e2 * sn;
      } else {
        c.s.m1[i] = c.s.rho[i];
        c.s.E[i] = total_energy(c.s.rho[i], 1.0, 0.0, 1 + e2 * sn, c.gas);
      }
    }
    return c;
  }
  Overrides o;
  o.eps = eps;
  o.n = n;
  const CaseSpec spec = make_case(name, o);
  return {name, initial_state(spec), spec.gas};
}

double max_dev(const Field& f) {
  const double mean = total(f) / f.size();
  double d = 0.0;
  for (double v : f) d = std::max(d, std::abs(v - mean));
  return d;
}

double divergence(const ConservedState& s) {
  if (s.grid.dim == 2) return isen2d::divergence_monitor(s);
  const int n = s.grid.nx;
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const int k = s.grid.wrap_x(i + 1);
    d = std::max(d, std::abs(s.m1[k] / s.rho[k] - s.m1[i] / s.rho[i]) / s.grid.dx);
  }
  return d;
}

}  // namespace

std::vector<ApCheck> ap_suite(const std::vector<double>& eps_list, int n, int steps) {
  std::vector<ApCheck> out;
  const std::vector<std::string> names = {"isen-1d", "euler-1d", "isen-2d", "euler-2d"};
  for (const auto& name : names) {
    for (double eps : eps_list) {
      ApCase c = ap_case(name, eps, n);
      CaseSpec spec;
      spec.dim = c.s.grid.dim;
      spec.gas = c.gas;
      spec.cfg.cfl_imp = 0.5;
      const bool energy = !c.gas.is_isentropic();
      double dev = 0.0, div = 0.0;
      for (int k = 0; k < steps; ++k) {
        c.s = advance(c.s, spec, time_step(c.s, c.gas, spec.cfg).dt);
        dev = std::max(dev, max_dev(energy ? c.s.E : c.s.rho));
        div = std::max(div, divergence(c.s));
      }
      out.push_back({name + (energy ? "/E-flat" : "/rho-flat"), eps, dev, 10 * eps * eps});
      out.push_back({name + "/div", eps, div, std::max(10 * eps, 1e-10)});
    }
    // eps independence of the step size on the same data
    const ApCase a = ap_case(name, 1e-2, n), b = ap_case(name, 1e-6, n);
    RunConfig cfg;
    cfg.cfl_imp = 0.5;
    const double ratio = time_step(a.s, a.gas, cfg).dt / time_step(b.s, b.gas, cfg).dt;
    out.push_back({name + "/dt-ratio-1", 1e-2, std::abs(ratio - 1.0), 0.01});
  }
  return out;
}

}  // namespace apstag::harness
