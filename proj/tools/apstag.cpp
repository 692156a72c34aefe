#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "apstag/harness.hpp"
#include "apstag/stability.hpp"

namespace fs = std::filesystem;
using namespace apstag;
using namespace apstag::harness;

namespace {

struct Args {
  std::string case_id;
  std::string out = "out";
  std::string config;
  double eps = 0, cfl = 0, theta = 0, tfinal = 0;
  int n = 0, order = 0;
  bool acoustic_step = false;
  // convergence
  int nmin = 0, levels = 0;
  std::string vars;
  // run
  int every = 0;
  // stability
  double cmax = 100.0;
  int csamples = 400;
};

struct BadArgs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, CLI::Option*> add_common(CLI::App* app, Args& a, bool needs_case) {
  std::map<std::string, CLI::Option*> o;
  o["case"] = app->add_option("--case", a.case_id, "case id (see list-cases)");
  if (needs_case) o["case"]->description("case id (see list-cases); required");
  o["eps"] = app->add_option("--eps", a.eps, "reference Mach number");
  o["n"] = app->add_option("--n", a.n, "cells per direction");
  o["order"] = app->add_option("--order", a.order, "1 or 2");
  o["cfl"] = app->add_option("--cfl", a.cfl, "CFL_imp");
  o["theta"] = app->add_option("--theta", a.theta, "minmod limiter parameter");
  o["tfinal"] = app->add_option("--tfinal", a.tfinal, "final time");
  o["out"] = app->add_option("--out", a.out, "output directory");
  o["acoustic-step"] = app->add_flag("--acoustic-step", a.acoustic_step,
                                     "step size from |u| + c/eps instead of the default rule");
  app->add_option("--config", a.config, "INI file with the same keys; flags override it");
  return o;
}

double to_double(const std::string& k, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw BadArgs("config: " + k + " expects a number, got '" + v + "'");
}

int to_int(const std::string& k, const std::string& v) {
  const double d = to_double(k, v);
  if (d != std::floor(d)) throw BadArgs("config: " + k + " expects an integer");
  return static_cast<int>(d);
}

// Fills unset flags from the config file, then builds the overrides.
Overrides resolve(Args& a, const std::map<std::string, CLI::Option*>& opt, Report& echo) {
  std::set<std::string> from_file;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw BadArgs("cannot open config file " + a.config);
    std::map<std::string, std::string> kv;
    try {
      kv = parse_ini(in);
    } catch (const std::invalid_argument& e) {
      throw BadArgs(e.what());
    }
    for (const auto& [k, v] : kv) {
      echo.emplace_back("config." + k, v);
      const auto it = opt.find(k);
      if (it == opt.end()) throw BadArgs("config: unknown key '" + k + "'");
      if (it->second->count() > 0) continue;  // command line wins
      if (k == "case") a.case_id = v;
      else if (k == "out") a.out = v;
      else if (k == "eps") a.eps = to_double(k, v);
      else if (k == "cfl") a.cfl = to_double(k, v);
      else if (k == "theta") a.theta = to_double(k, v);
      else if (k == "tfinal") a.tfinal = to_double(k, v);
      else if (k == "n") a.n = to_int(k, v);
      else if (k == "order") a.order = to_int(k, v);
      else if (k == "acoustic-step") a.acoustic_step = v == "true" || v == "1" || v == "yes";
      from_file.insert(k);
    }
  }
  auto given = [&](const char* k) { return opt.at(k)->count() > 0 || from_file.count(k) > 0; };
  Overrides o;
  if (given("eps")) o.eps = a.eps;
  if (given("n")) o.n = a.n;
  if (given("order")) o.order = a.order;
  if (given("cfl")) o.cfl = a.cfl;
  if (given("theta")) o.theta = a.theta;
  if (given("tfinal")) o.t_final = a.tfinal;
  if (a.acoustic_step) o.acoustic_step = true;
  return o;
}

CaseSpec spec_for(const Args& a, const Overrides& o) {
  if (a.case_id.empty()) throw BadArgs("--case is required");
  try {
    return make_case(a.case_id, o);
  } catch (const std::invalid_argument& e) {
    throw BadArgs(e.what());
  }
}

void describe(Report& r, const CaseSpec& s) {
  r.emplace_back("case", s.id);
  r.emplace_back("dimension", std::to_string(s.dim));
  r.emplace_back("model", s.gas.is_isentropic() ? "isentropic" : "full-euler");
  r.emplace_back("gamma", format_double(s.gas.gamma));
  r.emplace_back("eps", format_double(s.gas.eps));
  r.emplace_back("n", std::to_string(s.n));
  r.emplace_back("order", std::to_string(s.cfg.order));
  r.emplace_back("cfl", format_double(s.cfg.cfl_imp));
  r.emplace_back("theta", format_double(s.cfg.theta));
  r.emplace_back("tfinal", format_double(s.cfg.t_final));
  r.emplace_back("acoustic_step", s.cfg.acoustic_step ? "true" : "false");
}

fs::path prepare(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

void save_report(const fs::path& dir, Report r, const std::string& command, double seconds) {
  r.insert(r.begin(), {"command", command});
  r.insert(r.begin() + 1, {"git_describe", git_describe()});
  r.emplace_back("seconds", format_double(seconds));
  std::ofstream f(dir / "report.txt");
  write_report(f, r);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_run(Args& a, const std::map<std::string, CLI::Option*>& opt) {
  Report r;
  const Overrides o = resolve(a, opt, r);
  CaseSpec spec = spec_for(a, o);
  spec.cfg.output_every = a.every;
  const fs::path dir = prepare(a.out);
  const RunReport rep = run_case(spec);
  for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "fields_%03zu.csv", k);
    std::ofstream f(dir / name);
    write_fields_csv(f, rep.snapshots[k], spec);
  }
  {
    std::ofstream f(dir / "monitors.csv");
    write_monitors_csv(f, rep.monitors);
  }
  describe(r, spec);
  r.emplace_back("steps", std::to_string(rep.steps));
  r.emplace_back("snapshots", std::to_string(rep.snapshots.size()));
  r.emplace_back("t_reached", format_double(rep.final_state().t));
  double cfl = 0, drift = 0;
  for (std::size_t k = 0; k < rep.monitors.t.size(); ++k) {
    cfl = std::max(cfl, rep.monitors.classical_cfl[k]);
    drift = std::max({drift, rep.monitors.mass_drift[k], rep.monitors.momentum_drift[k],
                      rep.monitors.energy_drift[k]});
  }
  r.emplace_back("max_classical_cfl", format_double(cfl));
  r.emplace_back("max_conservation_drift", format_double(drift));
  r.emplace_back("status", rep.ok ? "ok" : "solver-error");
  if (!rep.ok) {
    r.emplace_back("error", rep.error);
    r.emplace_back("error_step", std::to_string(rep.error_step));
  }
  save_report(dir, r, "run", rep.seconds);
  std::cout << spec.id << ": " << rep.steps << " steps, t = " << rep.final_state().t
            << ", max classical CFL " << cfl << ", output in " << dir.string() << '\n';
  if (!rep.ok) {
    std::cerr << "solver error at step " << rep.error_step << ": " << rep.error << '\n';
    return 2;
  }
  return 0;
}

int cmd_convergence(Args& a, const std::map<std::string, CLI::Option*>& opt) {
  Report r;
  const Overrides o = resolve(a, opt, r);
  const CaseSpec spec = spec_for(a, o);
  const auto t0 = std::chrono::steady_clock::now();
  const bool energy = !spec.gas.is_isentropic();
  const int nmin = a.nmin > 0 ? a.nmin : (energy ? 20 : 10);
  const int levels = a.levels > 0 ? a.levels : (energy ? 6 : 9);
  std::vector<std::string> vars;
  if (a.vars.empty()) {
    vars = energy ? std::vector<std::string>{"rho", "m1", "E"} : std::vector<std::string>{"rho", "m1"};
  } else {
    std::stringstream ss(a.vars);
    for (std::string v; std::getline(ss, v, ',');) vars.push_back(v);
  }
  std::vector<int> ns;
  for (int k = 0, n = nmin; k < levels; ++k, n *= 2) ns.push_back(n);
  const fs::path dir = prepare(a.out);
  const auto rows = compute_eoc(spec, ns, vars);
  {
    std::ofstream f(dir / "eoc.csv");
    write_eoc_csv(f, rows, vars);
  }
  write_eoc_csv(std::cout, rows, vars);
  describe(r, spec);
  r.emplace_back("n_list", std::to_string(ns.front()) + ".." + std::to_string(ns.back()));
  r.emplace_back("status", "ok");
  save_report(dir, r, "convergence", seconds_since(t0));
  return 0;
}

int cmd_stability(Args& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = prepare(a.out);
  std::vector<double> cs;
  for (int k = 0; k <= a.csamples; ++k) cs.push_back(a.cmax * k / a.csamples);
  const auto rows = stability::stability_map(cs);
  std::ofstream f(dir / "stability.csv");
  f << "c,naive_max_amp,staggered_max_amp\n";
  double worst = 0.0;
  for (const auto& row : rows) {
    f << format_double(row.c) << ',' << format_double(row.naive) << ',' << format_double(row.staggered)
      << '\n';
    worst = std::max(worst, row.staggered);
  }
  const double cstar = stability::naive_threshold(0.1, 1.0, 1e-6);
  std::cout << "naive instability threshold c* = " << cstar << '\n'
            << "max staggered amplification for c <= " << a.cmax << ": " << worst << '\n';
  Report r{{"c_star", format_double(cstar)},
           {"c_max", format_double(a.cmax)},
           {"max_staggered_amplification", format_double(worst)},
           {"status", "ok"}};
  save_report(dir, r, "stability", seconds_since(t0));
  return 0;
}

int cmd_ap(Args& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = prepare(a.out);
  const auto checks = ap_suite();
  std::ofstream f(dir / "ap.csv");
  f << "check,eps,value,bound,pass\n";
  int failed = 0;
  for (const auto& c : checks) {
    f << c.name << ',' << format_double(c.eps) << ',' << format_double(c.value) << ','
      << format_double(c.bound) << ',' << (c.pass() ? 1 : 0) << '\n';
    std::printf("%-20s eps %-8.1e %.3e <= %.1e  %s\n", c.name.c_str(), c.eps, c.value, c.bound,
                c.pass() ? "ok" : "exceeded");
    failed += !c.pass();
  }
  Report r{{"checks", std::to_string(checks.size())}, {"exceeded", std::to_string(failed)}, {"status", "ok"}};
  save_report(dir, r, "ap-test", seconds_since(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-implicit staggered all-Mach solver"};
  app.require_subcommand(1);
  Args a;
  auto* run = app.add_subcommand("run", "run one case and write fields, monitors and a report");
  const auto run_opt = add_common(run, a, true);
  run->add_option("--every", a.every, "also write a snapshot every k steps");
  auto* conv = app.add_subcommand("convergence", "self-convergence table (eoc.csv)");
  const auto conv_opt = add_common(conv, a, true);
  conv->add_option("--nmin", a.nmin, "coarsest resolution");
  conv->add_option("--levels", a.levels, "number of rows");
  conv->add_option("--vars", a.vars, "comma separated quantities (rho,m1,m2,E,p,u,v)");
  auto* stab = app.add_subcommand("stability", "von Neumann amplification map");
  stab->add_option("--out", a.out, "output directory");
  stab->add_option("--cmax", a.cmax, "largest Courant number sampled");
  stab->add_option("--samples", a.csamples, "number of Courant intervals");
  auto* ap = app.add_subcommand("ap-test", "low-Mach checks on well-prepared data");
  ap->add_option("--out", a.out, "output directory");
  app.add_subcommand("list-cases", "print the case catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help requests exit 0; everything else is a usage error
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("list-cases")) {
      for (const auto& c : catalog()) std::printf("%-14s %s\n", c.id.c_str(), c.description.c_str());
      return 0;
    }
    if (run->parsed()) return cmd_run(a, run_opt);
    if (conv->parsed()) return cmd_convergence(a, conv_opt);
    if (stab->parsed()) return cmd_stability(a);
    if (ap->parsed()) return cmd_ap(a);
  } catch (const BadArgs& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return 2;
  }
  return 1;
}
