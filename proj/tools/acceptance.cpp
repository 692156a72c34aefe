// One line per acceptance criterion. Exits 0 once every check has run; use
// --strict to turn failed criteria into a non-zero status.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apstag/harness.hpp"
#include "apstag/stability.hpp"

#ifndef APSTAG_TEST_DIR
#define APSTAG_TEST_DIR "."
#endif

namespace fs = std::filesystem;
using namespace apstag;
using namespace apstag::harness;

namespace {

struct Line {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }
bool factor3(double v, double ref) { return v <= 3 * ref && v >= ref / 3; }

fs::path out_dir;

std::vector<EocRow> eoc_table(const std::string& id, double eps, double tfinal, int nmin,
                              int levels, const std::vector<std::string>& vars,
                              const std::string& tag) {
  Overrides o;
  o.eps = eps;
  o.cfl = 0.45;
  if (tfinal > 0) o.t_final = tfinal;
  std::vector<int> ns;
  for (int k = 0, n = nmin; k < levels; ++k, n *= 2) ns.push_back(n);
  const auto rows = compute_eoc(make_case(id, o), ns, vars);
  std::ofstream f(out_dir / ("eoc_" + tag + ".csv"));
  write_eoc_csv(f, rows, vars);
  return rows;
}

Line table_5_1() {
  Line l{"Table 5.1 isentropic convergence"};
  const auto a = eoc_table("isen-smooth", 0.8, 0, 10, 9, {"rho"}, "isen_eps0.8");
  const auto b = eoc_table("isen-smooth", 0.3, 0, 10, 9, {"rho"}, "isen_eps0.3");
  const auto c = eoc_table("isen-smooth", 0.05, 0, 10, 9, {"rho"}, "isen_eps0.05");
  const std::size_t L = a.size() - 1;
  bool ok_a = true;
  for (std::size_t k = L - 2; k <= L; ++k) ok_a = ok_a && within(a[k].eoc[0], 1.9, 2.15);
  ok_a = ok_a && factor3(a[L].error[0], 1.898e-7);
  const bool ok_b = within(b[L].eoc[0], 1.9, 2.1);
  bool negative = false;
  for (const auto& r : c) negative = negative || (r.n <= 80 && r.eoc[0] < 0);
  const bool ok_c = negative && c[L].eoc[0] >= 1.9;
  l.pass = ok_a && ok_b && ok_c;
  std::ostringstream d;
  d << "eps=0.8 e_2560 " << fmt("%.3e", a[L].error[0]) << " (ref 1.898e-07) EOC "
    << fmt("%.3f", a[L - 2].eoc[0]) << "/" << fmt("%.3f", a[L - 1].eoc[0]) << "/"
    << fmt("%.3f", a[L].eoc[0]) << (ok_a ? "" : " [fail]") << "; eps=0.3 EOC "
    << fmt("%.3f", b[L].eoc[0]) << (ok_b ? "" : " [fail]") << "; eps=0.05 negative EOC at N<=80 "
    << (negative ? "yes" : "no") << ", final EOC " << fmt("%.3f", c[L].eoc[0])
    << (ok_c ? "" : " [fail]");
  l.detail = d.str();
  return l;
}

Line euler_tables() {
  Line l{"Full-Euler convergence tables"};
  const auto a = eoc_table("euler-smooth", 0.8, 0, 20, 6, {"rho", "m1", "E"}, "euler_eps0.8");
  const auto b = eoc_table("euler-smooth", 0.1, 0, 20, 6, {"rho", "m1", "E"}, "euler_eps0.1");
  const auto c = eoc_table("euler-smooth", 1e-4, 0.01, 20, 6, {"rho", "m1", "E"}, "euler_eps1e-4");
  const std::size_t L = a.size() - 1;
  const bool ok_a = within(a[L].eoc[0], 1.9, 2.1) && factor3(a[L].error[0], 7.732e-6);
  const bool ok_b = within(b[L].eoc[0], 1.9, 2.1);
  const bool ok_c = within(c[L].eoc[0], 1.9, 2.1) && factor3(c[L].error[0], 4.582e-8);
  l.pass = ok_a && ok_b && ok_c;
  std::ostringstream d;
  d << "eps=0.8 e_640 " << fmt("%.3e", a[L].error[0]) << " (ref 7.732e-06) EOC "
    << fmt("%.3f", a[L].eoc[0]) << (ok_a ? "" : " [fail]") << "; eps=0.1 EOC "
    << fmt("%.3f", b[L].eoc[0]) << (ok_b ? "" : " [fail]") << "; eps=1e-4 T=0.01 e_640 "
    << fmt("%.3e", c[L].error[0]) << " (ref 4.582e-08) EOC " << fmt("%.3f", c[L].eoc[0])
    << (ok_c ? "" : " [fail]");
  l.detail = d.str();
  return l;
}

Line cfl_monitors() {
  Line l{"Classical CFL monitors, Riemann data"};
  const double eps[3] = {0.8, 0.3, 0.05}, ref[3] = {0.3838, 0.5839, 2.9317};
  std::ostringstream d;
  l.pass = true;
  for (int k = 0; k < 3; ++k) {
    Overrides o;
    o.eps = eps[k];
    o.n = 200;
    o.cfl = 0.5;
    const RunReport r = run_case(make_case("riemann", o));
    double mx = 0.0;
    for (double c : r.monitors.classical_cfl) mx = std::max(mx, c);
    const bool ok = r.ok && std::abs(mx / ref[k] - 1) <= 0.05;
    l.pass = l.pass && ok;
    d << (k ? "; " : "") << "eps=" << eps[k] << " " << fmt("%.4f", mx) << " (ref " << ref[k] << ")"
      << (r.ok ? "" : " unstable") << (ok ? "" : " [fail]");
  }
  l.detail = d.str();
  return l;
}

Line sod() {
  Line l{"Sod shock tube vs exact Riemann solution"};
  const CaseSpec spec = make_case("sod");
  const RunReport r = run_case(spec);
  if (!r.ok) {
    l.detail = "run failed: " + r.error;
    return l;
  }
  {
    std::ofstream f(out_dir / "fields_sod.csv");
    write_fields_csv(f, r.final_state(), spec);
  }
  const ShockTubeMetrics m = shock_tube_metrics(r.final_state(), spec);
  const double e = m.max_position_error() / m.dx;
  l.pass = e <= 2.0 && m.overshoot <= 0.05;
  std::ostringstream d;
  d << "shock " << fmt("%.4f", m.shock) << "/" << fmt("%.4f", m.shock_exact) << ", contact "
    << fmt("%.4f", m.contact) << "/" << fmt("%.4f", m.contact_exact) << ", fan head "
    << fmt("%.4f", m.fan_head) << "/" << fmt("%.4f", m.fan_head_exact) << ", fan tail "
    << fmt("%.4f", m.fan_tail) << "/" << fmt("%.4f", m.fan_tail_exact)
    << "; worst offset " << fmt("%.2f", e) << " dx (<= 2), overshoot "
    << fmt("%.2f", 100 * m.overshoot) << "% (<= 5%)";
  l.detail = d.str();
  return l;
}

Line ap() {
  Line l{"AP property suite"};
  const auto checks = ap_suite();
  std::ofstream f(out_dir / "ap.csv");
  f << "check,eps,value,bound,pass\n";
  l.pass = true;
  std::ostringstream d;
  int bad = 0;
  for (const auto& c : checks) {
    f << c.name << ',' << format_double(c.eps) << ',' << format_double(c.value) << ','
      << format_double(c.bound) << ',' << c.pass() << '\n';
    if (!c.pass()) {
      l.pass = false;
      d << (bad++ ? "; " : "") << c.name << " eps=" << fmt("%.0e", c.eps) << " "
        << fmt("%.3e", c.value) << " > " << fmt("%.1e", c.bound);
    }
  }
  l.detail = std::to_string(checks.size() - bad) + "/" + std::to_string(checks.size()) +
             " checks within bounds" + (bad ? " [fail: " + d.str() + "]" : std::string());
  return l;
}

Line fig_7_5(int nmax, int nref) {
  Line l{"Fig. 7.5 plateau, shear flow vs spectral reference"};
  const ConservedState ref = shear_reference(nref, 1.0);
  const double eps[3] = {1e-1, 3.25e-2, 1e-3};
  std::ofstream f(out_dir / "fig75.csv");
  f << "eps,n,error_vel\n";
  std::vector<std::vector<double>> err(3);
  std::vector<int> ns;
  for (int n = 16; n <= nmax; n *= 2) ns.push_back(n);
  for (int k = 0; k < 3; ++k) {
    for (int n : ns) {
      Overrides o;
      o.eps = eps[k];
      o.n = n;
      const CaseSpec spec = make_case("shear-euler", o);
      const RunReport r = run_case(spec);
      if (!r.ok) {
        l.detail = "run failed: " + r.error;
        return l;
      }
      err[k].push_back(compare_l1(r.final_state(), ref, spec.gas, "vel"));
      f << format_double(eps[k]) << ',' << n << ',' << format_double(err[k].back()) << '\n';
    }
  }
  // decreasing at first, flattened at the end: the last halving gains less
  // than first order
  std::ostringstream d;
  bool shape = true;
  for (int k = 0; k < 3; ++k) {
    const auto& e = err[k];
    const std::size_t L = e.size() - 1;
    const bool dec = e[1] < e[0];
    const bool flat = e[L - 1] / e[L] < 2.0;
    shape = shape && dec && flat;
    d << "eps=" << eps[k] << ":";
    for (double v : e) d << " " << fmt("%.2e", v);
    d << (dec && flat ? "" : " [no plateau]") << "; ";
  }
  const double p1 = err[0].back(), p2 = err[1].back(), p3 = err[2].back();
  const bool order = p3 <= p2 && p2 <= p1;
  const bool gap = p3 <= 0.1 * p1;
  l.pass = shape && order && gap;
  d << "finest-level ratio eps=1e-3/eps=1e-1 " << fmt("%.3f", p3 / p1) << " (<= 0.1)"
    << (order ? "" : " [levels not ordered]") << (gap ? "" : " [fail]") << "; reference N=" << nref;
  l.detail = d.str();
  return l;
}

Line stability_line() {
  Line l{"Von Neumann stability"};
  const double cstar = stability::naive_threshold(0.1, 1.0, 1e-6);
  std::vector<double> cs;
  for (int k = 1; k <= 2000; ++k) cs.push_back(100.0 * k / 2000);
  double worst = 0.0;
  for (const auto& r : stability::stability_map(cs)) worst = std::max(worst, r.staggered);
  l.pass = std::abs(cstar - 0.5) <= 1e-3 && worst <= 1.0 + 1e-12;
  l.detail = "naive threshold c* = " + fmt("%.6f", cstar) + " (0.500 +- 0.001); max staggered |amp| for c <= 100: " +
             fmt("%.15f", worst);
  return l;
}

Line properties() {
  Line l{"Property suites"};
  const char* suites[] = {"test_core",  "test_operators", "test_imex",  "test_elliptic",
                          "test_isen1d", "test_isen2d",   "test_euler", "test_harness",
                          "test_incompressible", "test_riemann", "test_stability"};
  l.pass = true;
  std::ostringstream d;
  for (const char* s : suites) {
    const std::string cmd = std::string("\"") + APSTAG_TEST_DIR + "/" + s + "\" > /dev/null 2>&1";
    const bool ok = std::system(cmd.c_str()) == 0;
    l.pass = l.pass && ok;
    d << s << (ok ? " ok" : " FAILED") << "; ";
  }
  l.detail = d.str();
  l.detail.resize(l.detail.size() - 2);
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance report"};
  std::string out = "acceptance_out";
  bool strict = false;
  int nmax = 512, nref = 1024;
  std::vector<std::string> skip;
  app.add_option("--out", out, "directory for the tables behind each line");
  app.add_flag("--strict", strict, "exit 1 if any criterion fails");
  app.add_option("--fig-nmax", nmax, "finest compressible grid of the shear-flow study");
  app.add_option("--fig-nref", nref, "spectral reference grid of the shear-flow study");
  app.add_option("--skip", skip, "criteria to skip: table51 euler cfl sod ap fig75 stability properties");
  CLI11_PARSE(app, argc, argv);
  out_dir = out;
  fs::create_directories(out_dir);

  using Check = Line (*)();
  const std::vector<std::pair<std::string, Check>> checks = {
      {"table51", table_5_1}, {"euler", euler_tables}, {"cfl", cfl_monitors}, {"sod", sod},
      {"ap", ap},             {"fig75", nullptr},      {"stability", stability_line},
      {"properties", properties}};
  int failed = 0;
  for (const auto& [key, fn] : checks) {
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) {
      std::printf("[SKIP] %s\n", key.c_str());
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = fn ? fn() : fig_7_5(nmax, nref);
    } catch (const std::exception& e) {
      l.name = key;
      l.detail = std::string("error: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (%.1fs)\n", l.pass ? "PASS" : "FAIL", l.name.c_str(), l.detail.c_str(), s);
    std::fflush(stdout);
    failed += !l.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return strict && failed ? 1 : 0;
}
