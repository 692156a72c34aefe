#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apstag/core.hpp"
#include "apstag/isen1d.hpp"

namespace apstag::harness {

struct CaseSpec {
  std::string id;
  int dim = 1;
  GasModel gas;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int n = 100;
  RunConfig cfg;
  // Sod only: the tube [x_min, x_max] is reflected onto a periodic domain of
  // twice the length; n counts the cells of the physical half.
  bool mirrored = false;
  // Reference recipe: > 0 replaces the step rule by a fixed step (rounded so
  // that an even number of steps lands on t_final).
  double fixed_dt = 0.0;
};

struct CaseInfo {
  std::string id;
  std::string description;
};

const std::vector<CaseInfo>& catalog();

struct Overrides {
  std::optional<double> eps;
  std::optional<int> n;
  std::optional<int> order;
  std::optional<double> cfl;
  std::optional<double> theta;
  std::optional<double> t_final;
  std::optional<bool> acoustic_step;
};

// Throws std::invalid_argument for an unknown id or invalid overrides.
CaseSpec make_case(const std::string& id, const Overrides& o = {});

ConservedState initial_state(const CaseSpec& spec);

struct Monitors {
  std::vector<double> t, dt, classical_cfl;
  std::vector<double> mass_drift, momentum_drift, energy_drift;
  std::vector<int> newton_iterations, cg_iterations;
};

struct RunReport {
  CaseSpec spec;
  std::vector<ConservedState> snapshots;  // initial, every output_every steps, final
  Monitors monitors;
  int steps = 0;
  double seconds = 0.0;
  bool ok = true;
  std::string error;
  int error_step = -1;

  const ConservedState& final_state() const { return snapshots.back(); }
};

// Advances with the step rule, choosing the last two steps so the step count
// is even and the final state is back on the starting parity. Solver errors
// are caught and recorded with their step index.
RunReport run_case(const CaseSpec& spec);

// One solver step of the kind selected by spec (dimension, gas mode, order).
ConservedState advance(const ConservedState& s, const CaseSpec& spec, double dt,
                       StepInfo* info = nullptr);

// Named cell quantity: rho, m1, m2, E, p, u, v.
Field quantity(const ConservedState& s, const GasModel& gas, const std::string& name);

// Conservative restriction of `fine` onto an nx x ny grid by averaging the
// r x r children (r = fine.nx / nx, which must be an integer).
Field restrict_to(const Field& fine, int fine_nx, int fine_ny, int nx, int ny);

// Relative L1 difference of `name` after restricting the reference onto the
// run's grid. "vel" compares u and v together.
double compare_l1(const ConservedState& run, const ConservedState& reference, const GasModel& gas,
                  const std::string& name);

// Incompressible spectral solution of the shear-flow data at t_final, as a
// unit-density state on [0, 2 pi]^2 so compare_l1 can use it.
ConservedState shear_reference(int n, double t_final);

struct EocRow {
  int n = 0;
  std::vector<double> error;  // one per variable
  std::vector<double> eoc;    // NaN on the first row
};

// Self-convergence: row N holds the error between the N and 2N runs.
std::vector<EocRow> compute_eoc(const CaseSpec& spec, const std::vector<int>& n_list,
                                const std::vector<std::string>& vars = {"rho"});

// log2(e_k / e_{k+1}) with a leading NaN.
std::vector<double> eoc_from_errors(const std::vector<double>& errors);

// CSV output with 17 significant digits.
std::string format_double(double v);
void write_fields_csv(std::ostream& os, const ConservedState& s, const CaseSpec& spec);
void write_monitors_csv(std::ostream& os, const Monitors& m);
void write_eoc_csv(std::ostream& os, const std::vector<EocRow>& rows,
                   const std::vector<std::string>& vars);

using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(std::ostream& os, const Report& r);

// INI-style "key = value"; '#' and ';' start comments, [sections] are ignored.
std::map<std::string, std::string> parse_ini(std::istream& is);

const char* git_describe();

// Sod diagnostics against the exact solution. Positions come from the same
// detectors applied to the run and to cell averages of the exact solution:
// midpoint crossings for the shock and the contact, and for the fan edges the
// line through its 25% and 75% crossings extended to the plateaus.
struct ShockTubeMetrics {
  double dx = 0.0;
  double shock = 0.0, shock_exact = 0.0;
  double contact = 0.0, contact_exact = 0.0;
  double fan_head = 0.0, fan_head_exact = 0.0;
  double fan_tail = 0.0, fan_tail_exact = 0.0;
  // largest non-monotone rise of rho or p, or excursion of u outside
  // [0, u*], relative to the jump of that variable
  double overshoot = 0.0;
  double max_position_error() const;
};

ShockTubeMetrics shock_tube_metrics(const ConservedState& final_state, const CaseSpec& spec);

// Low-Mach checks on well-prepared data: per-step flatness of rho
// (isentropic) or E (full Euler) against 10 eps^2, the divergence monitor
// against max(10 eps, 1e-10), and the eps independence of the step size.
struct ApCheck {
  std::string name;  // e.g. "euler-2d/div"
  double eps = 0.0;
  double value = 0.0;  // worst over the steps
  double bound = 0.0;
  bool pass() const { return value <= bound; }
};

std::vector<ApCheck> ap_suite(const std::vector<double>& eps_list = {1e-4, 1e-6}, int n = 32,
                              int steps = 10);

}  // namespace apstag::harness
