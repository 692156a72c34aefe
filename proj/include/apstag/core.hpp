#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace apstag {

using Field = std::vector<double>;

enum class ErrorCode {
  NonPositiveDensity,
  NonPositivePressure,
  NonPositiveCoefficient,
  ZeroWaveSpeed,
  NewtonDivergence,
  NonPositiveIterate,
  CgStagnation,
  SingularSystem,
  DegenerateTableau,
  NonZeroMeanVorticity,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// Every failure raised by the solvers carries one of the codes above so the
// CLI can map it to an exit status without string matching.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Parity { Integer, HalfInteger };

// Uniform periodic grid. Integer-parity cells are centred at
// x_min + (i + 1/2) dx, half-parity cells at x_min + (i + 1) dx, i = 0..nx-1
// (the last half cell sits on x_max, i.e. on x_min by periodicity).
struct FieldGrid {
  int dim = 1;
  int nx = 1;
  int ny = 1;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  double dx = 1.0;
  double dy = 1.0;
  Parity parity = Parity::Integer;

  static FieldGrid line(int n, double x_min, double x_max);
  static FieldGrid square(int nx, int ny, double x_min, double x_max, double y_min,
                          double y_max);

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  int wrap_x(int i) const { return ((i % nx) + nx) % nx; }
  int wrap_y(int j) const { return ((j % ny) + ny) % ny; }
  std::size_t at(int i, int j) const { return index(wrap_x(i), wrap_y(j)); }

  double x(int i) const;
  double y(int j) const;

  // Cell k of the opposite parity lies between cells k + offset and
  // k + offset + 1 of this parity (per axis).
  int stagger_offset() const { return parity == Parity::Integer ? 0 : -1; }

  FieldGrid flipped() const;
};

struct GasModel {
  enum class Mode { Isentropic, FullEuler };

  double gamma = 1.4;
  double eps = 1.0;
  Mode mode = Mode::FullEuler;
  double C = 1.0;

  static GasModel isentropic(double gamma, double eps, double C = 1.0);
  static GasModel full_euler(double gamma, double eps);

  bool is_isentropic() const { return mode == Mode::Isentropic; }
  void validate() const;
};

enum class PressurePath { Newton, Linearized };

struct RunConfig {
  double cfl_imp = 0.5;
  double theta = 1.5;
  int order = 2;
  double imex_c = 2.25;
  double t_final = 0.0;
  int output_every = 0;  // 0 = initial and final snapshots only
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double cg_tol = 1e-11;
  int cg_max_iter = 0;  // 0 = 10 * number of unknowns
  PressurePath pressure_path = PressurePath::Newton;
  // use the full acoustic speed c/eps in the step size instead of c*min(1, 1/eps)
  bool acoustic_step = false;

  void validate() const;
};

struct ConservedState {
  FieldGrid grid;
  double t = 0.0;
  Field rho;
  Field m1;
  Field m2;  // empty in 1D
  Field E;   // empty for isentropic runs

  bool has_energy() const { return !E.empty(); }
  bool two_dimensional() const { return grid.dim == 2; }

  // Checks shapes and density positivity.
  void validate() const;
};

Field pressure(const ConservedState& state, const GasModel& gas);
Field sound_speed(const ConservedState& state, const GasModel& gas);

struct TimeStep {
  double dt = 0.0;
  double classical_cfl = 0.0;  // dt * max(|u| + c_s/eps) / dx
};

TimeStep time_step(const ConservedState& state, const GasModel& gas, const RunConfig& cfg);

// Total energy from primitive data via the scaled EOS.
double total_energy(double rho, double u, double v, double p, const GasModel& gas);

}  // namespace apstag
