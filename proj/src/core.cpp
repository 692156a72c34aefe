#include "apstag/core.hpp"

#include <algorithm>
#include <cmath>

namespace apstag {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::NonPositivePressure: return "NonPositivePressure";
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::ZeroWaveSpeed: return "ZeroWaveSpeed";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::NonPositiveIterate: return "NonPositiveIterate";
    case ErrorCode::CgStagnation: return "CgStagnation";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateTableau: return "DegenerateTableau";
    case ErrorCode::NonZeroMeanVorticity: return "NonZeroMeanVorticity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

SolverError::SolverError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

FieldGrid FieldGrid::line(int n, double x_min, double x_max) {
  if (n <= 0 || !(x_max > x_min)) {
    throw SolverError(ErrorCode::InvalidArgument, "line grid needs n > 0 and x_max > x_min");
  }
  FieldGrid g;
  g.dim = 1;
  g.nx = n;
  g.ny = 1;
  g.x_min = x_min;
  g.x_max = x_max;
  g.y_min = 0.0;
  g.y_max = 1.0;
  g.dx = (x_max - x_min) / n;
  g.dy = 1.0;
  return g;
}

FieldGrid FieldGrid::square(int nx, int ny, double x_min, double x_max, double y_min,
                            double y_max) {
  if (nx <= 0 || ny <= 0 || !(x_max > x_min) || !(y_max > y_min)) {
    throw SolverError(ErrorCode::InvalidArgument, "2D grid needs positive sizes and extents");
  }
  FieldGrid g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.x_min = x_min;
  g.x_max = x_max;
  g.y_min = y_min;
  g.y_max = y_max;
  g.dx = (x_max - x_min) / nx;
  g.dy = (y_max - y_min) / ny;
  return g;
}

double FieldGrid::x(int i) const {
  const double shift = parity == Parity::Integer ? 0.5 : 1.0;
  return x_min + (i + shift) * dx;
}

double FieldGrid::y(int j) const {
  if (dim == 1) return 0.0;
  const double shift = parity == Parity::Integer ? 0.5 : 1.0;
  return y_min + (j + shift) * dy;
}

FieldGrid FieldGrid::flipped() const {
  FieldGrid g = *this;
  g.parity = parity == Parity::Integer ? Parity::HalfInteger : Parity::Integer;
  return g;
}

GasModel GasModel::isentropic(double gamma, double eps, double C) {
  GasModel g{gamma, eps, Mode::Isentropic, C};
  g.validate();
  return g;
}

GasModel GasModel::full_euler(double gamma, double eps) {
  GasModel g{gamma, eps, Mode::FullEuler, 1.0};
  g.validate();
  return g;
}

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw SolverError(ErrorCode::InvalidArgument, "gamma must exceed 1");
  if (!(eps > 0.0)) throw SolverError(ErrorCode::InvalidArgument, "eps must be positive");
  if (!(C > 0.0)) throw SolverError(ErrorCode::InvalidArgument, "pressure constant must be positive");
}

void RunConfig::validate() const {
  if (!(theta >= 1.0 && theta <= 2.0)) {
    throw SolverError(ErrorCode::InvalidArgument, "theta must lie in [1, 2]");
  }
  if (!(cfl_imp > 0.0 && cfl_imp < 1.0)) {
    throw SolverError(ErrorCode::InvalidArgument, "cfl_imp must lie in (0, 1)");
  }
  if (order != 1 && order != 2) throw SolverError(ErrorCode::InvalidArgument, "order must be 1 or 2");
  const double ars = 1.0 - 1.0 / std::sqrt(2.0);
  if (!(imex_c > 1.0) && std::abs(imex_c - ars) > 1e-12) {
    throw SolverError(ErrorCode::InvalidArgument, "imex_c must exceed 1 or equal 1 - 1/sqrt(2)");
  }
}

void ConservedState::validate() const {
  const std::size_t n = grid.size();
  if (rho.size() != n || m1.size() != n) {
    throw SolverError(ErrorCode::InvalidArgument, "field shape does not match grid");
  }
  if (grid.dim == 2 && m2.size() != n) {
    throw SolverError(ErrorCode::InvalidArgument, "2D state needs two momentum components");
  }
  if (!E.empty() && E.size() != n) {
    throw SolverError(ErrorCode::InvalidArgument, "energy shape does not match grid");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(rho[k] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity,
                        "rho <= 0 at cell " + std::to_string(k));
    }
  }
}

double total_energy(double rho, double u, double v, double p, const GasModel& gas) {
  return p / (gas.gamma - 1.0) + 0.5 * gas.eps * gas.eps * rho * (u * u + v * v);
}

Field pressure(const ConservedState& state, const GasModel& gas) {
  const std::size_t n = state.rho.size();
  Field p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rho = state.rho[k];
    if (!(rho > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity, "rho <= 0 at cell " + std::to_string(k));
    }
    if (gas.is_isentropic()) {
      p[k] = gas.C * std::pow(rho, gas.gamma);
    } else {
      if (state.E.size() != n) {
        throw SolverError(ErrorCode::InvalidArgument, "full Euler pressure needs an energy field");
      }
      double m2 = state.m1[k] * state.m1[k];
      if (!state.m2.empty()) m2 += state.m2[k] * state.m2[k];
      p[k] = (gas.gamma - 1.0) * (state.E[k] - gas.eps * gas.eps * m2 / (2.0 * rho));
      if (!(p[k] > 0.0)) {
        throw SolverError(ErrorCode::NonPositivePressure, "p <= 0 at cell " + std::to_string(k));
      }
    }
  }
  return p;
}

Field sound_speed(const ConservedState& state, const GasModel& gas) {
  Field c = pressure(state, gas);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::sqrt(gas.gamma * c[k] / state.rho[k]);
  return c;
}

TimeStep time_step(const ConservedState& state, const GasModel& gas, const RunConfig& cfg) {
  const Field cs = sound_speed(state, gas);
  const double damp = cfg.acoustic_step ? 1.0 / gas.eps : std::min(1.0, 1.0 / gas.eps);
  double lam_x = 0.0, lam_y = 0.0;          // max(|u| + c~)
  double classic_x = 0.0, classic_y = 0.0;  // max(|u| + c/eps)
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double u = std::abs(state.m1[k] / state.rho[k]);
    lam_x = std::max(lam_x, u + cs[k] * damp);
    classic_x = std::max(classic_x, u + cs[k] / gas.eps);
    if (state.two_dimensional()) {
      const double v = std::abs(state.m2[k] / state.rho[k]);
      lam_y = std::max(lam_y, v + cs[k] * damp);
      classic_y = std::max(classic_y, v + cs[k] / gas.eps);
    }
  }
  const FieldGrid& g = state.grid;
  TimeStep ts;
  if (g.dim == 1) {
    if (!(lam_x > 0.0)) throw SolverError(ErrorCode::ZeroWaveSpeed, "no wave speed in 1D state");
    ts.dt = cfg.cfl_imp * g.dx / lam_x;
    ts.classical_cfl = ts.dt * classic_x / g.dx;
  } else {
    const double denom = lam_x / g.dx + lam_y / g.dy;
    if (!(denom > 0.0)) throw SolverError(ErrorCode::ZeroWaveSpeed, "no wave speed in 2D state");
    ts.dt = cfg.cfl_imp / denom;
    ts.classical_cfl = ts.dt * (classic_x / g.dx + classic_y / g.dy);
  }
  return ts;
}

}  // namespace apstag
