#include "apstag/elliptic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "apstag/operators.hpp"
#include "fftw_lock.hpp"

namespace apstag {

namespace {

double norm_inf(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double mean(const Field& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(f.size());
}

// Non-periodic tridiagonal; the corner entries of lower/upper are ignored.
void thomas(const Field& lo, const Field& di, const Field& up, const Field& r, Field& x) {
  const std::size_t n = di.size();
  Field c(n), d(n);
  double piv = di[0];
  if (piv == 0.0) throw SolverError(ErrorCode::SingularSystem, "zero pivot in tridiagonal solve");
  c[0] = up[0] / piv;
  d[0] = r[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = di[i] - lo[i] * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) {
      throw SolverError(ErrorCode::SingularSystem, "zero pivot in tridiagonal solve");
    }
    c[i] = up[i] / piv;
    d[i] = (r[i] - lo[i] * d[i - 1]) / piv;
  }
  x.assign(n, 0.0);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
}

int cg_limit(const SolveOptions& opt, std::size_t n) {
  return opt.cg_max_iter > 0 ? opt.cg_max_iter : static_cast<int>(10 * n);
}

void check_positive_rhs(const Field& rhs) {
  for (std::size_t k = 0; k < rhs.size(); ++k) {
    if (!(rhs[k] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveDensity,
                        "density predictor <= 0 at cell " + std::to_string(k));
    }
  }
}

}  // namespace

Field cyclic_tridiag_solve(const Field& lower, const Field& diag, const Field& upper,
                           const Field& rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (n <= 2) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + i] += diag[i];
      a[i * n + (i + n - 1) % n] += lower[i];
      a[i * n + (i + 1) % n] += upper[i];
    }
    return dense_solve(a, rhs);
  }
  const double alpha = upper[n - 1];  // row n-1 couples x_0
  const double beta = lower[0];       // row 0 couples x_{n-1}
  const double g = -diag[0];
  Field bb = diag;
  bb[0] = diag[0] - g;
  bb[n - 1] = diag[n - 1] - alpha * beta / g;
  Field x, z;
  thomas(lower, bb, upper, rhs, x);
  Field u(n, 0.0);
  u[0] = g;
  u[n - 1] = alpha;
  thomas(lower, bb, upper, u, z);
  const double denom = 1.0 + z[0] + beta * z[n - 1] / g;
  if (denom == 0.0) throw SolverError(ErrorCode::SingularSystem, "singular cyclic system");
  const double fact = (x[0] + beta * x[n - 1] / g) / denom;
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

Field cyclic_tridiag_solve_strided(const Field& lower, const Field& diag, const Field& upper,
                                   const Field& rhs, int stride) {
  const int n = static_cast<int>(diag.size());
  if (stride == 1) return cyclic_tridiag_solve(lower, diag, upper, rhs);
  const int chains = std::gcd(n, stride);
  const int len = n / chains;
  Field out(diag.size());
  Field lo(len), di(len), up(len), r(len);
  for (int c = 0; c < chains; ++c) {
    for (int t = 0; t < len; ++t) {
      const int idx = (c + t * stride) % n;
      lo[t] = lower[idx];
      di[t] = diag[idx];
      up[t] = upper[idx];
      r[t] = rhs[idx];
    }
    const Field x = cyclic_tridiag_solve(lo, di, up, r);
    for (int t = 0; t < len; ++t) out[(c + t * stride) % n] = x[t];
  }
  return out;
}

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    }
    if (a[piv * n + k] == 0.0) throw SolverError(ErrorCode::SingularSystem, "singular dense matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct SpectralPreconditioner::Impl {
  int nx = 0, ny = 0;
  int nxh = 0;
  std::vector<double> symbol;  // -L hat >= 0, size ny * (nx/2 + 1)
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;

  ~Impl() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }
};

SpectralPreconditioner::SpectralPreconditioner(const FieldGrid& g, Stencil stencil)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.nx = g.nx;
  m.ny = g.ny;
  m.nxh = g.nx / 2 + 1;
  const std::size_t ns = static_cast<std::size_t>(m.ny) * m.nxh;
  m.real = fftw_alloc_real(g.size());
  m.spec = fftw_alloc_complex(ns);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    m.fwd = fftw_plan_dft_r2c_2d(m.ny, m.nx, m.real, m.spec, FFTW_ESTIMATE);
    m.bwd = fftw_plan_dft_c2r_2d(m.ny, m.nx, m.spec, m.real, FFTW_ESTIMATE);
  }
  m.symbol.resize(ns);
  const double pi = std::acos(-1.0);
  for (int q = 0; q < m.ny; ++q) {
    for (int p = 0; p < m.nxh; ++p) {
      double sx, sy;
      if (stencil == Stencil::Compact) {
        sx = 4.0 * std::pow(std::sin(pi * p / m.nx), 2) / (g.dx * g.dx);
        sy = 4.0 * std::pow(std::sin(pi * q / m.ny), 2) / (g.dy * g.dy);
      } else {
        sx = std::pow(std::sin(2.0 * pi * p / m.nx), 2) / (g.dx * g.dx);
        sy = std::pow(std::sin(2.0 * pi * q / m.ny), 2) / (g.dy * g.dy);
      }
      m.symbol[static_cast<std::size_t>(q) * m.nxh + p] = sx + sy;
    }
  }
}

SpectralPreconditioner::~SpectralPreconditioner() = default;

Field SpectralPreconditioner::apply(const Field& r) const {
  Impl& m = *impl_;
  std::copy(r.begin(), r.end(), m.real);
  fftw_execute(m.fwd);
  const double scale = 1.0 / (static_cast<double>(m.nx) * m.ny);
  for (std::size_t k = 0; k < m.symbol.size(); ++k) {
    const double w = scale / (d_ + k_ * m.symbol[k]);
    m.spec[k][0] *= w;
    m.spec[k][1] *= w;
  }
  fftw_execute(m.bwd);
  return Field(m.real, m.real + r.size());
}

CgResult conjugate_gradient(const LinearOp& apply, const Field& b, Field& x,
                            const LinearOp& precond, double tol, int max_iter) {
  const std::size_t n = b.size();
  if (x.size() != n) x.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  const double target = tol * (bnorm > 0.0 ? bnorm : 1.0);
  Field r = apply(x);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = std::sqrt(dot(r, r));
  CgResult res;
  if (rnorm <= target) {
    res.residual = rnorm / (bnorm > 0.0 ? bnorm : 1.0);
    return res;
  }
  Field z = precond ? precond(r) : r;
  Field p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    const Field ap = apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      throw SolverError(ErrorCode::CgStagnation, "CG lost positive definiteness");
    }
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rnorm = std::sqrt(dot(r, r));
    if (!std::isfinite(rnorm)) throw SolverError(ErrorCode::CgStagnation, "CG residual not finite");
    if (rnorm <= target) {
      res.iterations = it;
      res.residual = rnorm / (bnorm > 0.0 ? bnorm : 1.0);
      return res;
    }
    z = precond ? precond(r) : r;
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError(ErrorCode::CgStagnation,
                    "CG did not converge in " + std::to_string(max_iter) + " iterations");
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.newton_tol = cfg.newton_tol;
  o.newton_max_iter = cfg.newton_max_iter;
  o.linearized = cfg.pressure_path == PressurePath::Linearized;
  o.cg_tol = cfg.cg_tol;
  o.cg_max_iter = cfg.cg_max_iter;
  return o;
}

Field Deviation::full() const {
  Field f = delta;
  for (double& v : f) v += ref;
  return f;
}

namespace {

// Shared Newton driver. `residual` returns F(delta) and the diagonal
// rho'(p); `correction` solves J d = -F.
template <class Residual, class Correction>
Deviation newton(const Field& rhs, double C, double gamma, const SolveOptions& opt,
                 SolveStats* stats, Residual residual, Correction correction) {
  check_positive_rhs(rhs);
  Deviation dev;
  dev.ref = C * std::pow(mean(rhs), gamma);
  dev.delta.resize(rhs.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) dev.delta[k] = C * std::pow(rhs[k], gamma) - dev.ref;
  const double target = opt.newton_tol * (1.0 + norm_inf(rhs));
  const int max_iter = opt.linearized ? 1 : opt.newton_max_iter;
  Field F, jd;
  for (int it = 0;; ++it) {
    residual(dev, F, jd);
    const double fn = norm_inf(F);
    if (!std::isfinite(fn)) throw SolverError(ErrorCode::NewtonDivergence, "residual not finite");
    if (stats) {
      stats->newton_iterations = it;
      stats->residual = fn;
    }
    if (fn <= target || (opt.linearized && it == 1)) return dev;
    if (it >= max_iter) {
      throw SolverError(ErrorCode::NewtonDivergence,
                        "Newton did not converge in " + std::to_string(max_iter) +
                            " iterations (residual " + std::to_string(fn) + ")");
    }
    Field step = correction(F, jd);
    double a = 1.0;
    for (int halvings = 0;; ++halvings) {
      bool ok = true;
      for (std::size_t k = 0; k < step.size(); ++k) {
        if (!(dev.ref + dev.delta[k] + a * step[k] > 0.0)) {
          ok = false;
          break;
        }
      }
      if (ok) break;
      if (halvings >= 30) {
        throw SolverError(ErrorCode::NonPositiveIterate, "Newton iterate stays non-positive");
      }
      a *= 0.5;
    }
    for (std::size_t k = 0; k < step.size(); ++k) dev.delta[k] += a * step[k];
  }
}

}  // namespace

Deviation pressure_solve_1d(const Field& rhs, double C, double gamma, double k, int stride,
                            const SolveOptions& opt, SolveStats* stats) {
  const int n = static_cast<int>(rhs.size());
  const double ig = 1.0 / gamma;
  auto residual = [&](const Deviation& dev, Field& F, Field& jd) {
    F.resize(n);
    jd.resize(n);
    for (int j = 0; j < n; ++j) {
      const double p = dev.ref + dev.delta[j];
      if (!(p > 0.0)) {
        throw SolverError(ErrorCode::NonPositivePressure, "pressure <= 0 at cell " + std::to_string(j));
      }
      const double rho = std::pow(p / C, ig);
      const double lap = dev.delta[(j + stride) % n] - 2.0 * dev.delta[j] +
                         dev.delta[(j - stride % n + n) % n];
      F[j] = rho - rhs[j] - k * lap;
      jd[j] = rho * ig / p;
    }
  };
  auto correction = [&](const Field& F, const Field& jd) {
    Field lo(n, -k), up(n, -k), di(n), r(n);
    for (int j = 0; j < n; ++j) {
      di[j] = jd[j] + 2.0 * k;
      r[j] = -F[j];
    }
    return cyclic_tridiag_solve_strided(lo, di, up, r, stride);
  };
  return newton(rhs, C, gamma, opt, stats, residual, correction);
}

Deviation pressure_solve_2d(const Field& rhs, const FieldGrid& grid, double C, double gamma,
                            double k, Stencil stencil, const SolveOptions& opt,
                            SolveStats* stats) {
  const std::size_t n = rhs.size();
  const double ig = 1.0 / gamma;
  auto lap = [&](const Field& f) {
    return stencil == Stencil::Compact ? ops::laplacian_2d(f, grid) : ops::wide_laplacian_2d(f, grid);
  };
  const double lap_diag = stencil == Stencil::Compact
                              ? 2.0 / (grid.dx * grid.dx) + 2.0 / (grid.dy * grid.dy)
                              : 0.5 / (grid.dx * grid.dx) + 0.5 / (grid.dy * grid.dy);
  std::unique_ptr<SpectralPreconditioner> spec;
  if (opt.precond == PreconditionerKind::Spectral) {
    spec = std::make_unique<SpectralPreconditioner>(grid, stencil);
  }
  int cg_total = 0;
  auto residual = [&](const Deviation& dev, Field& F, Field& jd) {
    const Field l = lap(dev.delta);
    F.resize(n);
    jd.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double p = dev.ref + dev.delta[j];
      if (!(p > 0.0)) {
        throw SolverError(ErrorCode::NonPositivePressure, "pressure <= 0 at cell " + std::to_string(j));
      }
      const double rho = std::pow(p / C, ig);
      F[j] = rho - rhs[j] - k * l[j];
      jd[j] = rho * ig / p;
    }
  };
  auto correction = [&](const Field& F, const Field& jd) {
    auto apply = [&](const Field& x) {
      Field y = lap(x);
      for (std::size_t j = 0; j < n; ++j) y[j] = jd[j] * x[j] - k * y[j];
      return y;
    };
    LinearOp pre;
    if (opt.precond == PreconditionerKind::Spectral) {
      spec->set_coefficients(mean(jd), k);
      pre = [&](const Field& r) { return spec->apply(r); };
    } else if (opt.precond == PreconditionerKind::Jacobi) {
      pre = [&](const Field& r) {
        Field z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = r[j] / (jd[j] + k * lap_diag);
        return z;
      };
    }
    Field b(n), x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) b[j] = -F[j];
    cg_total += conjugate_gradient(apply, b, x, pre, opt.cg_tol, cg_limit(opt, n)).iterations;
    return x;
  };
  Deviation dev = newton(rhs, C, gamma, opt, stats, residual, correction);
  if (stats) stats->cg_iterations = cg_total;
  return dev;
}

Deviation energy_solve_1d(const Field& rhs, const Field& f, double k, int stride) {
  const int n = static_cast<int>(rhs.size());
  for (int j = 0; j < n; ++j) {
    if (!(f[j] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveCoefficient,
                        "energy coefficient <= 0 at face " + std::to_string(j));
    }
  }
  Deviation dev;
  dev.ref = mean(rhs);
  Field lo(n), di(n), up(n), r(n);
  for (int j = 0; j < n; ++j) {
    const double fl = f[(j - stride % n + n) % n];
    lo[j] = -k * fl;
    up[j] = -k * f[j];
    di[j] = 1.0 + k * (f[j] + fl);
    r[j] = rhs[j] - dev.ref;
  }
  dev.delta = cyclic_tridiag_solve_strided(lo, di, up, r, stride);
  return dev;
}

Deviation energy_solve_2d(const Field& rhs, const Field& a, const FieldGrid& g, double k,
                          Stencil stencil, const SolveOptions& opt, SolveStats* stats) {
  const std::size_t n = rhs.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!(a[j] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveCoefficient,
                        "energy coefficient <= 0 at cell " + std::to_string(j));
    }
  }
  auto op = [&](const Field& x) {
    return stencil == Stencil::Compact ? ops::laplacian_varcoef(x, a, g) : ops::wide_varcoef_2d(x, a, g);
  };
  auto apply = [&](const Field& x) {
    Field y = op(x);
    for (std::size_t j = 0; j < n; ++j) y[j] = x[j] - k * y[j];
    return y;
  };
  Deviation dev;
  dev.ref = mean(rhs);
  Field b(n);
  for (std::size_t j = 0; j < n; ++j) b[j] = rhs[j] - dev.ref;

  std::unique_ptr<SpectralPreconditioner> spec;
  LinearOp pre;
  if (opt.precond == PreconditionerKind::Spectral) {
    spec = std::make_unique<SpectralPreconditioner>(g, stencil);
    spec->set_coefficients(1.0, k * mean(a));
    pre = [&](const Field& r) { return spec->apply(r); };
  } else if (opt.precond == PreconditionerKind::Jacobi) {
    Field diag(n);
    const double ix = 1.0 / (g.dx * g.dx), iy = 1.0 / (g.dy * g.dy);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t c = g.index(i, j);
        double s;
        if (stencil == Stencil::Compact) {
          s = ix * (a[c] + 0.5 * (a[g.at(i + 1, j)] + a[g.at(i - 1, j)])) +
              iy * (a[c] + 0.5 * (a[g.at(i, j + 1)] + a[g.at(i, j - 1)]));
        } else {
          s = 0.25 * ix * (a[g.at(i + 1, j)] + a[g.at(i - 1, j)]) +
              0.25 * iy * (a[g.at(i, j + 1)] + a[g.at(i, j - 1)]);
        }
        diag[c] = 1.0 + k * s;
      }
    }
    pre = [diag](const Field& r) {
      Field z(r.size());
      for (std::size_t j = 0; j < r.size(); ++j) z[j] = r[j] / diag[j];
      return z;
    };
  }
  dev.delta.assign(n, 0.0);
  const CgResult res = conjugate_gradient(apply, b, dev.delta, pre, opt.cg_tol, cg_limit(opt, n));
  if (stats) {
    stats->cg_iterations = res.iterations;
    stats->residual = res.residual;
  }
  return dev;
}

}  // namespace apstag
