#include "apstag/incompressible.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fftw_lock.hpp"

namespace apstag::incompressible {

namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

}  // namespace

struct SpectralSolver::Impl {
  int n, nh;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<int> kx, ky;
  std::vector<char> keep;  // 2/3 rule mask

  explicit Impl(int n_) : n(n_), nh(n_ / 2 + 1) {
    real = fftw_alloc_real(static_cast<std::size_t>(n) * n);
    spec = fftw_alloc_complex(static_cast<std::size_t>(n) * nh);
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      fwd = fftw_plan_dft_r2c_2d(n, n, real, spec, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_2d(n, n, spec, real, FFTW_ESTIMATE);
    }
    kx.resize(nh);
    ky.resize(n);
    for (int i = 0; i < nh; ++i) kx[i] = i;
    for (int j = 0; j < n; ++j) ky[j] = j <= n / 2 ? j : j - n;
    keep.resize(static_cast<std::size_t>(n) * nh);
    const int cut = n / 3;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < nh; ++i) keep[j * nh + i] = std::abs(kx[i]) <= cut && std::abs(ky[j]) <= cut;
    }
  }
  ~Impl() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }

  std::vector<cplx> forward(const Field& f) const {
    std::copy(f.begin(), f.end(), real);
    fftw_execute(fwd);
    std::vector<cplx> out(static_cast<std::size_t>(n) * nh);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
    return out;
  }
  Field backward(const std::vector<cplx>& s) const {
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (std::size_t k = 0; k < s.size(); ++k) {
      spec[k][0] = s[k].real();
      spec[k][1] = s[k].imag();
    }
    fftw_execute(bwd);
    Field out(static_cast<std::size_t>(n) * n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = real[k] * scale;
    return out;
  }
  // spectral derivative; the Nyquist wavenumber is dropped since its
  // derivative has no real representation
  std::vector<cplx> deriv(const std::vector<cplx>& s, bool in_x) const {
    std::vector<cplx> d(s.size());
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < nh; ++i) {
        const int k = in_x ? kx[i] : ky[j];
        const bool nyq = (n % 2 == 0) && (in_x ? i == n / 2 : j == n / 2);
        d[j * nh + i] = nyq ? cplx{} : cplx(0.0, k) * s[j * nh + i];
      }
    }
    return d;
  }
  std::vector<cplx> inverse_laplacian(const std::vector<cplx>& w) const {
    std::vector<cplx> p(w.size());
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < nh; ++i) {
        const double k2 = static_cast<double>(kx[i]) * kx[i] + static_cast<double>(ky[j]) * ky[j];
        p[j * nh + i] = k2 == 0.0 ? cplx{} : w[j * nh + i] / k2;
      }
    }
    return p;
  }
};

SpectralSolver::SpectralSolver(int n) : impl_(std::make_unique<Impl>(n)), n_(n) {
  if (n < 4) throw SolverError(ErrorCode::InvalidArgument, "spectral grid needs n >= 4");
}

SpectralSolver::~SpectralSolver() = default;

Field SpectralSolver::poisson(const Field& omega) const {
  double mean = 0.0, amp = 0.0;
  for (double w : omega) {
    mean += w;
    amp = std::max(amp, std::abs(w));
  }
  mean /= static_cast<double>(omega.size());
  if (std::abs(mean) > 1e-12 * std::max(1.0, amp)) {
    throw SolverError(ErrorCode::NonZeroMeanVorticity, "vorticity mean " + std::to_string(mean));
  }
  return impl_->backward(impl_->inverse_laplacian(impl_->forward(omega)));
}

std::pair<Field, Field> SpectralSolver::velocity(const Field& omega) const {
  const auto psi = impl_->inverse_laplacian(impl_->forward(omega));
  Field u = impl_->backward(impl_->deriv(psi, false));
  Field v = impl_->backward(impl_->deriv(psi, true));
  for (double& x : v) x = -x;
  return {u, v};
}

Field SpectralSolver::rhs(const Field& omega) const {
  const Impl& m = *impl_;
  auto w = m.forward(omega);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!m.keep[k]) w[k] = {};
  }
  const auto psi = m.inverse_laplacian(w);
  const Field u = m.backward(m.deriv(psi, false));
  const Field v = m.backward(m.deriv(psi, true));  // -v
  const Field wx = m.backward(m.deriv(w, true));
  const Field wy = m.backward(m.deriv(w, false));
  Field adv(omega.size());
  for (std::size_t c = 0; c < adv.size(); ++c) adv[c] = -(u[c] * wx[c] - v[c] * wy[c]);
  auto a = m.forward(adv);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!m.keep[k]) a[k] = {};
  }
  return m.backward(a);
}

Field SpectralSolver::rk4_step(const Field& w, double dt) const {
  auto axpy = [](const Field& x, double a, const Field& y) {
    Field r(x.size());
    for (std::size_t c = 0; c < r.size(); ++c) r[c] = x[c] + a * y[c];
    return r;
  };
  const Field k1 = rhs(w);
  const Field k2 = rhs(axpy(w, 0.5 * dt, k1));
  const Field k3 = rhs(axpy(w, 0.5 * dt, k2));
  const Field k4 = rhs(axpy(w, dt, k3));
  Field out(w.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = w[c] + dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  }
  return out;
}

Field poisson_solve_spectral(const VorticityField& w) { return SpectralSolver(w.n).poisson(w.omega); }

std::pair<Field, Field> velocity_from_omega(const VorticityField& w) {
  return SpectralSolver(w.n).velocity(w.omega);
}

VorticityField rk4_step(const VorticityField& w, double dt) {
  return {w.n, SpectralSolver(w.n).rk4_step(w.omega, dt)};
}

VorticityField shear_flow_init(int n, double delta, double width) {
  VorticityField w{n, Field(static_cast<std::size_t>(n) * n)};
  const double h = 2.0 * kPi / n;
  auto sech2 = [](double z) {
    const double c = std::cosh(z);
    return 1.0 / (c * c);
  };
  double mean = 0.0;
  for (int j = 0; j < n; ++j) {
    const double y = (j + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * h;
      const double layer = y <= kPi ? -sech2((y - 0.5 * kPi) / width) : sech2((1.5 * kPi - y) / width);
      const double v = delta * std::cos(x) + layer / width;
      w.omega[j * n + i] = v;
      mean += v;
    }
  }
  mean /= static_cast<double>(w.omega.size());
  for (double& v : w.omega) v -= mean;
  return w;
}

double kinetic_energy(const SpectralSolver& s, const Field& omega) {
  const auto [u, v] = s.velocity(omega);
  const double h = 2.0 * kPi / s.n();
  double e = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) e += u[c] * u[c] + v[c] * v[c];
  return 0.5 * e * h * h;
}

double enstrophy(const Field& omega, int n) {
  const double h = 2.0 * kPi / n;
  double e = 0.0;
  for (double w : omega) e += w * w;
  return e * h * h;
}

RunResult run(const VorticityField& w0, double t_final, double cfl) {
  const SpectralSolver s(w0.n);
  const auto [u, v] = s.velocity(w0.omega);
  double umax = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) umax = std::max(umax, std::hypot(u[c], v[c]));
  RunResult r{w0, 0, 0.0};
  if (t_final <= 0.0) return r;
  const double h = 2.0 * kPi / w0.n;
  const double dt0 = umax > 0.0 ? cfl * h / umax : t_final;
  r.steps = static_cast<int>(std::ceil(t_final / dt0 - 1e-12));
  r.dt = t_final / r.steps;
  for (int k = 0; k < r.steps; ++k) r.w.omega = s.rk4_step(r.w.omega, r.dt);
  return r;
}

}  // namespace apstag::incompressible
