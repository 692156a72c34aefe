#include "apstag/stability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apstag::stability {

NaiveAmp amp_naive(double c, double xi) {
  using namespace std::complex_literals;
  const double s = std::sin(0.5 * xi), co = std::cos(0.5 * xi);
  NaiveAmp a;
  a.rho = co - 2.0i * c * s / (1.0 + 1.0i * c * std::sin(xi));
  a.F = s * s * (1.0 - 4.0 * c * c * (s * s * s * s - co * co));
  return a;
}

double amp_staggered(double c, double xi) {
  const double co = std::cos(0.5 * xi), sx = std::sin(xi);
  return co * co / (1.0 + c * c * sx * sx);
}

std::vector<double> xi_samples(int n) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> xi(n);
  const double pi = std::numbers::pi;
  for (int k = 0; k < n; ++k) xi[k] = -pi + 2.0 * pi * k / (n - 1);
  xi.back() = pi;
  return xi;
}

double max_abs_naive(double c, const std::vector<double>& xi) {
  double m = 0.0;
  for (double x : xi) m = std::max(m, std::abs(amp_naive(c, x).rho));
  return m;
}

double max_abs_staggered(double c, const std::vector<double>& xi) {
  double m = 0.0;
  for (double x : xi) m = std::max(m, std::sqrt(amp_staggered(c, x)));
  return m;
}

bool naive_unstable(double c, const std::vector<double>& xi, double tol) {
  for (double x : xi) {
    if (amp_naive(c, x).F < -tol) return true;
  }
  return false;
}

double naive_threshold(double lo, double hi, double tol, int samples) {
  const auto xi = xi_samples(samples);
  if (naive_unstable(lo, xi) || !naive_unstable(hi, xi)) {
    throw std::invalid_argument("threshold not bracketed");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (naive_unstable(mid, xi) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<MapRow> stability_map(const std::vector<double>& c_range, int samples) {
  std::vector<MapRow> rows;
  if (c_range.empty()) return rows;
  const auto xi = xi_samples(samples);
  for (double c : c_range) rows.push_back({c, max_abs_naive(c, xi), max_abs_staggered(c, xi)});
  return rows;
}

}  // namespace apstag::stability
