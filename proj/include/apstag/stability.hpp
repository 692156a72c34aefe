#pragma once

#include <complex>
#include <vector>

// Von Neumann tools for linear advection u_t + a u_x = 0 discretised on
// staggered cells with c = a dt / dx.
namespace apstag::stability {

struct NaiveAmp {
  std::complex<double> rho;
  double F = 0.0;  // denominator minus numerator of |rho|^2; negative means growth
};

// Centred predictor, staggered corrector.
NaiveAmp amp_naive(double c, double xi);

// |rho|^2 of the staggered predictor variant.
double amp_staggered(double c, double xi);

// n uniform points on [-pi, pi], both ends included.
std::vector<double> xi_samples(int n = 4096);

double max_abs_naive(double c, const std::vector<double>& xi);
double max_abs_staggered(double c, const std::vector<double>& xi);

// True if F < -tol somewhere on the samples.
bool naive_unstable(double c, const std::vector<double>& xi, double tol = 1e-12);

// Bisection for the smallest unstable c in [lo, hi]; lo must be stable and hi unstable.
double naive_threshold(double lo, double hi, double tol = 1e-4, int samples = 4096);

struct MapRow {
  double c = 0.0;
  double naive = 0.0;      // max |rho|
  double staggered = 0.0;  // max |rho|
};

std::vector<MapRow> stability_map(const std::vector<double>& c_range, int samples = 4096);

}  // namespace apstag::stability
