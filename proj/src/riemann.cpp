#include "apstag/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "apstag/core.hpp"

namespace apstag::riemann {

namespace {

// f_K(p) and its derivative for one side
void side(double p, const Primitive& s, double g, double& f, double& df) {
  const double c = std::sqrt(g * s.p / s.rho);
  if (p > s.p) {
    const double A = 2 / ((g + 1) * s.rho), B = (g - 1) / (g + 1) * s.p;
    const double q = std::sqrt(A / (p + B));
    f = (p - s.p) * q;
    df = q * (1 - 0.5 * (p - s.p) / (p + B));
  } else {
    const double r = p / s.p;
    f = 2 * c / (g - 1) * (std::pow(r, (g - 1) / (2 * g)) - 1);
    df = std::pow(r, -(g + 1) / (2 * g)) / (s.rho * c);
  }
}

double star_density(double ps, const Primitive& s, double g) {
  const double r = ps / s.p;
  if (ps > s.p) {
    const double k = (g - 1) / (g + 1);
    return s.rho * (r + k) / (k * r + 1);
  }
  return s.rho * std::pow(r, 1 / g);
}

double sound(const Primitive& s, double g) { return std::sqrt(g * s.p / s.rho); }

}  // namespace

StarState solve_star(const Primitive& L, const Primitive& R, double g) {
  const double cl = sound(L, g), cr = sound(R, g);
  if (2 * (cl + cr) / (g - 1) <= R.u - L.u) {
    throw SolverError(ErrorCode::NonPositiveDensity, "Riemann data generate vacuum");
  }
  // two-rarefaction guess
  const double z = (g - 1) / (2 * g);
  double p = std::pow((cl + cr - 0.5 * (g - 1) * (R.u - L.u)) /
                          (cl / std::pow(L.p, z) + cr / std::pow(R.p, z)),
                      1 / z);
  p = std::max(p, 1e-12);
  for (int it = 0; it < 100; ++it) {
    double fl, dl, fr, dr;
    side(p, L, g, fl, dl);
    side(p, R, g, fr, dr);
    const double next = std::max(p - (fl + fr + R.u - L.u) / (dl + dr), 1e-14);
    const double change = 2 * std::abs(next - p) / (next + p);
    p = next;
    if (change < 1e-15) break;
  }
  double fl, dl, fr, dr;
  side(p, L, g, fl, dl);
  side(p, R, g, fr, dr);
  StarState s;
  s.p = p;
  s.u = 0.5 * (L.u + R.u + fr - fl);
  s.rho_left = star_density(p, L, g);
  s.rho_right = star_density(p, R, g);
  return s;
}

Waves wave_positions(const Primitive& L, const Primitive& R, double g, double x0, double t) {
  const StarState s = solve_star(L, R, g);
  Waves w;
  w.contact = x0 + s.u * t;
  const double cl = sound(L, g), cr = sound(R, g);
  if (s.p > L.p) {
    w.left_shock = true;
    const double S = L.u - cl * std::sqrt((g + 1) / (2 * g) * s.p / L.p + (g - 1) / (2 * g));
    w.left_head = w.left_tail = x0 + S * t;
  } else {
    const double cs = cl * std::pow(s.p / L.p, (g - 1) / (2 * g));
    w.left_head = x0 + (L.u - cl) * t;
    w.left_tail = x0 + (s.u - cs) * t;
  }
  if (s.p > R.p) {
    w.right_shock = true;
    const double S = R.u + cr * std::sqrt((g + 1) / (2 * g) * s.p / R.p + (g - 1) / (2 * g));
    w.right_head = w.right_tail = x0 + S * t;
  } else {
    const double cs = cr * std::pow(s.p / R.p, (g - 1) / (2 * g));
    w.right_head = x0 + (R.u + cr) * t;
    w.right_tail = x0 + (s.u + cs) * t;
  }
  return w;
}

Primitive sample(const Primitive& L, const Primitive& R, double g, double x0, double t, double x) {
  const StarState s = solve_star(L, R, g);
  const Waves w = wave_positions(L, R, g, x0, t);
  if (x < w.contact) {
    if (x < w.left_head) return L;
    if (x >= w.left_tail) return {s.rho_left, s.u, s.p};
    // inside the left fan
    const double cl = sound(L, g), xi = (x - x0) / t;
    const double k = 2 / (g + 1);
    const double c = k * (cl + 0.5 * (g - 1) * (L.u - xi));
    const double u = k * (cl + 0.5 * (g - 1) * L.u + xi);
    const double rho = L.rho * std::pow(c / cl, 2 / (g - 1));
    return {rho, u, L.p * std::pow(c / cl, 2 * g / (g - 1))};
  }
  if (x > w.right_head) return R;
  if (x <= w.right_tail) return {s.rho_right, s.u, s.p};
  const double cr = sound(R, g), xi = (x - x0) / t;
  const double k = 2 / (g + 1);
  const double c = k * (cr - 0.5 * (g - 1) * (R.u - xi));
  const double u = k * (-cr + 0.5 * (g - 1) * R.u + xi);
  const double rho = R.rho * std::pow(c / cr, 2 / (g - 1));
  return {rho, u, R.p * std::pow(c / cr, 2 * g / (g - 1))};
}

}  // namespace apstag::riemann
