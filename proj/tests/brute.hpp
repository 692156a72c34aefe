#pragma once

#include <algorithm>

#include "apstag/core.hpp"

// Direct periodic-index evaluations used as test oracles; deliberately
// written without the library's operators.
namespace brute {

using apstag::Field;

inline double mm3(double a, double b, double c) {
  if (a > 0 && b > 0 && c > 0) return std::min({a, b, c});
  if (a < 0 && b < 0 && c < 0) return std::max({a, b, c});
  return 0.0;
}

// Brute-force reference for integer parity: periodic lookups, limited
// slopes, the reconstruction integrated over the four quarter cells.
struct Box {
  int n;
  double h, theta;
  double at(const Field& f, int i, int j) const { return f[((j + n) % n) * n + (i + n) % n]; }
  double sx(const Field& f, int i, int j) const {
    const double l = at(f, i, j) - at(f, i - 1, j), r = at(f, i + 1, j) - at(f, i, j);
    return mm3(theta * l, 0.5 * (l + r), theta * r);
  }
  double sy(const Field& f, int i, int j) const {
    const double l = at(f, i, j) - at(f, i, j - 1), r = at(f, i, j + 1) - at(f, i, j);
    return mm3(theta * l, 0.5 * (l + r), theta * r);
  }
  // staggered cell (k, l) spans centres k..k+1, l..l+1
  double jt(const Field& f, int k, int l) const {
    const double qa = at(f, k, l) + sx(f, k, l) / 4 + sy(f, k, l) / 4;
    const double qb = at(f, k + 1, l) - sx(f, k + 1, l) / 4 + sy(f, k + 1, l) / 4;
    const double qc = at(f, k, l + 1) + sx(f, k, l + 1) / 4 - sy(f, k, l + 1) / 4;
    const double qd = at(f, k + 1, l + 1) - sx(f, k + 1, l + 1) / 4 - sy(f, k + 1, l + 1) / 4;
    return 0.25 * (qa + qb + qc + qd);
  }
  double div(const Field& f1, const Field& f2, int k, int l) const {
    return (at(f1, k + 1, l) + at(f1, k + 1, l + 1) - at(f1, k, l) - at(f1, k, l + 1)) / (2 * h) +
           (at(f2, k, l + 1) + at(f2, k + 1, l + 1) - at(f2, k, l) - at(f2, k + 1, l)) / (2 * h);
  }
};

inline double nt(const Field& f, int k, double theta) {
  const int n = static_cast<int>(f.size());
  auto at = [&](int i) { return f[(i % n + n) % n]; };
  auto s = [&](int i) {
    const double l = at(i) - at(i - 1), r = at(i + 1) - at(i);
    return mm3(theta * l, 0.5 * (l + r), theta * r);
  };
  // integer parity: staggered k sits between centres k and k+1
  return 0.5 * (at(k) + at(k + 1)) + (s(k) - s(k + 1)) / 8.0;
}

}  // namespace brute
