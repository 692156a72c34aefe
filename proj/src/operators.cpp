#include "apstag/operators.hpp"

#include <cmath>

namespace apstag::ops {

namespace {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

double minmod3(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min(a, std::min(b, c));
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max(a, std::max(b, c));
  return 0.0;
}

Field slope(const Field& f, double theta) {
  const int n = static_cast<int>(f.size());
  Field s(f.size());
  for (int j = 0; j < n; ++j) {
    const double fm = f[wrap(j - 1, n)], f0 = f[j], fp = f[wrap(j + 1, n)];
    s[j] = minmod3(theta * (f0 - fm), 0.5 * (fp - fm), theta * (fp - f0));
  }
  return s;
}

Field staggered_average_1d(const Field& f, const Field& slopes, int offset) {
  const int n = static_cast<int>(f.size());
  Field out(f.size());
  for (int k = 0; k < n; ++k) {
    const int a = wrap(k + offset, n), b = wrap(k + offset + 1, n);
    out[k] = 0.5 * (f[a] + f[b]) + 0.125 * (slopes[a] - slopes[b]);
  }
  return out;
}

Field d2x(const Field& f) {
  const int n = static_cast<int>(f.size());
  Field out(f.size());
  for (int j = 0; j < n; ++j) out[j] = f[wrap(j + 1, n)] - 2.0 * f[j] + f[wrap(j - 1, n)];
  return out;
}

Field centered_diff(const Field& f) {
  const int n = static_cast<int>(f.size());
  Field out(f.size());
  for (int j = 0; j < n; ++j) out[j] = 0.5 * (f[wrap(j + 1, n)] - f[wrap(j - 1, n)]);
  return out;
}

Field stagger_diff(const Field& f, int offset) {
  const int n = static_cast<int>(f.size());
  Field out(f.size());
  for (int k = 0; k < n; ++k) out[k] = f[wrap(k + offset + 1, n)] - f[wrap(k + offset, n)];
  return out;
}

Field unstagger_diff(const Field& p, int offset) {
  const int n = static_cast<int>(p.size());
  Field out(p.size());
  for (int i = 0; i < n; ++i) out[i] = p[wrap(i - offset, n)] - p[wrap(i - offset - 1, n)];
  return out;
}

Field slope_x(const Field& f, const FieldGrid& g, double theta) {
  Field s(f.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double fm = f[g.at(i - 1, j)], f0 = f[g.index(i, j)], fp = f[g.at(i + 1, j)];
      s[g.index(i, j)] = minmod3(theta * (f0 - fm), 0.5 * (fp - fm), theta * (fp - f0));
    }
  }
  return s;
}

Field slope_y(const Field& f, const FieldGrid& g, double theta) {
  Field s(f.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double fm = f[g.at(i, j - 1)], f0 = f[g.index(i, j)], fp = f[g.at(i, j + 1)];
      s[g.index(i, j)] = minmod3(theta * (f0 - fm), 0.5 * (fp - fm), theta * (fp - f0));
    }
  }
  return s;
}

Field staggered_average_2d(const Field& f, const Field& sx, const Field& sy, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(f.size());
  for (int l = 0; l < g.ny; ++l) {
    for (int k = 0; k < g.nx; ++k) {
      const std::size_t a = g.at(k + o, l + o), b = g.at(k + o + 1, l + o);
      const std::size_t c = g.at(k + o, l + o + 1), d = g.at(k + o + 1, l + o + 1);
      out[g.index(k, l)] = 0.25 * (f[a] + f[b] + f[c] + f[d]) +
                           0.0625 * (sx[a] - sx[b] + sx[c] - sx[d]) +
                           0.0625 * (sy[a] - sy[c] + sy[b] - sy[d]);
    }
  }
  return out;
}

Field staggered_div_2d(const Field& m1, const Field& m2, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(m1.size());
  const double hx = 0.5 / g.dx, hy = 0.5 / g.dy;
  for (int l = 0; l < g.ny; ++l) {
    for (int k = 0; k < g.nx; ++k) {
      const std::size_t a = g.at(k + o, l + o), b = g.at(k + o + 1, l + o);
      const std::size_t c = g.at(k + o, l + o + 1), d = g.at(k + o + 1, l + o + 1);
      out[g.index(k, l)] = hx * ((m1[b] - m1[a]) + (m1[d] - m1[c])) +
                           hy * ((m2[c] - m2[a]) + (m2[d] - m2[b]));
    }
  }
  return out;
}

Field staggered_grad_x(const Field& p, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(p.size());
  const double hx = 0.5 / g.dx;
  for (int l = 0; l < g.ny; ++l) {
    for (int k = 0; k < g.nx; ++k) {
      out[g.index(k, l)] = hx * ((p[g.at(k + o + 1, l + o)] - p[g.at(k + o, l + o)]) +
                                 (p[g.at(k + o + 1, l + o + 1)] - p[g.at(k + o, l + o + 1)]));
    }
  }
  return out;
}

Field staggered_grad_y(const Field& p, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(p.size());
  const double hy = 0.5 / g.dy;
  for (int l = 0; l < g.ny; ++l) {
    for (int k = 0; k < g.nx; ++k) {
      out[g.index(k, l)] = hy * ((p[g.at(k + o, l + o + 1)] - p[g.at(k + o, l + o)]) +
                                 (p[g.at(k + o + 1, l + o + 1)] - p[g.at(k + o + 1, l + o)]));
    }
  }
  return out;
}

Field unstaggered_grad_x(const Field& p, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(p.size());
  const double hx = 0.5 / g.dx;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int ir = i - o, il = i - o - 1, jt = j - o, jb = j - o - 1;
      out[g.index(i, j)] = hx * ((p[g.at(ir, jb)] - p[g.at(il, jb)]) +
                                 (p[g.at(ir, jt)] - p[g.at(il, jt)]));
    }
  }
  return out;
}

Field unstaggered_grad_y(const Field& p, const FieldGrid& g) {
  const int o = g.stagger_offset();
  Field out(p.size());
  const double hy = 0.5 / g.dy;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int ir = i - o, il = i - o - 1, jt = j - o, jb = j - o - 1;
      out[g.index(i, j)] = hy * ((p[g.at(il, jt)] - p[g.at(il, jb)]) +
                                 (p[g.at(ir, jt)] - p[g.at(ir, jb)]));
    }
  }
  return out;
}

Field centered_dx(const Field& f, const FieldGrid& g) {
  Field out(f.size());
  const double h = 0.5 / g.dx;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out[g.index(i, j)] = h * (f[g.at(i + 1, j)] - f[g.at(i - 1, j)]);
  return out;
}

Field centered_dy(const Field& f, const FieldGrid& g) {
  Field out(f.size());
  const double h = 0.5 / g.dy;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out[g.index(i, j)] = h * (f[g.at(i, j + 1)] - f[g.at(i, j - 1)]);
  return out;
}

Field laplacian_2d(const Field& p, const FieldGrid& g) {
  Field out(p.size());
  const double ix = 1.0 / (g.dx * g.dx), iy = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = p[g.index(i, j)];
      out[g.index(i, j)] = ix * (p[g.at(i + 1, j)] - 2.0 * c + p[g.at(i - 1, j)]) +
                           iy * (p[g.at(i, j + 1)] - 2.0 * c + p[g.at(i, j - 1)]);
    }
  }
  return out;
}

Field laplacian_varcoef(const Field& E, const Field& a, const FieldGrid& g) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] > 0.0)) {
      throw SolverError(ErrorCode::NonPositiveCoefficient,
                        "elliptic coefficient <= 0 at cell " + std::to_string(k));
    }
  }
  Field out(E.size());
  const double ix = 1.0 / (g.dx * g.dx), iy = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t c = g.index(i, j);
      const std::size_t e = g.at(i + 1, j), w = g.at(i - 1, j);
      const std::size_t nn = g.at(i, j + 1), s = g.at(i, j - 1);
      const double ae = 0.5 * (a[c] + a[e]), aw = 0.5 * (a[c] + a[w]);
      const double an = 0.5 * (a[c] + a[nn]), as = 0.5 * (a[c] + a[s]);
      out[c] = ix * (ae * (E[e] - E[c]) - aw * (E[c] - E[w])) +
               iy * (an * (E[nn] - E[c]) - as * (E[c] - E[s]));
    }
  }
  return out;
}

Field wide_laplacian_2d(const Field& p, const FieldGrid& g) {
  Field out(p.size());
  const double ix = 0.25 / (g.dx * g.dx), iy = 0.25 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double c = p[g.index(i, j)];
      out[g.index(i, j)] = ix * (p[g.at(i + 2, j)] - 2.0 * c + p[g.at(i - 2, j)]) +
                           iy * (p[g.at(i, j + 2)] - 2.0 * c + p[g.at(i, j - 2)]);
    }
  }
  return out;
}

Field wide_varcoef_2d(const Field& E, const Field& a, const FieldGrid& g) {
  Field out(E.size());
  const double ix = 0.25 / (g.dx * g.dx), iy = 0.25 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t c = g.index(i, j);
      const double ec = E[c];
      out[c] = ix * (a[g.at(i + 1, j)] * (E[g.at(i + 2, j)] - ec) -
                     a[g.at(i - 1, j)] * (ec - E[g.at(i - 2, j)])) +
               iy * (a[g.at(i, j + 1)] * (E[g.at(i, j + 2)] - ec) -
                     a[g.at(i, j - 1)] * (ec - E[g.at(i, j - 2)]));
    }
  }
  return out;
}

}  // namespace apstag::ops
