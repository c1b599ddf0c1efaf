#pragma once

// Linear triangle kernels templated on the scalar so the same code yields
// values (double) and coordinate derivatives (Dual).

#include <array>

namespace cerashape::detail {

// Voigt ordering: (xx, yy, xy); strains carry engineering shear 2*eps_xy.
template <class T>
using Voigt = std::array<T, 3>;

template <class T>
struct P1Geometry {
  T area;
  std::array<T, 3> dndx;
  std::array<T, 3> dndy;
};

// coords = (x0, y0, x1, y1, x2, y2), counterclockwise
template <class T>
P1Geometry<T> p1_geometry(const std::array<T, 6>& c) {
  const T& x0 = c[0];
  const T& y0 = c[1];
  const T& x1 = c[2];
  const T& y1 = c[3];
  const T& x2 = c[4];
  const T& y2 = c[5];
  const T two_a = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  P1Geometry<T> g;
  g.area = two_a * T(0.5);
  g.dndx = {(y1 - y2) / two_a, (y2 - y0) / two_a, (y0 - y1) / two_a};
  g.dndy = {(x2 - x1) / two_a, (x0 - x2) / two_a, (x1 - x0) / two_a};
  return g;
}

// u_e = (u0, v0, u1, v1, u2, v2)
template <class T, class U>
Voigt<T> p1_strain(const P1Geometry<T>& g, const std::array<U, 6>& u) {
  Voigt<T> eps{T(0.0), T(0.0), T(0.0)};
  for (int a = 0; a < 3; ++a) {
    const T ua(u[2 * a]);
    const T va(u[2 * a + 1]);
    eps[0] += g.dndx[a] * ua;
    eps[1] += g.dndy[a] * va;
    eps[2] += g.dndy[a] * ua + g.dndx[a] * va;
  }
  return eps;
}

template <class T>
Voigt<T> hooke(const Voigt<T>& eps, double lambda, double mu) {
  const T trace = eps[0] + eps[1];
  return {T(lambda) * trace + T(2.0 * mu) * eps[0], T(lambda) * trace + T(2.0 * mu) * eps[1],
          T(mu) * eps[2]};
}

}  // namespace cerashape::detail
