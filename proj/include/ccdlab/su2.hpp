#pragma once

#include <cmath>
#include <complex>

namespace ccdlab {

using cplx = std::complex<double>;

// Coefficients of a traceless Hermitian 2x2 operator H = x*sx + y*sy + z*sz
// (rad/s). Every Hamiltonian in this library is traceless, so this triple is
// the universal representation.
struct PauliCoeffs {
  double x = 0.0, y = 0.0, z = 0.0;

  PauliCoeffs operator+(const PauliCoeffs& o) const { return {x + o.x, y + o.y, z + o.z}; }
  PauliCoeffs operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Two-component spinor.
struct C2 {
  cplx a0{0.0, 0.0}, a1{0.0, 0.0};

  double norm2() const { return std::norm(a0) + std::norm(a1); }
  double norm() const { return std::sqrt(norm2()); }
};

inline cplx inner(const C2& u, const C2& v) {  // <u|v>
  return std::conj(u.a0) * v.a0 + std::conj(u.a1) * v.a1;
}

// 2x2 complex matrix, row major.
struct M2 {
  cplx m00, m01, m10, m11;

  static M2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  C2 operator*(const C2& v) const {
    return {m00 * v.a0 + m01 * v.a1, m10 * v.a0 + m11 * v.a1};
  }
  M2 operator*(const M2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  M2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }
  cplx trace() const { return m00 + m11; }
  cplx det() const { return m00 * m11 - m01 * m10; }
};

// Matrix form of a coefficient triple.
inline M2 to_matrix(const PauliCoeffs& c) {
  return {cplx(c.z, 0.0), cplx(c.x, -c.y), cplx(c.x, c.y), cplx(-c.z, 0.0)};
}

// exp(-i t (c.x sx + c.y sy + c.z sz)) = cos(|c|t) I - i sin(|c|t) (c_hat . sigma).
// Uses sinc so c -> 0 is exact.
inline M2 su2_exp(const PauliCoeffs& c, double t) {
  const double h = c.norm();
  const double th = h * t;
  const double cth = std::cos(th);
  const double s = (th == 0.0) ? t : std::sin(th) / h;  // t * sinc(th)
  const double nx = c.x * s, ny = c.y * s, nz = c.z * s;
  return {cplx(cth, -nz), cplx(-ny, -nx), cplx(ny, -nx), cplx(cth, nz)};
}

// Deviation from unitarity, max-abs entry of U U^dag - I.
inline double unitarity_defect(const M2& u) {
  const M2 p = u * u.adjoint();
  double d = std::abs(p.m00 - 1.0);
  d = std::max(d, std::abs(p.m11 - 1.0));
  d = std::max(d, std::abs(p.m01));
  d = std::max(d, std::abs(p.m10));
  return d;
}

}  // namespace ccdlab
