#pragma once

// Brute-force reference computations in the product basis (HH, HV, VH, VV).
// Nothing here calls the library's basis-change or lifting code, so agreement
// with the library is an independent check.

#include "noontomo/state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

namespace oracle {

using noontomo::Complex;
using noontomo::Matrix2c;
using noontomo::Matrix4c;
using noontomo::Vector2c;
using noontomo::Vector4c;

inline Vector2c ket(Complex h, Complex v) {
  Vector2c k;
  k << h, v;
  return k;
}

inline Vector4c pair(const Vector2c& a, const Vector2c& b) {
  Vector4c k;
  k << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return k;
}

// Columns are |HH>, |psi+>, |VV>, |psi->, each written out in the product basis.
inline Matrix4c symmetric_kets() {
  const double r = 1.0 / std::sqrt(2.0);
  Matrix4c b = Matrix4c::Zero();
  b(0, 0) = 1.0;
  b(1, 1) = r;
  b(2, 1) = r;
  b(3, 2) = 1.0;
  b(1, 3) = r;
  b(2, 3) = -r;
  return b;
}

inline Matrix4c to_product(const Matrix4c& rho_sym) {
  const Matrix4c b = symmetric_kets();
  return b * rho_sym * b.adjoint();
}

inline Matrix4c to_symmetric(const Matrix4c& rho_prod) {
  const Matrix4c b = symmetric_kets();
  return b.adjoint() * rho_prod * b;
}

// Tr[rho (|ab><ab| + |ba><ba|)] with a, b = (H +- e^{i phi} V)/sqrt2.
inline double coincidence(const Matrix4c& rho_sym, double phi) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex e = std::polar(1.0, phi);
  const Vector2c a = ket(r, r * e);
  const Vector2c b = ket(r, -r * e);
  const Vector4c ab = pair(a, b);
  const Vector4c ba = pair(b, a);
  const Matrix4c p = ab * ab.adjoint() + ba * ba.adjoint();
  return (p * to_product(rho_sym)).trace().real();
}

// u (x) u by explicit index arithmetic, then into the symmetry-ordered basis.
inline Matrix4c lifted(const Matrix2c& u) {
  Matrix4c uu;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) uu(2 * i + j, 2 * k + l) = u(i, k) * u(j, l);
  const Matrix4c b = symmetric_kets();
  return b.adjoint() * uu * b;
}

// Delay channel as an isometry onto (polarization) x (two arrival-time modes):
// HH and VV stay in the first time mode, H1V2 and V1H2 spread over both with
// amplitudes that overlap by O. Tracing out time gives the reduced state.
inline Matrix4c delayed(const Matrix4c& rho_sym, double overlap) {
  const double f0 = std::sqrt((1.0 + overlap) / 2.0);
  const double f1 = std::sqrt((1.0 - overlap) / 2.0);
  Eigen::Matrix<Complex, 8, 4> v = Eigen::Matrix<Complex, 8, 4>::Zero();
  // row index = 2 * product_index + time
  v(0, 0) = 1.0;
  v(2, 1) = f0;
  v(3, 1) = f1;
  v(4, 2) = f0;
  v(5, 2) = -f1;
  v(6, 3) = 1.0;
  const Eigen::Matrix<Complex, 8, 8> big = v * to_product(rho_sym) * v.adjoint();
  Matrix4c reduced = Matrix4c::Zero();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int t = 0; t < 2; ++t) reduced(r, c) += big(2 * r + t, 2 * c + t);
  return to_symmetric(reduced);
}

// Random density matrix of the given rank (Ginibre construction).
inline Matrix4c random_density(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix4c rho = a * a.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

inline Matrix4c random_block_density(std::mt19937_64& rng, int rank = 4) {
  Matrix4c rho = random_density(rng, rank);
  for (int i = 0; i < 3; ++i) rho(i, 3) = rho(3, i) = 0.0;
  return rho;
}

inline Matrix2c random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix2c a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix2c> qr(a);
  Matrix2c q = qr.householderQ();
  return q;
}

}  // namespace oracle
