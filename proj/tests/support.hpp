#pragma once

// Shared helpers for the test binaries. Eigen is the independent oracle for
// spectra; random draws use their own engines so they never share state with
// the library's generators.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "avn/linalg.hpp"
#include "avn/state.hpp"

namespace avn::test {

using CMat2 = Eigen::Matrix2cd;
using CMat4 = Eigen::Matrix4cd;

inline CMat2 to_eigen(const ComplexMatrix2& m) {
  CMat2 e;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) e(i, j) = m(i, j);
  return e;
}

inline CMat4 to_eigen(const ComplexMatrix4& m) {
  CMat4 e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m(i, j);
  return e;
}

inline ComplexMatrix4 from_eigen(const CMat4& e) {
  ComplexMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = e(i, j);
  return m;
}

inline Eigen::Vector4d spectrum(const ComplexMatrix4& m) {
  Eigen::SelfAdjointEigenSolver<CMat4> es(to_eigen(m));
  return es.eigenvalues();
}

inline double min_eig(const ComplexMatrix4& m) { return spectrum(m)(0); }

// Partial transpose on Bob, written out index by index.
inline CMat4 partial_transpose_bob(const CMat4& r) {
  CMat4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) out(2 * a + b, 2 * a2 + b2) = r(2 * a + b2, 2 * a2 + b);
  return out;
}

inline double ppt_oracle(const ComplexMatrix4& m) {
  Eigen::SelfAdjointEigenSolver<CMat4> es(partial_transpose_bob(to_eigen(m)));
  return es.eigenvalues()(0);
}

// Bob's operator sum_i <i|_A m |i>_A.
inline CMat2 trace_alice(const CMat4& m) { return m.block<2, 2>(0, 0) + m.block<2, 2>(2, 2); }

inline double max_abs_diff(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

inline double max_abs_diff(const ComplexMatrix4& a, const ComplexMatrix4& b) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double gauss() { return normal_(rng_); }
  std::complex<double> cgauss() { return {gauss(), gauss()}; }

  BlochVector unit() {
    for (;;) {
      const double x = gauss(), y = gauss(), z = gauss();
      if (x * x + y * y + z * z > 1e-6) return BlochVector::normalized(x, y, z);
    }
  }

  Vector2 ket() {
    Vector2 v{cgauss(), cgauss()};
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
  }

  ComplexMatrix2 hermitian() {
    const double a = gauss(), d = gauss();
    const Complex b = cgauss();
    return ComplexMatrix2{Complex{a, 0.0}, b, std::conj(b), Complex{d, 0.0}};
  }

  ComplexMatrix2 general2() { return ComplexMatrix2{cgauss(), cgauss(), cgauss(), cgauss()}; }

  // Haar unitary via QR of a Ginibre matrix.
  ComplexMatrix2 unitary() {
    CMat2 g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = cgauss();
    Eigen::HouseholderQR<CMat2> qr(g);
    CMat2 q = qr.householderQ();
    ComplexMatrix2 u;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) u(i, j) = q(i, j);
    return u;
  }

  std::array<std::array<double, 3>, 3> rotation() {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = gauss();
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    std::array<std::array<double, 3>, 3> r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i][j] = q(i, j);
    return r;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline ComplexMatrix2 ket_projector(const Vector2& v) {
  return ComplexMatrix2{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]), v[1] * std::conj(v[0]),
                        v[1] * std::conj(v[1])};
}

// Block form in the z frame, written out without the library's assembler:
//   [[mu1 P1, M], [M^dagger, mu2 P2]] in the basis |0>_A (x) B, |1>_A (x) B.
inline ComplexMatrix4 canonical_block(double mu1, const Vector2& phi1, const Vector2& phi2, const ComplexMatrix2& m) {
  const ComplexMatrix2 p1 = ket_projector(phi1);
  const ComplexMatrix2 p2 = ket_projector(phi2);
  ComplexMatrix4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r(i, j) = mu1 * p1(i, j);
      r(2 + i, 2 + j) = (1.0 - mu1) * p2(i, j);
      r(i, 2 + j) = m(i, j);
      r(2 + i, j) = std::conj(m(j, i));
    }
  return r;
}

struct CanonicalDraw {
  double mu1;
  Vector2 phi1;
  Vector2 phi2;
  ComplexMatrix2 m;  // c |phi1><phi2|
  bool separable;
  ComplexMatrix4 matrix;
};

// Valid canonical-form state: M = c |phi1><phi2| with |c|^2 <= mu1 mu2.
// A fraction `separable_share` has c = 0 exactly; otherwise
// |c| / sqrt(mu1 mu2) is drawn from [1e-3, 1]. Pairs with fidelity above
// 1 - 1e-3 are redrawn.
inline CanonicalDraw draw_canonical(Draw& d, double separable_share = 0.3) {
  for (;;) {
    const Vector2 phi1 = d.ket();
    const Vector2 phi2 = d.ket();
    const double f = std::norm(std::conj(phi1[0]) * phi2[0] + std::conj(phi1[1]) * phi2[1]);
    if (f >= 1.0 - 1e-3) continue;
    const double mu1 = d.uniform(0.02, 0.98);
    const bool sep = d.uniform() < separable_share;
    Complex c{0.0, 0.0};
    if (!sep) c = std::polar(std::sqrt(mu1 * (1.0 - mu1)) * d.uniform(1e-3, 1.0), d.uniform(0.0, 2 * std::numbers::pi));
    ComplexMatrix2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = c * phi1[i] * std::conj(phi2[j]);
    return {mu1, phi1, phi2, m, sep, canonical_block(mu1, phi1, phi2, m)};
  }
}

}  // namespace avn::test
