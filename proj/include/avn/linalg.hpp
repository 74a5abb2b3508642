#pragma once

// Fixed-size dense complex linear algebra for one and two qubits.
//
// Basis ordering for 4x4 operators is |00>,|01>,|10>,|11> with Alice as the
// first (most significant) factor.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

#include "avn/error.hpp"

namespace avn {

using Complex = std::complex<double>;

// Builds a complex number, rejecting NaN/Inf components.
Complex make_complex(double re, double im);

template <std::size_t N>
class SquareMatrix {
 public:
  static constexpr std::size_t kDim = N;

  SquareMatrix() { data_.fill(Complex{0.0, 0.0}); }

  // Row-major initializer; missing trailing entries are zero.
  SquareMatrix(std::initializer_list<Complex> row_major) {
    data_.fill(Complex{0.0, 0.0});
    std::size_t k = 0;
    for (const auto& z : row_major) {
      if (k == N * N) break;
      data_[k++] = z;
    }
  }

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static SquareMatrix diagonal(const std::array<double, N>& d) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  SquareMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator*(SquareMatrix a, Complex s) { return a *= s; }
  friend SquareMatrix operator*(Complex s, SquareMatrix a) { return a *= s; }
  friend SquareMatrix operator*(SquareMatrix a, double s) { return a *= Complex{s, 0.0}; }
  friend SquareMatrix operator*(double s, SquareMatrix a) { return a *= Complex{s, 0.0}; }
  friend SquareMatrix operator-(SquareMatrix a) { return a *= Complex{-1.0, 0.0}; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  SquareMatrix adjoint() const {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  SquareMatrix transpose() const {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out(i, j) = (*this)(j, i);
    return out;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  // Largest entrywise deviation from Hermiticity.
  double hermiticity_residual() const {
    double r = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j)
        r = std::max(r, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return r;
  }

  bool is_hermitian(double tol) const { return hermiticity_residual() <= tol; }

  bool all_finite() const {
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  const std::array<Complex, N * N>& data() const { return data_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::array<Complex, N * N> data_;
};

using ComplexMatrix2 = SquareMatrix<2>;
using ComplexMatrix4 = SquareMatrix<4>;
using Vector2 = std::array<Complex, 2>;

template <std::size_t N>
double distance(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  return (a - b).frobenius_norm();
}

// Frobenius inner product tr(a^dagger b).
template <std::size_t N>
Complex inner(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  Complex s{};
  for (std::size_t k = 0; k < N * N; ++k) s += std::conj(a.data()[k]) * b.data()[k];
  return s;
}

// Unit direction on the Bloch sphere.
class BlochVector {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  // Rejects vectors whose norm differs from one by more than `tol`, then
  // renormalizes so the stored triple is unit to rounding.
  static BlochVector checked(double x, double y, double z, double tol = kUnitTolerance);
  // Normalizes any nonzero finite triple.
  static BlochVector normalized(double x, double y, double z);
  static BlochVector spherical(double polar, double azimuth);

  static BlochVector x_axis() { return BlochVector(1.0, 0.0, 0.0); }
  static BlochVector y_axis() { return BlochVector(0.0, 1.0, 0.0); }
  static BlochVector z_axis() { return BlochVector(0.0, 0.0, 1.0); }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::array<double, 3> xyz() const { return {x_, y_, z_}; }

  double polar() const;
  double azimuth() const;

  double dot(const BlochVector& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }
  BlochVector operator-() const { return BlochVector(-x_, -y_, -z_); }

  // n . sigma
  ComplexMatrix2 dot_sigma() const;

  friend bool operator==(const BlochVector&, const BlochVector&) = default;

 private:
  BlochVector(double x, double y, double z) : x_(x), y_(y), z_(z) {}
  double x_;
  double y_;
  double z_;
};

using Rotation3 = std::array<std::array<double, 3>, 3>;

struct EigenSystem2 {
  std::array<double, 2> eigenvalues;  // descending
  std::array<Vector2, 2> eigenvectors;
};

struct EigenSystem4 {
  std::array<double, 4> eigenvalues;  // descending
  ComplexMatrix4 eigenvectors;        // column k pairs with eigenvalues[k]
};

struct EigenSystem3 {
  std::array<double, 3> eigenvalues;  // descending
  Rotation3 eigenvectors;             // eigenvectors[i][k]: component i of vector k
};

namespace pauli {
ComplexMatrix2 identity();
ComplexMatrix2 x();
ComplexMatrix2 y();
ComplexMatrix2 z();
// index 0,1,2 -> x,y,z
ComplexMatrix2 axis(int i);
}  // namespace pauli

ComplexMatrix4 tensor(const ComplexMatrix2& a, const ComplexMatrix2& b);

// Sum over Alice's basis: returns Bob's operator.
ComplexMatrix2 partial_trace_A(const ComplexMatrix4& m);
// Sum over Bob's basis: returns Alice's operator.
ComplexMatrix2 partial_trace_B(const ComplexMatrix4& m);
ComplexMatrix4 partial_transpose_B(const ComplexMatrix4& m);
// Exchanges the two tensor factors.
ComplexMatrix4 swap_parties(const ComplexMatrix4& m);
// <i|_A m |j>_A, the (i,j) Alice block of m as an operator on Bob.
ComplexMatrix2 alice_block(const ComplexMatrix4& m, int i, int j);

ComplexMatrix2 outer(const Vector2& ket, const Vector2& bra);
Complex braket(const Vector2& bra, const Vector2& ket);
double norm(const Vector2& v);
// Scales to unit norm and makes the first nonzero amplitude real non-negative.
Vector2 canonical_phase(Vector2 v);

EigenSystem2 eigensystem_hermitian2(const ComplexMatrix2& h, double hermitian_tol = 1e-10);
double max_eigenvalue_hermitian2(const ComplexMatrix2& h);

// Cyclic complex Jacobi sweeps. Deterministic: pivots are visited in row-major
// order of the strict upper triangle, until the off-diagonal Frobenius norm
// falls below 1e-12 times the matrix norm.
EigenSystem4 eigensystem_hermitian4(const ComplexMatrix4& h, double hermitian_tol = 1e-10);
double min_eigenvalue_hermitian4(const ComplexMatrix4& h);

// Real symmetric 3x3, same Jacobi scheme; only the upper triangle is read.
EigenSystem3 eigensystem_symmetric3(const Rotation3& s);

ComplexMatrix2 direction_projector(const BlochVector& n, int outcome);

// Unitary U with U (n.sigma) U^dagger = sigma_z; first column entry real
// non-negative.
ComplexMatrix2 rotation_to_z(const BlochVector& n);

// Adjoint action R_ij = tr(sigma_i U sigma_j U^dagger) / 2, so that
// U (m.sigma) U^dagger = (R m).sigma.
Rotation3 so3_of(const ComplexMatrix2& u);
BlochVector rotate(const Rotation3& r, const BlochVector& n);
BlochVector rotate_transposed(const Rotation3& r, const BlochVector& n);

// Bloch vector of a pure qubit state.
BlochVector bloch_of(const Vector2& ket);

}  // namespace avn
