#pragma once

#include <cstdint>

#include "avn/linalg.hpp"

namespace avn {

// Tolerance on Hermiticity, positivity and unit trace for every validated
// state. Loose enough to admit matrices rebuilt from double-precision
// eigendecompositions.
inline constexpr double kStateTolerance = 1e-10;

// Two-qubit density operator, Alice first. Only obtainable through
// make_state or the family constructors, so every instance is valid.
class TwoQubitState {
 public:
  const ComplexMatrix4& matrix() const { return matrix_; }

  ComplexMatrix2 reduced_alice() const { return partial_trace_B(matrix_); }
  ComplexMatrix2 reduced_bob() const { return partial_trace_A(matrix_); }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

  // Same state with the roles of Alice and Bob exchanged.
  TwoQubitState swapped() const { return TwoQubitState(swap_parties(matrix_)); }
  // (U_A (x) 1) rho (U_A^dagger (x) 1)
  TwoQubitState with_alice_unitary(const ComplexMatrix2& u) const;

 private:
  explicit TwoQubitState(const ComplexMatrix4& m) : matrix_(m) {}
  ComplexMatrix4 matrix_;

  friend TwoQubitState make_state(const ComplexMatrix4&, double);
};

// Validates Hermiticity, trace and positivity, in that order. Throws
// avn::Error (NotFinite, NotHermitian, TraceNotOne, NotPositive) with the
// measured residual.
TwoQubitState make_state(const ComplexMatrix4& matrix, double tol = kStateTolerance);

// Single-qubit density operator.
class QubitState {
 public:
  static QubitState make(const ComplexMatrix2& m, double tol = kStateTolerance);
  const ComplexMatrix2& matrix() const { return matrix_; }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  explicit QubitState(const ComplexMatrix2& m) : matrix_(m) {}
  ComplexMatrix2 matrix_;
};

// Unit ket with its first nonzero amplitude real non-negative.
class PureQubit {
 public:
  static PureQubit from_amplitudes(Complex a0, Complex a1);
  static PureQubit from_vector(const Vector2& v) { return from_amplitudes(v[0], v[1]); }
  // Pure state with the given Bloch vector: cos(t/2)|0> + e^{i p} sin(t/2)|1>.
  static PureQubit from_bloch(const BlochVector& n);

  const Vector2& amplitudes() const { return amplitudes_; }
  ComplexMatrix2 projector() const { return outer(amplitudes_, amplitudes_); }
  // The orthogonal state (-conj(a1), conj(a0)), phase-normalized.
  PureQubit perp() const;
  // |<this|other>|^2
  double fidelity(const PureQubit& other) const { return std::norm(braket(amplitudes_, other.amplitudes_)); }
  BlochVector bloch() const { return bloch_of(amplitudes_); }

 private:
  explicit PureQubit(const Vector2& v) : amplitudes_(v) {}
  Vector2 amplitudes_;
};

// V |Psi(t)><Psi(t)| + (1 - V) |Phi(t)><Phi(t)| with
// |Psi> = cos t |00> + sin t |11>, |Phi> = cos t |10> + sin t |01>.
// V in [0, 1], theta in [0, pi/2].
TwoQubitState family_test_state(double V, double theta);

// V |Psi(t)><Psi(t)| + (1 - V) (|00><00| + |11><11|) / 2. V in [0, 1].
TwoQubitState family_color_noise(double V, double theta);

TwoQubitState maximally_mixed();
TwoQubitState bell_phi_plus();
TwoQubitState product_state(const PureQubit& alice, const PureQubit& bob);
// p rho + (1 - p) other
TwoQubitState mix(const TwoQubitState& rho, const TwoQubitState& other, double p);

// Ginibre-distributed state of the given rank (1..4): G G^dagger / tr for a
// 4 x rank complex Gaussian G. Deterministic in seed on a given platform.
TwoQubitState random_state(std::uint64_t seed, int rank = 4);

// Smallest eigenvalue of the partial transpose over Bob.
double ppt_min_eigenvalue(const TwoQubitState& rho);
// Peres-Horodecki; exact for two qubits.
bool is_ppt_separable(const TwoQubitState& rho, double tol = kStateTolerance);

}  // namespace avn
