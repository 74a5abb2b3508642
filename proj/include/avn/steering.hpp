#pragma once

// Conditional states, the canonical block decomposition, and the
// all-versus-nothing steerability test.
//
// If Alice measures along n and Bob's two normalized conditional states are
// distinct pure states, rotating n to z puts the state in the form
//
//   mu1 |0><0| (x) |phi1><phi1| + mu2 |1><1| (x) |phi2><phi2|
//     + |0><1| (x) M + |1><0| (x) M^dagger
//
// and M != 0, entanglement, and the absence of a local-hidden-state model
// for Bob are equivalent.

#include <array>
#include <optional>

#include "avn/kernels.hpp"
#include "avn/linalg.hpp"
#include "avn/state.hpp"

namespace avn {

struct SteeringTolerances {
  double purity = 1e-7;        // on 1 - tr(rho_a^2)
  double m_norm = 1e-9;        // Frobenius norm of M
  double distinct = 1e-9;      // identical when |<phi1|phi2>|^2 >= 1 - distinct
  double zero_weight = 1e-12;  // outcome probability treated as impossible
};

// Residual above which M + M^dagger counts as outside span{|phi1><phi1|, |phi2><phi2|}.
inline constexpr double kSpanResidualTolerance = 1e-9;

struct ConditionalPair {
  BlochVector setting;
  std::array<ComplexMatrix2, 2> unnormalized;
  std::array<double, 2> weights;

  // Throws ZeroProbabilityOutcome when the weight is below `zero_weight`.
  ComplexMatrix2 normalized(int outcome, double zero_weight = 1e-12) const;
  // 1 - tr(rho_a^2) of the normalized conditional; 1 when the outcome is impossible.
  double purity_deficit(int outcome, double zero_weight = 1e-12) const;
};

// rho~_a = tr_A[(P^n_a (x) 1) rho]
ConditionalPair conditional_pair(const TwoQubitState& rho, const BlochVector& n);

// tr(q^2) for a unit-trace q.
double purity(const ComplexMatrix2& q);

struct CanonicalDecomposition {
  BlochVector direction;          // original-frame measurement direction
  ComplexMatrix2 alice_rotation;  // U with U (n.sigma) U^dagger = sigma_z
  double mu1;
  double mu2;
  PureQubit phi1;
  PureQubit phi2;
  ComplexMatrix2 m_block;
  double reassembly_error;  // Frobenius distance of reassemble() from the rotated state

  // Block form in the rotated frame.
  ComplexMatrix4 reassemble() const;
  double m_norm() const { return m_block.frobenius_norm(); }
  // Alice direction in the original frame that the rotated-frame direction maps from.
  BlochVector to_original_frame(const BlochVector& rotated) const;
};

// Throws ZeroProbabilityOutcome, ConditionalsNotPure (measured = worst
// purity deficit) or ConditionalsIdentical (measured = fidelity).
CanonicalDecomposition canonical_decomposition(const TwoQubitState& rho, const BlochVector& n,
                                               const SteeringTolerances& tol = {});

// mu1 |0><0| (x) P1 + mu2 |1><1| (x) P2 + |0><1| (x) M + h.c.; no validation.
ComplexMatrix4 assemble_canonical(double mu1, double mu2, const PureQubit& phi1, const PureQubit& phi2,
                                  const ComplexMatrix2& m);

enum class Axis { X, Y };
const char* to_string(Axis axis);
BlochVector axis_vector(Axis axis);

// Frobenius distance from Hermitian h to its least-squares fit
// a |phi1><phi1| + b |phi2><phi2| with real a, b.
double span_residual(const ComplexMatrix2& h, const PureQubit& phi1, const PureQubit& phi2);

// X when M + M^dagger is outside the real span of the two conditionals,
// otherwise Y. Throws MZero when ||M|| <= tol.m_norm.
Axis choose_second_setting(const CanonicalDecomposition& d, const SteeringTolerances& tol = {});

// For unit n, det(rho~^n_0) + det(rho~^n_1) = -n^T Q n / 8 with
// Q = T T^T - a a^T - (1 - |b|^2) I, where a, b are the local Bloch vectors
// and T the correlation matrix. Q is negative semidefinite, so both
// conditionals along n are rank one exactly when Q n = 0.
Rotation3 pure_direction_form(const TwoQubitState& rho);

enum class VerdictReason { Steerable, NoPureDirection, ConditionalsIdentical, SeparableMZero };
const char* to_string(VerdictReason reason);

struct SearchOptions {
  std::size_t grid_points = 2048;  // hemisphere Fibonacci lattice
  std::size_t refine_starts = 5;
  double null_tol = 1e-10;  // eigenvalues of Q above -null_tol count as zero
  SteeringTolerances tol;
  kernels::Exec exec = kernels::Exec::Parallel;
};

struct SteeringVerdict {
  bool steerable = false;
  VerdictReason reason = VerdictReason::NoPureDirection;
  std::optional<BlochVector> direction;
  std::array<double, 2> conditional_purities{};
  double best_min_purity = 0.0;
  std::optional<CanonicalDecomposition> decomposition;
  std::optional<Axis> second_setting;
  std::optional<BlochVector> second_direction;  // original frame
};

// Searches Alice's Bloch sphere for a direction that leaves Bob with two
// distinct pure conditionals. Never throws for a valid state.
SteeringVerdict find_avn_direction(const TwoQubitState& rho, const SearchOptions& opt = {});

struct EquivalenceReport {
  bool m_nonzero;
  bool entangled;
  bool lhs_infeasible;
  double m_norm;
  double ppt_min_eigenvalue;
  double lhs_residual;
  BlochVector second_direction;

  bool agree() const { return m_nonzero == entangled && entangled == lhs_infeasible; }
};

// Evaluates M != 0, PPT entanglement and two-setting LHS infeasibility at
// direction n. Propagates canonical_decomposition errors.
EquivalenceReport verify_equivalence_chain(const TwoQubitState& rho, const BlochVector& n,
                                           const SteeringTolerances& tol = {}, double feas_tol = 1e-8);

}  // namespace avn
