#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "avn/kernels.hpp"
#include "avn/lhs.hpp"
#include "avn/state.hpp"
#include "avn/steering.hpp"

namespace avn {

// --- Inequality built from the AVN argument --------------------------------
//
// With W1 = P^n_0 (x) rho0perp, W2 = P^n_1 (x) rho1perp and
// W3 = |+><+| (x) |nB><nB|, where |+> = (|+n> + |-n>)/sqrt2:
//
//   <W3> - C_LHS <= 0   subject to <W1> = <W2> = 0,
//   C_LHS = max_nB <nB| (rho~_0 + rho~_1)/2 |nB>.

struct AvnInequalityOptions {
  SteeringTolerances tol;
  double constraint_tol = 1e-9;
  // Evaluate W3 at this Bob direction instead of maximizing over it.
  std::optional<BlochVector> bob_direction;
  int phase_samples = 360;
};

struct AvnInequalityResult {
  BlochVector direction;
  double w1;
  double w2;
  double w3;  // at |+> = (|+n> + |-n>)/sqrt2, eigenvector phases canonical
  double c_lhs;
  bool constraint_satisfied;
  std::optional<double> violation;  // w3 - c_lhs; present iff constraint_satisfied
  BlochVector optimal_nb;

  // Same quantities maximized over the relative phase chi in
  // (|+n> + e^{i chi} |-n>)/sqrt2, which removes the eigenvector phase convention.
  double w3_phase_max;
  double best_phase;
  std::optional<double> violation_phase_max;
};

// Throws ConditionalsNotPure / ConditionalsIdentical / ZeroProbabilityOutcome
// when the conditionals along n are not two distinct pure states.
AvnInequalityResult avn_inequality(const TwoQubitState& rho, const BlochVector& n,
                                   const AvnInequalityOptions& opt = {});

// --- N-setting linear inequality -------------------------------------------
//
// S_N = (1/N) sum_k <A_k (u_k . sigma_B)> - C_N <= 0

inline constexpr std::size_t kMaxLinearSettings = 20;

using CorrelationMatrix = std::array<std::array<double, 3>, 3>;

// T_ij = tr(rho sigma_i (x) sigma_j)
CorrelationMatrix correlation_matrix(const TwoQubitState& rho);

// C_N = (1/N) max over +-1 responses of |sum_k a_k u_k|. Throws
// BudgetExceeded for N > kMaxLinearSettings.
double linear_inequality_bound(std::span<const BlochVector> directions,
                               kernels::Exec exec = kernels::Exec::Parallel);

struct LinearInequalityResult {
  std::size_t n_settings;
  std::vector<BlochVector> directions;
  SteeringParty party;
  double quantum_value;  // optimal projective observables on the steering side
  double c_n;
  double violation;  // quantum_value - c_n
};

LinearInequalityResult linear_inequality_value(const TwoQubitState& rho, std::span<const BlochVector> directions,
                                               SteeringParty party, kernels::Exec exec = kernels::Exec::Parallel);

// Ten directions, one per antipodal vertex pair of a regular dodecahedron
// with vertices (+-1,+-1,+-1), (0,+-1/g,+-g), (+-1/g,+-g,0), (+-g,0,+-1/g),
// g the golden ratio; the representative has its first nonzero coordinate
// positive. Order:
//   (1,1,1) (1,1,-1) (1,-1,1) (1,-1,-1) (0,1/g,g) (0,1/g,-g)
//   (1/g,g,0) (1/g,-g,0) (g,0,1/g) (g,0,-1/g)     all divided by sqrt3
std::vector<BlochVector> default_direction_set();

// Rejects non-unit entries (NotUnit, tolerance `unit_tol`), entries equal up
// to sign (DuplicateDirection), and empty lists.
std::vector<BlochVector> validate_direction_set(std::span<const std::array<double, 3>> raw, double unit_tol = 1e-9);

}  // namespace avn
