#pragma once

// Local-hidden-state feasibility for two-setting, two-outcome assemblages.
//
// A stochastic response p(a|n_j, xi) over two binary settings is a convex
// mixture of the four deterministic strategies xi -> (a, b), so an LHS model
// exists iff there are four PSD operators sigma_ab with
//
//   sigma_a0 + sigma_a1 = rho~^{n1}_a,   sigma_0b + sigma_1b = rho~^{n2}_b.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "avn/kernels.hpp"
#include "avn/linalg.hpp"
#include "avn/state.hpp"

namespace avn {

enum class SteeringParty { AliceToBob, BobToAlice };
const char* to_string(SteeringParty party);

struct Assemblage {
  std::array<BlochVector, 2> settings;
  // conditionals[j][a]: outcome a of setting j
  std::array<std::array<ComplexMatrix2, 2>, 2> conditionals;

  ComplexMatrix2 reduced(int setting) const { return conditionals[setting][0] + conditionals[setting][1]; }
};

// Validates PSD conditionals, unit total trace per setting and a common
// reduced state (InconsistentAssemblage otherwise).
Assemblage make_assemblage(const std::array<BlochVector, 2>& settings,
                           const std::array<std::array<ComplexMatrix2, 2>, 2>& conditionals,
                           double tol = kStateTolerance);

// For BobToAlice the roles are swapped: Bob measures, Alice is steered.
// Throws DegenerateSettings when |n1.n2| > 1 - 1e-9.
Assemblage assemblage_from_state(const TwoQubitState& rho, const BlochVector& n1, const BlochVector& n2,
                                 SteeringParty party);

struct LHSModel {
  // components[a][b]: hidden states answering a to setting 1 and b to setting 2
  std::array<std::array<ComplexMatrix2, 2>, 2> components;
};

// Summed Frobenius norm of the four marginal mismatches.
double marginal_residual(const LHSModel& model, const Assemblage& asm_);
double min_component_eigenvalue(const LHSModel& model);

enum class LhsMethod { PureShortcut, Ellipsoid, Dykstra };
const char* to_string(LhsMethod method);

struct LhsOptions {
  double feas_tol = 1e-8;
  int max_iterations = 100000;
  int plateau_window = 1000;
  double plateau_relative = 1e-12;
  bool pure_shortcut = true;
  double shortcut_purity_tol = 1e-12;
  bool ellipsoid = true;
  int ellipsoid_iterations = 3000;
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<LHSModel> model;
  double residual = 0.0;
  int iterations = 0;
  LhsMethod method = LhsMethod::Dykstra;
  bool plateaued = false;
  // Ellipsoid search only: best smallest eigenvalue over the four components.
  std::optional<double> margin;
};

// Uses the pure-conditional reduction when one setting has pure
// conditionals. Otherwise searches for an exact witness with the ellipsoid
// method and, failing that, runs Dykstra's alternating projections, whose
// residual is the one reported.
FeasibilityResult lhs_feasible(const Assemblage& asm_, const LhsOptions& opt = {});

// Dykstra projections between the marginal-constraint affine subspace and
// the product of PSD cones. Stops when the residual of the PSD iterate is
// <= feas_tol, when it plateaus above 10 feas_tol, or at the iteration cap.
FeasibilityResult lhs_feasible_dykstra(const Assemblage& asm_, const LhsOptions& opt = {});

// The marginals fix every component once sigma_00 = X is chosen:
//   sigma_01 = A0 - X, sigma_10 = B0 - X, sigma_11 = A1 - B0 + X.
// Maximizes the smallest eigenvalue of the four over Hermitian X (concave,
// four real parameters) and stops at the first X where it is >= 0, which
// gives a model with exact marginals. Infeasible results carry the margin
// only; the residual is left at infinity.
FeasibilityResult lhs_feasible_ellipsoid(const Assemblage& asm_, const LhsOptions& opt = {});

// Pure conditionals for one setting force every hidden state onto one of the
// two pure states, leaving a nonnegative fit of the other setting's
// conditionals. Returns nullopt when neither setting qualifies.
std::optional<FeasibilityResult> lhs_feasible_pure(const Assemblage& asm_, const LhsOptions& opt = {});

struct SettingPair {
  BlochVector n1;
  BlochVector n2;
};

// Uniform random pairs (non-degenerate), optionally led by {x, z}.
std::vector<SettingPair> sample_setting_pairs(std::size_t count, std::uint64_t seed, bool lead_with_xz = true);

struct AsymmetricEntry {
  SettingPair pair;
  FeasibilityResult a_to_b;
  FeasibilityResult b_to_a;
};

struct AsymmetricReport {
  std::vector<AsymmetricEntry> entries;  // input order
  bool a_to_b_steering_found = false;    // some pair infeasible A->B
  bool b_to_a_steering_found = false;
  double max_residual_a_to_b = 0.0;
  double max_residual_b_to_a = 0.0;

  // Alice steers Bob but no sampled protocol lets Bob steer Alice.
  bool one_way_a_to_b() const { return a_to_b_steering_found && !b_to_a_steering_found; }
};

AsymmetricReport asymmetric_steering_scan(const TwoQubitState& rho, std::span<const SettingPair> pairs,
                                          const LhsOptions& opt = {},
                                          kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace avn
