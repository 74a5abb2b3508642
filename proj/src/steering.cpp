#include "avn/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "avn/lhs.hpp"
#include "avn/optimize.hpp"

namespace avn {

ComplexMatrix2 ConditionalPair::normalized(int outcome, double zero_weight) const {
  const double mu = weights.at(outcome);
  if (mu < zero_weight)
    throw Error(ErrorKind::ZeroProbabilityOutcome, "conditional state of an impossible outcome is undefined", mu);
  return unnormalized[outcome] * (1.0 / mu);
}

double ConditionalPair::purity_deficit(int outcome, double zero_weight) const {
  const double mu = weights.at(outcome);
  if (mu < zero_weight) return 1.0;
  return 1.0 - (unnormalized[outcome] * unnormalized[outcome]).trace().real() / (mu * mu);
}

ConditionalPair conditional_pair(const TwoQubitState& rho, const BlochVector& n) {
  ConditionalPair pair{n, {}, {}};
  for (int a = 0; a < 2; ++a) {
    const ComplexMatrix4 lifted = tensor(direction_projector(n, a), ComplexMatrix2::identity());
    ComplexMatrix2 cond = partial_trace_A(lifted * rho.matrix());
    cond = 0.5 * (cond + cond.adjoint());
    pair.unnormalized[a] = cond;
    pair.weights[a] = cond.trace().real();
  }
  return pair;
}

double purity(const ComplexMatrix2& q) { return (q * q).trace().real(); }

// ---------------------------------------------------------------------------
// Canonical decomposition

ComplexMatrix4 assemble_canonical(double mu1, double mu2, const PureQubit& phi1, const PureQubit& phi2,
                                  const ComplexMatrix2& m) {
  const ComplexMatrix2 e00{1.0, 0.0, 0.0, 0.0};
  const ComplexMatrix2 e11{0.0, 0.0, 0.0, 1.0};
  const ComplexMatrix2 e01{0.0, 1.0, 0.0, 0.0};
  const ComplexMatrix2 e10{0.0, 0.0, 1.0, 0.0};
  return mu1 * tensor(e00, phi1.projector()) + mu2 * tensor(e11, phi2.projector()) + tensor(e01, m) +
         tensor(e10, m.adjoint());
}

ComplexMatrix4 CanonicalDecomposition::reassemble() const { return assemble_canonical(mu1, mu2, phi1, phi2, m_block); }

BlochVector CanonicalDecomposition::to_original_frame(const BlochVector& rotated) const {
  return rotate_transposed(so3_of(alice_rotation), rotated);
}

CanonicalDecomposition canonical_decomposition(const TwoQubitState& rho, const BlochVector& n,
                                               const SteeringTolerances& tol) {
  const ComplexMatrix2 u = rotation_to_z(n);
  const ComplexMatrix4 big = tensor(u, ComplexMatrix2::identity());
  const ComplexMatrix4 rotated = big * rho.matrix() * big.adjoint();

  std::array<ComplexMatrix2, 2> cond{alice_block(rotated, 0, 0), alice_block(rotated, 1, 1)};
  std::array<double, 2> mu{};
  double worst_deficit = 0.0;
  for (int a = 0; a < 2; ++a) {
    cond[a] = 0.5 * (cond[a] + cond[a].adjoint());
    mu[a] = cond[a].trace().real();
    if (mu[a] < tol.zero_weight)
      throw Error(ErrorKind::ZeroProbabilityOutcome, "an outcome along this direction has zero probability", mu[a]);
    worst_deficit = std::max(worst_deficit, 1.0 - purity(cond[a]) / (mu[a] * mu[a]));
  }
  if (worst_deficit > tol.purity)
    throw Error(ErrorKind::ConditionalsNotPure, "normalized conditionals are not pure along this direction",
                worst_deficit);

  const PureQubit phi1 = PureQubit::from_vector(eigensystem_hermitian2(cond[0]).eigenvectors[0]);
  const PureQubit phi2 = PureQubit::from_vector(eigensystem_hermitian2(cond[1]).eigenvectors[0]);
  const double fid = phi1.fidelity(phi2);
  if (fid >= 1.0 - tol.distinct)
    throw Error(ErrorKind::ConditionalsIdentical,
                "conditionals coincide along this direction (product-like for this measurement)", fid);

  CanonicalDecomposition d{n, u, mu[0], mu[1], phi1, phi2, alice_block(rotated, 0, 1), 0.0};
  d.reassembly_error = distance(d.reassemble(), rotated);
  return d;
}

// ---------------------------------------------------------------------------
// Second setting

const char* to_string(Axis axis) { return axis == Axis::X ? "x" : "y"; }

BlochVector axis_vector(Axis axis) { return axis == Axis::X ? BlochVector::x_axis() : BlochVector::y_axis(); }

double span_residual(const ComplexMatrix2& h, const PureQubit& phi1, const PureQubit& phi2) {
  const ComplexMatrix2 p1 = phi1.projector();
  const ComplexMatrix2 p2 = phi2.projector();
  const double f = phi1.fidelity(phi2);
  const double b1 = inner(p1, h).real();
  const double b2 = inner(p2, h).real();
  const double det = 1.0 - f * f;
  double a = 0.0;
  double b = 0.0;
  if (det > 1e-14) {
    a = (b1 - f * b2) / det;
    b = (b2 - f * b1) / det;
  } else {
    a = b1;  // p1 == p2: one generator
  }
  return distance(h, a * p1 + b * p2);
}

Axis choose_second_setting(const CanonicalDecomposition& d, const SteeringTolerances& tol) {
  const double m = d.m_norm();
  if (m <= tol.m_norm) throw Error(ErrorKind::MZero, "M vanishes: the state is separable and no protocol steers it", m);
  const ComplexMatrix2 h = d.m_block + d.m_block.adjoint();
  return span_residual(h, d.phi1, d.phi2) > kSpanResidualTolerance ? Axis::X : Axis::Y;
}

// ---------------------------------------------------------------------------
// Direction search

const char* to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::Steerable: return "steerable";
    case VerdictReason::NoPureDirection: return "no_pure_direction";
    case VerdictReason::ConditionalsIdentical: return "conditionals_identical";
    case VerdictReason::SeparableMZero: return "separable_m_zero";
  }
  return "unknown";
}

namespace {

struct Candidate {
  BlochVector direction;
  double score;
};

Candidate refine(const kernels::ConditionalGenerator& gen, const BlochVector& start, double step,
                 double zero_weight) {
  auto objective = [&](const std::array<double, 2>& p) {
    return -kernels::min_conditional_purity(gen, BlochVector::spherical(p[0], p[1]), zero_weight);
  };
  std::array<double, 2> x{start.polar(), start.azimuth()};
  double value = objective(x);
  // Restarting with a shrinking simplex keeps Nelder-Mead from stalling on
  // the kink where the two outcome purities cross.
  for (double s = step; s > 1e-9; s *= 0.01) {
    const auto m = optimize::nelder_mead<2>(objective, x, s);
    if (m.value <= value) {
      x = m.x;
      value = m.value;
    }
  }
  return {BlochVector::spherical(x[0], x[1]), -value};
}

// Closest point to n on the unit sphere of the (near-)null space of Q.
std::optional<BlochVector> project_to_null_space(const EigenSystem3& es, const BlochVector& n, double null_tol) {
  std::array<double, 3> p{};
  bool any = false;
  for (int k = 0; k < 3; ++k) {
    if (es.eigenvalues[k] < -null_tol) continue;
    any = true;
    double overlap = 0.0;
    for (int i = 0; i < 3; ++i) overlap += es.eigenvectors[i][k] * n.xyz()[i];
    for (int i = 0; i < 3; ++i) p[i] += overlap * es.eigenvectors[i][k];
  }
  const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  if (!any || r < 0.5) return std::nullopt;
  return BlochVector::normalized(p[0], p[1], p[2]);
}

}  // namespace

Rotation3 pure_direction_form(const TwoQubitState& rho) {
  std::array<double, 3> a{};
  std::array<double, 3> b{};
  Rotation3 t{};
  const ComplexMatrix2 id = ComplexMatrix2::identity();
  for (int i = 0; i < 3; ++i) {
    a[i] = (tensor(pauli::axis(i), id) * rho.matrix()).trace().real();
    b[i] = (tensor(id, pauli::axis(i)) * rho.matrix()).trace().real();
    for (int j = 0; j < 3; ++j) t[i][j] = (tensor(pauli::axis(i), pauli::axis(j)) * rho.matrix()).trace().real();
  }
  const double b2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
  Rotation3 q{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) q[i][j] += t[i][k] * t[j][k];
      q[i][j] -= a[i] * a[j] + (i == j ? 1.0 - b2 : 0.0);
    }
  return q;
}

SteeringVerdict find_avn_direction(const TwoQubitState& rho, const SearchOptions& opt) {
  SteeringVerdict verdict;
  const auto gen = kernels::conditional_generator(rho.matrix());
  const auto grid = kernels::fibonacci_hemisphere(std::max<std::size_t>(opt.grid_points, 1));
  const auto scores = opt.exec == kernels::Exec::Serial ? kernels::purity_scores_serial(gen, grid)
                                                        : kernels::purity_scores_omp(gen, grid);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t starts = std::min(std::max<std::size_t>(opt.refine_starts, 1), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return kernels::beats({scores[a], a}, {scores[b], b});
                    });

  const double step = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(grid.size()));
  // The top eigenvector of Q is the exact pure direction when one exists;
  // it joins the lattice starts, and the winner is projected onto null(Q).
  const EigenSystem3 form = eigensystem_symmetric3(pure_direction_form(rho));
  std::vector<BlochVector> starts_list;
  for (std::size_t s = 0; s < starts; ++s) starts_list.push_back(grid[order[s]]);
  starts_list.push_back(
      BlochVector::normalized(form.eigenvectors[0][0], form.eigenvectors[1][0], form.eigenvectors[2][0]));

  Candidate best{grid[order[0]], scores[order[0]]};
  for (const auto& start : starts_list) {
    const Candidate c = refine(gen, start, step, opt.tol.zero_weight);
    if (c.score > best.score) best = c;
  }
  if (const auto polished = project_to_null_space(form, best.direction, opt.null_tol)) {
    const double score = kernels::min_conditional_purity(gen, *polished, opt.tol.zero_weight);
    if (score >= best.score - 1e-12) best = {*polished, score};
  }

  const ConditionalPair pair = conditional_pair(rho, best.direction);
  verdict.direction = best.direction;
  verdict.best_min_purity = best.score;
  for (int a = 0; a < 2; ++a) verdict.conditional_purities[a] = 1.0 - pair.purity_deficit(a, opt.tol.zero_weight);

  if (1.0 - best.score > opt.tol.purity) {
    verdict.reason = VerdictReason::NoPureDirection;
    return verdict;
  }

  try {
    verdict.decomposition = canonical_decomposition(rho, best.direction, opt.tol);
  } catch (const Error& e) {
    verdict.reason = e.kind() == ErrorKind::ConditionalsIdentical ? VerdictReason::ConditionalsIdentical
                                                                  : VerdictReason::NoPureDirection;
    return verdict;
  }

  const auto& d = *verdict.decomposition;
  if (d.m_norm() <= opt.tol.m_norm) {
    verdict.reason = VerdictReason::SeparableMZero;
    return verdict;
  }
  verdict.steerable = true;
  verdict.reason = VerdictReason::Steerable;
  verdict.second_setting = choose_second_setting(d, opt.tol);
  verdict.second_direction = d.to_original_frame(axis_vector(*verdict.second_setting));
  return verdict;
}

// ---------------------------------------------------------------------------
// Equivalence chain

EquivalenceReport verify_equivalence_chain(const TwoQubitState& rho, const BlochVector& n,
                                           const SteeringTolerances& tol, double feas_tol) {
  const CanonicalDecomposition d = canonical_decomposition(rho, n, tol);
  Axis axis = Axis::X;
  if (d.m_norm() > tol.m_norm) axis = choose_second_setting(d, tol);
  const BlochVector second = d.to_original_frame(axis_vector(axis));

  LhsOptions lhs_opt;
  lhs_opt.feas_tol = feas_tol;
  const FeasibilityResult lhs =
      lhs_feasible(assemblage_from_state(rho, n, second, SteeringParty::AliceToBob), lhs_opt);

  const double ppt = ppt_min_eigenvalue(rho);
  return EquivalenceReport{d.m_norm() > tol.m_norm, ppt < -kStateTolerance, !lhs.feasible, d.m_norm(), ppt,
                           lhs.residual, second};
}

}  // namespace avn
