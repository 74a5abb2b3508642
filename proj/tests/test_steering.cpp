#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "avn/error.hpp"
#include "avn/lhs.hpp"
#include "avn/steering.hpp"
#include "support.hpp"

namespace avn {
namespace {

using test::Draw;
using test::max_abs_diff;
constexpr double kPi = std::numbers::pi;

// Conditional on Bob for Alice's outcome a along n, by explicit index sums.
test::CMat2 conditional_oracle(const ComplexMatrix4& rho, const BlochVector& n, int a) {
  const double s = a == 0 ? 1.0 : -1.0;
  test::CMat2 p;
  p << 0.5 * (1 + s * n.z()), 0.5 * s * Complex(n.x(), -n.y()), 0.5 * s * Complex(n.x(), n.y()), 0.5 * (1 - s * n.z());
  test::CMat2 out = test::CMat2::Zero();
  const auto r = test::to_eigen(rho);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int b = 0; b < 2; ++b)
        for (int b2 = 0; b2 < 2; ++b2) out(b, b2) += p(j, i) * r(2 * i + b, 2 * j + b2);
  return out;
}

double min_purity_oracle(const ComplexMatrix4& rho, const BlochVector& n) {
  double worst = 1.0;
  for (int a = 0; a < 2; ++a) {
    const test::CMat2 c = conditional_oracle(rho, n, a);
    const double mu = c.trace().real();
    if (mu < 1e-12) return 0.0;
    worst = std::min(worst, (c * c).trace().real() / (mu * mu));
  }
  return worst;
}

TEST(ConditionalPairTest, MatchesOracle) {
  Draw d(1);
  for (int k = 0; k < 200; ++k) {
    const auto rho = random_state(k, 1 + k % 4);
    const BlochVector n = d.unit();
    const auto pair = conditional_pair(rho, n);
    for (int a = 0; a < 2; ++a) {
      const test::CMat2 o = conditional_oracle(rho.matrix(), n, a);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_LT(std::abs(pair.unnormalized[a](i, j) - o(i, j)), 1e-14);
    }
  }
}

TEST(ConditionalPairTest, NoSignalling) {
  Draw d(2);
  for (int k = 0; k < 20; ++k) {
    const auto rho = random_state(100 + k, 1 + k % 4);
    for (int j = 0; j < 100; ++j) {
      const auto pair = conditional_pair(rho, d.unit());
      EXPECT_LT(max_abs_diff(pair.unnormalized[0] + pair.unnormalized[1], rho.reduced_bob()), 1e-10);
      EXPECT_NEAR(pair.weights[0] + pair.weights[1], 1.0, 1e-10);
      EXPECT_GE(eigensystem_hermitian2(pair.unnormalized[0]).eigenvalues[1], -1e-12);
    }
  }
}

TEST(ConditionalPairTest, ProductStateGivesIdenticalConditionals) {
  Draw d(3);
  const auto psi_b = PureQubit::from_vector(d.ket());
  const auto rho = product_state(PureQubit::from_vector(d.ket()), psi_b);
  for (int k = 0; k < 20; ++k) {
    const auto pair = conditional_pair(rho, d.unit());
    for (int a = 0; a < 2; ++a) {
      ASSERT_GT(pair.weights[a], 1e-6);
      EXPECT_LT(max_abs_diff(pair.normalized(a), psi_b.projector()), 1e-12);
    }
  }
}

TEST(ConditionalPairTest, TestStateAlongXIsPure) {
  for (double V : {0.1, 0.6, 0.9}) {
    for (double t : {0.2, kPi / 8, 1.1}) {
      const auto pair = conditional_pair(family_test_state(V, t), BlochVector::x_axis());
      const Vector2 plus{std::cos(t), std::sin(t)};
      const Vector2 minus{std::cos(t), -std::sin(t)};
      EXPECT_NEAR(pair.weights[0], 0.5, 1e-12);
      EXPECT_NEAR(pair.weights[1], 0.5, 1e-12);
      EXPECT_LT(max_abs_diff(pair.normalized(0), test::ket_projector(plus)), 1e-12);
      EXPECT_LT(max_abs_diff(pair.normalized(1), test::ket_projector(minus)), 1e-12);
      EXPECT_LT(pair.purity_deficit(0), 1e-12);
      EXPECT_LT(pair.purity_deficit(1), 1e-12);
    }
  }
}

TEST(ConditionalPairTest, MaximallyMixed) {
  Draw d(4);
  const auto pair = conditional_pair(maximally_mixed(), d.unit());
  for (int a = 0; a < 2; ++a) {
    EXPECT_LT(max_abs_diff(pair.unnormalized[a], 0.25 * ComplexMatrix2::identity()), 1e-15);
    EXPECT_NEAR(pair.weights[a], 0.5, 1e-15);
  }
}

TEST(ConditionalPairTest, ZeroWeightOutcomeHasNoNormalizedState) {
  const auto rho = product_state(PureQubit::from_amplitudes(1.0, 0.0), PureQubit::from_amplitudes(1.0, 0.0));
  const auto pair = conditional_pair(rho, BlochVector::z_axis());
  EXPECT_EQ(pair.weights[1], 0.0);
  EXPECT_THROW(pair.normalized(1), Error);
}

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity(ComplexMatrix2{1.0, 0.0, 0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(purity(0.5 * ComplexMatrix2::identity()), 0.5);
  EXPECT_DOUBLE_EQ(purity(ComplexMatrix2{0.75, 0.0, 0.0, 0.25}), 0.625);
}

// ---------------------------------------------------------------------------

TEST(Decomposition, BellAlongZ) {
  const auto d = canonical_decomposition(bell_phi_plus(), BlochVector::z_axis());
  EXPECT_NEAR(d.mu1, 0.5, 1e-15);
  EXPECT_NEAR(d.mu2, 0.5, 1e-15);
  EXPECT_NEAR(d.phi1.fidelity(PureQubit::from_amplitudes(1.0, 0.0)), 1.0, 1e-15);
  EXPECT_NEAR(d.phi2.fidelity(PureQubit::from_amplitudes(0.0, 1.0)), 1.0, 1e-15);
  EXPECT_LT(max_abs_diff(d.m_block, ComplexMatrix2{0.0, 0.5, 0.0, 0.0}), 1e-15);
  EXPECT_LT(d.reassembly_error, 1e-10);
}

TEST(Decomposition, ProductIsIdentical) {
  Draw dr(5);
  const auto rho = product_state(PureQubit::from_amplitudes(1.0, 0.0), PureQubit::from_vector(dr.ket()));
  try {
    canonical_decomposition(rho, BlochVector::x_axis());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConditionalsIdentical);
  }
}

TEST(Decomposition, ColorNoiseAlongZ) {
  for (double V : {0.0, 0.3, 1.0}) {
    for (double t : {0.1, kPi / 4, 1.2}) {
      const auto d = canonical_decomposition(family_color_noise(V, t), BlochVector::z_axis());
      EXPECT_NEAR(d.phi1.fidelity(PureQubit::from_amplitudes(1.0, 0.0)), 1.0, 1e-15);
      EXPECT_NEAR(d.phi2.fidelity(PureQubit::from_amplitudes(0.0, 1.0)), 1.0, 1e-15);
      const double c = V * std::sin(t) * std::cos(t);
      EXPECT_LT(max_abs_diff(d.m_block, ComplexMatrix2{0.0, c, 0.0, 0.0}), 1e-15);
      EXPECT_LT(d.reassembly_error, 1e-10);
    }
  }
}

TEST(Decomposition, NotPureReportsDeficit) {
  try {
    canonical_decomposition(family_test_state(0.6, kPi / 8), BlochVector::z_axis());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConditionalsNotPure);
    EXPECT_GT(e.measured(), 1e-3);
  }
}

TEST(Decomposition, ReassemblesRandomCanonicalForms) {
  Draw dr(6);
  for (int k = 0; k < 300; ++k) {
    const auto draw = test::draw_canonical(dr);
    const ComplexMatrix2 u = dr.unitary();
    // With Alice rotated by U^dagger the pure direction becomes n = R(U)^T z.
    const auto rho = make_state(draw.matrix).with_alice_unitary(u.adjoint());
    const BlochVector n = rotate_transposed(so3_of(u), BlochVector::z_axis());
    const auto d = canonical_decomposition(rho, n);
    EXPECT_LT(d.reassembly_error, 1e-10);
    EXPECT_NEAR(d.mu1, draw.mu1, 1e-10);
    const ComplexMatrix4 big = tensor(d.alice_rotation, ComplexMatrix2::identity());
    EXPECT_LT(max_abs_diff(d.reassemble(), big * rho.matrix() * big.adjoint()), 1e-10);
  }
}

// ---------------------------------------------------------------------------

TEST(SecondSetting, BellPicksX) {
  const auto d = canonical_decomposition(bell_phi_plus(), BlochVector::z_axis());
  EXPECT_EQ(choose_second_setting(d), Axis::X);
}

// M = (i/2)|0><1| gives M + M^dagger = sigma_y / 2 up to sign: still off
// diagonal, so outside span{|0><0|, |1><1|} and the rule keeps x.
TEST(SecondSetting, ImaginaryOffDiagonalStillPicksX) {
  auto d = canonical_decomposition(bell_phi_plus(), BlochVector::z_axis());
  d.m_block = ComplexMatrix2{0.0, Complex{0.0, 0.5}, 0.0, 0.0};
  EXPECT_GT(span_residual(d.m_block + d.m_block.adjoint(), d.phi1, d.phi2), 0.5);
  EXPECT_EQ(choose_second_setting(d), Axis::X);
}

// Hand-built decomposition where M + M^dagger lies in the span: the rule
// falls through to y. Not a valid state (no valid state reaches this
// branch with M != 0) but it exercises the selection itself.
TEST(SecondSetting, InSpanPicksY) {
  Draw dr(7);
  const auto phi1 = PureQubit::from_vector(dr.ket());
  const auto phi2 = PureQubit::from_vector(dr.ket());
  const ComplexMatrix2 m = 0.2 * phi1.projector() - 0.1 * phi2.projector();
  const CanonicalDecomposition d{BlochVector::z_axis(), ComplexMatrix2::identity(), 0.5, 0.5, phi1, phi2, m, 0.0};
  EXPECT_LT(span_residual(m + m.adjoint(), phi1, phi2), 1e-12);
  EXPECT_EQ(choose_second_setting(d), Axis::Y);
}

TEST(SecondSetting, ZeroMThrows) {
  const auto d = canonical_decomposition(family_color_noise(0.0, 0.3), BlochVector::z_axis());
  try {
    choose_second_setting(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MZero);
  }
}

TEST(SecondSetting, ValidStatesNeverReachY) {
  Draw dr(8);
  for (int k = 0; k < 300; ++k) {
    const auto draw = test::draw_canonical(dr, 0.0);
    const auto d = canonical_decomposition(make_state(draw.matrix), BlochVector::z_axis());
    EXPECT_EQ(choose_second_setting(d), Axis::X);
  }
}

// ---------------------------------------------------------------------------
// Positivity forces M out of span{P1, P2}

TEST(SpanOfProjectors, AlwaysNonPositive) {
  Draw dr(9);
  int tested = 0;
  while (tested < 1000) {
    const Vector2 p1 = dr.ket();
    const Vector2 p2 = dr.ket();
    const double overlap = std::abs(std::conj(p1[0]) * p2[0] + std::conj(p1[1]) * p2[1]);
    if (overlap >= 1.0 - 1e-6) continue;
    const Complex alpha = dr.cgauss() * dr.uniform();
    const Complex beta = dr.cgauss() * dr.uniform();
    if (std::abs(alpha) + std::abs(beta) == 0.0) continue;
    const double mu1 = dr.uniform();
    const ComplexMatrix2 m = alpha * test::ket_projector(p1) + beta * test::ket_projector(p2);
    const ComplexMatrix4 cand =
        assemble_canonical(mu1, 1.0 - mu1, PureQubit::from_vector(p1), PureQubit::from_vector(p2), m);
    EXPECT_LT(test::min_eig(cand), 0.0);
    try {
      make_state(cand);
      ADD_FAILURE() << "accepted a non-positive candidate";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotPositive);
    }
    ++tested;
  }
}

TEST(SpanOfProjectors, AssemblerMatchesHandBlock) {
  Draw dr(10);
  const auto draw = test::draw_canonical(dr, 0.0);
  const ComplexMatrix4 lib = assemble_canonical(draw.mu1, 1.0 - draw.mu1, PureQubit::from_vector(draw.phi1),
                                                PureQubit::from_vector(draw.phi2), draw.m);
  EXPECT_LT(max_abs_diff(lib, draw.matrix), 1e-15);
}

TEST(MZeroIffSeparable, RandomCanonicalForms) {
  Draw dr(11);
  for (int k = 0; k < 500; ++k) {
    const auto draw = test::draw_canonical(dr);
    const auto rho = make_state(draw.matrix);
    const auto d = canonical_decomposition(rho, BlochVector::z_axis());
    const bool m_zero = d.m_norm() <= SteeringTolerances{}.m_norm;
    EXPECT_EQ(m_zero, draw.separable);
    EXPECT_EQ(m_zero, test::ppt_oracle(rho.matrix()) >= -1e-10);
    EXPECT_EQ(m_zero, is_ppt_separable(rho));
  }
}

// ---------------------------------------------------------------------------

TEST(PureDirectionForm, DeterminantIdentity) {
  Draw dr(12);
  for (int k = 0; k < 200; ++k) {
    const auto rho = random_state(500 + k, 1 + k % 4);
    const Rotation3 q = pure_direction_form(rho);
    const BlochVector n = dr.unit();
    double form = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) form += n.xyz()[i] * q[i][j] * n.xyz()[j];
    double dets = 0.0;
    for (int a = 0; a < 2; ++a) dets += conditional_oracle(rho.matrix(), n, a).determinant().real();
    EXPECT_NEAR(-form / 8.0, dets, 1e-13);
    EXPECT_LE(eigensystem_symmetric3(q).eigenvalues[0], 1e-12);
  }
}

TEST(FindDirection, AsymmetricExample) {
  const auto v = find_avn_direction(family_test_state(0.6, kPi / 8));
  ASSERT_TRUE(v.steerable);
  EXPECT_EQ(v.reason, VerdictReason::Steerable);
  EXPECT_NEAR(std::abs(v.direction->x()), 1.0, 1e-12);
  EXPECT_GE(v.conditional_purities[0], 1.0 - 1e-7);
  EXPECT_GE(v.conditional_purities[1], 1.0 - 1e-7);
  ASSERT_TRUE(v.second_direction.has_value());
  EXPECT_NEAR(std::abs(v.second_direction->dot(*v.direction)), 0.0, 1e-9);
}

TEST(FindDirection, ProductNotSteerable) {
  Draw dr(13);
  const auto rho = product_state(PureQubit::from_vector(dr.ket()), PureQubit::from_vector(dr.ket()));
  const auto v = find_avn_direction(rho);
  EXPECT_FALSE(v.steerable);
  EXPECT_EQ(v.reason, VerdictReason::ConditionalsIdentical);
}

TEST(FindDirection, NoisyMixtureHasNoPureDirection) {
  const auto rho = mix(family_test_state(0.6, kPi / 8), maximally_mixed(), 0.7);
  double best = 0.0;
  const auto grid = kernels::fibonacci_sphere(10000);
  for (const auto& n : grid) best = std::max(best, min_purity_oracle(rho.matrix(), n));
  EXPECT_LT(best, 1.0 - 1e-6);
  const auto v = find_avn_direction(rho);
  EXPECT_FALSE(v.steerable);
  EXPECT_EQ(v.reason, VerdictReason::NoPureDirection);
  EXPECT_LE(v.best_min_purity, 1.0 - 1e-6);
  EXPECT_GE(v.best_min_purity, best - 1e-9);
}

TEST(FindDirection, SeparableCanonicalFormReportsMZero) {
  const auto v = find_avn_direction(family_color_noise(0.0, 0.5));
  EXPECT_FALSE(v.steerable);
  EXPECT_EQ(v.reason, VerdictReason::SeparableMZero);
  EXPECT_NEAR(std::abs(v.direction->z()), 1.0, 1e-12);
}

TEST(FindDirection, SteerableImpliesEntangled) {
  Draw dr(14);
  int steerable = 0;
  for (int k = 0; k < 60; ++k) {
    const auto draw = test::draw_canonical(dr);
    const auto rho = make_state(draw.matrix).with_alice_unitary(dr.unitary());
    const auto v = find_avn_direction(rho);
    EXPECT_EQ(v.steerable, !draw.separable);
    if (v.steerable) {
      ++steerable;
      EXPECT_FALSE(is_ppt_separable(rho));
    }
  }
  EXPECT_GT(steerable, 20);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto rho = random_state(seed, 3 + static_cast<int>(seed % 2));
    const auto v = find_avn_direction(rho);
    if (v.steerable) EXPECT_FALSE(is_ppt_separable(rho));
  }
}

TEST(FindDirection, FrameCovariance) {
  Draw dr(15);
  for (int k = 0; k < 40; ++k) {
    const auto draw = test::draw_canonical(dr);
    const auto rho = make_state(draw.matrix);
    const ComplexMatrix2 u = dr.unitary();
    const auto moved = rho.with_alice_unitary(u);
    const auto v0 = find_avn_direction(rho);
    const auto v1 = find_avn_direction(moved);
    EXPECT_EQ(v0.steerable, v1.steerable);
    ASSERT_TRUE(v0.direction && v1.direction);
    // Pure directions are +-z before the rotation and +-R z after it.
    const BlochVector expected = rotate(so3_of(u), BlochVector::z_axis());
    EXPECT_NEAR(std::abs(v1.direction->dot(expected)), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(v0.direction->z()), 1.0, 1e-9);
  }
}

TEST(FindDirection, SerialAndParallelAgree) {
  const auto rho = mix(family_test_state(0.6, 0.3), maximally_mixed(), 0.9);
  SearchOptions so;
  so.exec = kernels::Exec::Serial;
  const auto a = find_avn_direction(rho, so);
  so.exec = kernels::Exec::Parallel;
  const auto b = find_avn_direction(rho, so);
  EXPECT_EQ(*a.direction, *b.direction);
  EXPECT_EQ(a.best_min_purity, b.best_min_purity);
}

// ---------------------------------------------------------------------------

TEST(EquivalenceChain, Examples) {
  const auto r1 = verify_equivalence_chain(family_test_state(0.6, kPi / 8), BlochVector::x_axis());
  EXPECT_TRUE(r1.m_nonzero);
  EXPECT_TRUE(r1.entangled);
  EXPECT_TRUE(r1.lhs_infeasible);
  EXPECT_TRUE(r1.agree());

  const auto r2 = verify_equivalence_chain(family_test_state(0.5, kPi / 8), BlochVector::x_axis());
  EXPECT_FALSE(r2.m_nonzero);
  EXPECT_FALSE(r2.entangled);
  EXPECT_FALSE(r2.lhs_infeasible);

  for (double t : {0.0, 0.4, kPi / 2}) {
    const auto r3 = verify_equivalence_chain(family_color_noise(0.0, t), BlochVector::z_axis());
    EXPECT_FALSE(r3.m_nonzero);
    EXPECT_FALSE(r3.entangled);
    EXPECT_FALSE(r3.lhs_infeasible);
  }
}

TEST(EquivalenceChain, RandomRankTwoCanonicalForms) {
  Draw dr(16);
  for (int k = 0; k < 500; ++k) {
    const auto draw = test::draw_canonical(dr);
    const auto r = verify_equivalence_chain(make_state(draw.matrix), BlochVector::z_axis());
    EXPECT_TRUE(r.agree()) << k << " m=" << r.m_norm << " ppt=" << r.ppt_min_eigenvalue << " lhs=" << r.lhs_residual;
    EXPECT_EQ(r.m_nonzero, !draw.separable);
  }
}

TEST(EquivalenceChain, PropagatesPreconditionFailure) {
  EXPECT_THROW(verify_equivalence_chain(maximally_mixed(), BlochVector::z_axis()), Error);
}

}  // namespace
}  // namespace avn
