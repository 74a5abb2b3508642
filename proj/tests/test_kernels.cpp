#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "avn/kernels.hpp"
#include "avn/state.hpp"
#include "support.hpp"

namespace avn::kernels {
namespace {

TEST(Map, SerialAndParallelIdentical) {
  auto f = [](std::size_t i) { return std::sin(static_cast<double>(i) * 0.37) * std::exp(-1e-3 * i); };
  const auto a = map_serial<double>(5000, f);
  const auto b = map_omp<double>(5000, f);
  EXPECT_EQ(a, b);
  EXPECT_EQ(map<double>(Exec::Parallel, 0, f).size(), 0u);
}

TEST(Map, ExceptionPropagates) {
  auto f = [](std::size_t i) -> int {
    if (i == 77) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(map_omp<int>(200, f), std::runtime_error);
  EXPECT_THROW(map_serial<int>(200, f), std::runtime_error);
}

TEST(ArgMax, TiesGoToSmallestIndex) {
  std::vector<double> v(1000, 0.0);
  v[10] = v[500] = v[999] = 3.0;
  const auto s = argmax_serial(v);
  const auto p = argmax_omp(v);
  EXPECT_EQ(s.index, 10u);
  EXPECT_EQ(p.index, 10u);
  EXPECT_EQ(s.value, p.value);
}

TEST(ArgMax, RandomValues) {
  test::Draw d(1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> v(1 + 397 * k);
    for (auto& x : v) x = std::round(d.gauss() * 4.0);  // plenty of ties
    const auto s = argmax_serial(v);
    const auto p = argmax_omp(v);
    EXPECT_EQ(s.index, p.index);
    EXPECT_EQ(s.value, p.value);
  }
}

TEST(PurityScores, SerialAndParallelIdentical) {
  const auto dirs = fibonacci_hemisphere(3001);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto gen = conditional_generator(random_state(seed).matrix());
    EXPECT_EQ(purity_scores_serial(gen, dirs), purity_scores_omp(gen, dirs));
  }
}

TEST(PurityScores, MatchesDirectComputation) {
  const auto rho = family_test_state(0.6, std::numbers::pi / 8);
  const auto gen = conditional_generator(rho.matrix());
  EXPECT_NEAR(min_conditional_purity(gen, BlochVector::x_axis()), 1.0, 1e-14);
  EXPECT_LT(min_conditional_purity(gen, BlochVector::z_axis()), 0.99);
  // product state with Alice in |0>: the -z outcome is impossible
  const auto prod = product_state(PureQubit::from_bloch(BlochVector::z_axis()), PureQubit::from_bloch(BlochVector::x_axis()));
  EXPECT_EQ(min_conditional_purity(conditional_generator(prod.matrix()), BlochVector::z_axis()), 0.0);
}

TEST(SignedResultant, SerialAndParallelIdentical) {
  test::Draw d(2);
  for (std::size_t n = 1; n <= 16; ++n) {
    std::vector<BlochVector> dirs;
    for (std::size_t i = 0; i < n; ++i) dirs.push_back(d.unit());
    EXPECT_EQ(max_signed_resultant_serial(dirs), max_signed_resultant_omp(dirs));
  }
}

TEST(SignedResultant, Orthonormal) {
  const std::vector<BlochVector> dirs{BlochVector::x_axis(), BlochVector::y_axis(), BlochVector::z_axis()};
  EXPECT_NEAR(max_signed_resultant_serial(dirs), std::sqrt(3.0), 1e-15);
}

TEST(Fibonacci, HemisphereShape) {
  const auto h = fibonacci_hemisphere(2048);
  ASSERT_EQ(h.size(), 2048u);
  for (const auto& v : h) {
    EXPECT_GT(v.z(), 0.0);
    EXPECT_NEAR(v.dot(v), 1.0, 1e-14);
  }
  EXPECT_EQ(h, fibonacci_hemisphere(2048));
}

TEST(Fibonacci, SphereCoverage) {
  const auto s = fibonacci_sphere(4000);
  ASSERT_EQ(s.size(), 4000u);
  test::Draw d(3);
  // every random direction has a lattice point within a few spacings
  for (int k = 0; k < 200; ++k) {
    const BlochVector u = d.unit();
    double best = -1.0;
    for (const auto& v : s) best = std::max(best, u.dot(v));
    EXPECT_GT(best, std::cos(0.08));
  }
}

}  // namespace
}  // namespace avn::kernels
