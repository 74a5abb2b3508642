// Serial reference kernels against their OpenMP twins.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "avn/kernels.hpp"
#include "avn/lhs.hpp"
#include "avn/scan.hpp"
#include "avn/state.hpp"

namespace {

using namespace avn;

std::vector<BlochVector> random_directions(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<BlochVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(BlochVector::normalized(g(rng), g(rng), g(rng)));
  return out;
}

void BM_PurityScores(benchmark::State& st, kernels::Exec exec) {
  const auto gen = kernels::conditional_generator(random_state(7).matrix());
  const auto dirs = kernels::fibonacci_hemisphere(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    auto v = exec == kernels::Exec::Serial ? kernels::purity_scores_serial(gen, dirs)
                                           : kernels::purity_scores_omp(gen, dirs);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SignedResultant(benchmark::State& st, kernels::Exec exec) {
  const auto dirs = random_directions(static_cast<std::size_t>(st.range(0)), 3);
  for (auto _ : st) {
    const double v = exec == kernels::Exec::Serial ? kernels::max_signed_resultant_serial(dirs)
                                                   : kernels::max_signed_resultant_omp(dirs);
    benchmark::DoNotOptimize(v);
  }
}

void BM_AsymmetricScan(benchmark::State& st, kernels::Exec exec) {
  const auto rho = family_test_state(0.6, std::numbers::pi / 8);
  const auto pairs = sample_setting_pairs(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) {
    auto rep = asymmetric_steering_scan(rho, pairs, {}, exec);
    benchmark::DoNotOptimize(rep.max_residual_b_to_a);
  }
}

void BM_ColorScan(benchmark::State& st, kernels::Exec exec) {
  ScanConfig c;
  c.family = Family::ColorNoise;
  c.v_steps = c.theta_steps = static_cast<std::size_t>(st.range(0));
  c.analyses = {Analysis::Avn, Analysis::Ineq3};
  for (auto _ : st) {
    auto records = run_scan(c, exec);
    benchmark::DoNotOptimize(records.data());
  }
}

BENCHMARK_CAPTURE(BM_PurityScores, serial, kernels::Exec::Serial)->Arg(2048)->Arg(32768);
BENCHMARK_CAPTURE(BM_PurityScores, omp, kernels::Exec::Parallel)->Arg(2048)->Arg(32768);
BENCHMARK_CAPTURE(BM_SignedResultant, serial, kernels::Exec::Serial)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_SignedResultant, omp, kernels::Exec::Parallel)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(BM_AsymmetricScan, serial, kernels::Exec::Serial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_AsymmetricScan, omp, kernels::Exec::Parallel)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ColorScan, serial, kernels::Exec::Serial)->Arg(21)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ColorScan, omp, kernels::Exec::Parallel)->Arg(21)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
