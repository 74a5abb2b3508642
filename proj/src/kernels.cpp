#include "avn/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace avn::kernels {

ArgMax argmax_serial(std::span<const double> values) {
  ArgMax best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ArgMax cand{values[i], i};
    if (beats(cand, best)) best = cand;
  }
  return best;
}

ArgMax argmax_omp(std::span<const double> values) {
  ArgMax best{-std::numeric_limits<double>::infinity(), 0};
  const auto count = static_cast<long long>(values.size());
#pragma omp parallel
  {
    ArgMax local{-std::numeric_limits<double>::infinity(), 0};
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < count; ++i) {
      const ArgMax cand{values[static_cast<std::size_t>(i)], static_cast<std::size_t>(i)};
      if (beats(cand, local)) local = cand;
    }
#pragma omp critical(avn_argmax)
    if (beats(local, best)) best = local;
  }
  return best;
}

ConditionalGenerator conditional_generator(const ComplexMatrix4& rho) {
  ConditionalGenerator gen;
  gen.reduced_bob = partial_trace_A(rho);
  for (int i = 0; i < 3; ++i) gen.k[i] = partial_trace_A(tensor(pauli::axis(i), ComplexMatrix2::identity()) * rho);
  return gen;
}

double min_conditional_purity(const ConditionalGenerator& gen, const BlochVector& n, double zero_weight) {
  const ComplexMatrix2 shift = n.x() * gen.k[0] + n.y() * gen.k[1] + n.z() * gen.k[2];
  double worst = 1.0;
  for (int a = 0; a < 2; ++a) {
    const ComplexMatrix2 cond = 0.5 * (a == 0 ? gen.reduced_bob + shift : gen.reduced_bob - shift);
    const double mu = cond(0, 0).real() + cond(1, 1).real();
    if (mu < zero_weight) return 0.0;
    const double sq = std::norm(cond(0, 0)) + std::norm(cond(1, 1)) + 2.0 * std::norm(cond(0, 1));
    worst = std::min(worst, sq / (mu * mu));
  }
  return worst;
}

std::vector<double> purity_scores_serial(const ConditionalGenerator& gen, std::span<const BlochVector> dirs) {
  return map_serial<double>(dirs.size(), [&](std::size_t i) { return min_conditional_purity(gen, dirs[i]); });
}

std::vector<double> purity_scores_omp(const ConditionalGenerator& gen, std::span<const BlochVector> dirs) {
  return map_omp<double>(dirs.size(), [&](std::size_t i) { return min_conditional_purity(gen, dirs[i]); });
}

namespace {

double signed_resultant(std::span<const BlochVector> dirs, unsigned long long mask) {
  double x = dirs[0].x();
  double y = dirs[0].y();
  double z = dirs[0].z();
  for (std::size_t k = 1; k < dirs.size(); ++k) {
    const double s = (mask >> (k - 1)) & 1ULL ? -1.0 : 1.0;
    x += s * dirs[k].x();
    y += s * dirs[k].y();
    z += s * dirs[k].z();
  }
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace

double max_signed_resultant_serial(std::span<const BlochVector> dirs) {
  if (dirs.empty()) return 0.0;
  const unsigned long long patterns = 1ULL << (dirs.size() - 1);
  double best = 0.0;
  for (unsigned long long m = 0; m < patterns; ++m) best = std::max(best, signed_resultant(dirs, m));
  return best;
}

double max_signed_resultant_omp(std::span<const BlochVector> dirs) {
  if (dirs.empty()) return 0.0;
  const auto patterns = static_cast<long long>(1ULL << (dirs.size() - 1));
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (long long m = 0; m < patterns; ++m)
    best = std::max(best, signed_resultant(dirs, static_cast<unsigned long long>(m)));
  return best;
}

std::vector<BlochVector> fibonacci_hemisphere(std::size_t n) {
  std::vector<BlochVector> out;
  out.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back(BlochVector::normalized(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

std::vector<BlochVector> fibonacci_sphere(std::size_t n) {
  std::vector<BlochVector> out;
  out.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    out.push_back(BlochVector::normalized(r * std::cos(phi), r * std::sin(phi), z));
  }
  return out;
}

}  // namespace avn::kernels
