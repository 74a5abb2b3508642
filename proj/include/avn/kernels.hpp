#pragma once

// Data-parallel kernels. Each has a serial reference twin; the OpenMP
// versions must produce bit-identical results (tests/test_kernels.cpp).

#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "avn/linalg.hpp"

namespace avn::kernels {

enum class Exec { Serial, Parallel };

struct ArgMax {
  double value;
  std::size_t index;
};

// Larger value wins; ties go to the smaller index.
inline bool beats(const ArgMax& a, const ArgMax& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

namespace detail {
template <class R>
std::vector<R> unwrap(std::vector<std::optional<R>>&& slots) {
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}
}  // namespace detail

template <class R, class F>
std::vector<R> map_serial(std::size_t n, F&& f) {
  std::vector<std::optional<R>> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i].emplace(f(i));
  return detail::unwrap(std::move(slots));
}

// Results land at their own index, so ordering never depends on scheduling.
// The first exception thrown by any iteration is rethrown on the caller.
template <class R, class F>
std::vector<R> map_omp(std::size_t n, F&& f) {
  std::vector<std::optional<R>> slots(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      slots[static_cast<std::size_t>(i)].emplace(f(static_cast<std::size_t>(i)));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return detail::unwrap(std::move(slots));
}

template <class R, class F>
std::vector<R> map(Exec exec, std::size_t n, F&& f) {
  return exec == Exec::Serial ? map_serial<R>(n, std::forward<F>(f)) : map_omp<R>(n, std::forward<F>(f));
}

ArgMax argmax_serial(std::span<const double> values);
ArgMax argmax_omp(std::span<const double> values);

// Bob's unnormalized conditional along n is (reduced_bob + (-1)^a n.K) / 2
// with K_i = tr_A[(sigma_i (x) 1) rho].
struct ConditionalGenerator {
  ComplexMatrix2 reduced_bob;
  std::array<ComplexMatrix2, 3> k;
};

ConditionalGenerator conditional_generator(const ComplexMatrix4& rho);

// min over outcomes of tr(rho_a^2) for the normalized conditionals; zero when
// an outcome has weight below `zero_weight`.
double min_conditional_purity(const ConditionalGenerator& gen, const BlochVector& n, double zero_weight = 1e-12);

std::vector<double> purity_scores_serial(const ConditionalGenerator& gen, std::span<const BlochVector> dirs);
std::vector<double> purity_scores_omp(const ConditionalGenerator& gen, std::span<const BlochVector> dirs);

// max over sign patterns a (a_0 fixed to +1) of |sum_k a_k u_k|.
double max_signed_resultant_serial(std::span<const BlochVector> dirs);
double max_signed_resultant_omp(std::span<const BlochVector> dirs);

// n points spread over the open upper hemisphere z > 0 (spherical Fibonacci
// lattice); antipodal duplicates are excluded by construction.
std::vector<BlochVector> fibonacci_hemisphere(std::size_t n);
// n points over the whole sphere.
std::vector<BlochVector> fibonacci_sphere(std::size_t n);

}  // namespace avn::kernels
