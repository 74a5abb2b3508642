#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace avn::optimize {

template <std::size_t N>
struct Minimum {
  std::array<double, N> x;
  double value;
  int iterations;
};

struct NelderMeadOptions {
  int max_iterations = 4000;
  double f_tolerance = 1e-16;  // absolute spread of simplex values
  double x_tolerance = 1e-12;  // largest vertex offset from the best vertex
};

// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2) from an axis-aligned initial simplex of size `step`.
template <std::size_t N, class F>
Minimum<N> nelder_mead(F&& f, const std::array<double, N>& start, double step, const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> simplex;
  std::array<double, N + 1> values;
  simplex[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= N; ++i) values[i] = f(simplex[i]);

  auto affine = [](const Point& a, const Point& b, double t) {
    Point p;
    for (std::size_t k = 0; k < N; ++k) p[k] = a[k] + t * (b[k] - a[k]);
    return p;
  };

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    std::array<std::size_t, N + 1> order;
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::array<Point, N + 1> s2;
      std::array<double, N + 1> v2;
      for (std::size_t i = 0; i <= N; ++i) {
        s2[i] = simplex[order[i]];
        v2[i] = values[order[i]];
      }
      simplex = s2;
      values = v2;
    }

    double spread = 0.0;
    for (std::size_t i = 1; i <= N; ++i)
      for (std::size_t k = 0; k < N; ++k) spread = std::max(spread, std::abs(simplex[i][k] - simplex[0][k]));
    if (values[N] - values[0] <= opt.f_tolerance && spread <= opt.x_tolerance) break;
    if (spread <= opt.x_tolerance * 1e-3) break;

    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) centroid[k] += simplex[i][k] / static_cast<double>(N);

    const Point reflected = affine(centroid, simplex[N], -1.0);
    const double fr = f(reflected);
    if (fr < values[0]) {
      const Point expanded = affine(centroid, simplex[N], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[N] = expanded;
        values[N] = fe;
      } else {
        simplex[N] = reflected;
        values[N] = fr;
      }
      continue;
    }
    if (fr < values[N - 1]) {
      simplex[N] = reflected;
      values[N] = fr;
      continue;
    }
    const bool outside = fr < values[N];
    const Point contracted = affine(centroid, outside ? reflected : simplex[N], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : values[N])) {
      simplex[N] = contracted;
      values[N] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= N; ++i) {
      simplex[i] = affine(simplex[0], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= N; ++i)
    if (values[i] < values[best]) best = i;
  return {simplex[best], values[best], it};
}

// Maximizes a unimodal function on [lo, hi].
template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace avn::optimize
