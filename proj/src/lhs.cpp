#include "avn/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "avn/steering.hpp"

namespace avn {

const char* to_string(SteeringParty party) {
  return party == SteeringParty::AliceToBob ? "A-to-B" : "B-to-A";
}

const char* to_string(LhsMethod method) {
  switch (method) {
    case LhsMethod::PureShortcut:
      return "pure_shortcut";
    case LhsMethod::Ellipsoid:
      return "ellipsoid";
    case LhsMethod::Dykstra:
      break;
  }
  return "dykstra";
}

Assemblage make_assemblage(const std::array<BlochVector, 2>& settings,
                           const std::array<std::array<ComplexMatrix2, 2>, 2>& conditionals, double tol) {
  Assemblage out{settings, conditionals};
  for (int j = 0; j < 2; ++j) {
    for (int a = 0; a < 2; ++a) {
      const ComplexMatrix2& c = conditionals[j][a];
      if (!c.all_finite()) throw Error(ErrorKind::NotFinite, "assemblage member has NaN or Inf entries");
      const double herm = c.hermiticity_residual();
      if (herm > tol) throw Error(ErrorKind::NotHermitian, "assemblage member is not Hermitian", herm);
      const double min_eig = eigensystem_hermitian2(c, tol).eigenvalues[1];
      if (min_eig < -tol) throw Error(ErrorKind::NotPositive, "assemblage member is not PSD", min_eig);
    }
    const double tr = out.reduced(j).trace().real();
    if (std::abs(tr - 1.0) > tol)
      throw Error(ErrorKind::TraceNotOne, "assemblage setting does not sum to unit trace", tr - 1.0);
  }
  const double mismatch = distance(out.reduced(0), out.reduced(1));
  if (mismatch > tol)
    throw Error(ErrorKind::InconsistentAssemblage, "settings disagree on the reduced state", mismatch);
  return out;
}

Assemblage assemblage_from_state(const TwoQubitState& rho, const BlochVector& n1, const BlochVector& n2,
                                 SteeringParty party) {
  const double overlap = std::abs(n1.dot(n2));
  if (overlap > 1.0 - 1e-9)
    throw Error(ErrorKind::DegenerateSettings, "the two settings coincide up to sign", overlap);
  const TwoQubitState source = party == SteeringParty::AliceToBob ? rho : rho.swapped();
  const ConditionalPair first = conditional_pair(source, n1);
  const ConditionalPair second = conditional_pair(source, n2);
  return make_assemblage({n1, n2}, {first.unnormalized, second.unnormalized});
}

double marginal_residual(const LHSModel& model, const Assemblage& asm_) {
  const auto& s = model.components;
  double r = 0.0;
  for (int a = 0; a < 2; ++a) r += distance(s[a][0] + s[a][1], asm_.conditionals[0][a]);
  for (int b = 0; b < 2; ++b) r += distance(s[0][b] + s[1][b], asm_.conditionals[1][b]);
  return r;
}

double min_component_eigenvalue(const LHSModel& model) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : model.components)
    for (const auto& c : row) m = std::min(m, eigensystem_hermitian2(c, 1e-8).eigenvalues[1]);
  return m;
}

// ---------------------------------------------------------------------------
// Pure-conditional reduction

namespace {

struct NonnegativeFit {
  double a;
  double b;
  double residual;
};

// Best a P1 + b P2 (a, b >= 0) to t in Frobenius norm, for rank-one projectors.
NonnegativeFit fit_two_projectors(const ComplexMatrix2& t, const ComplexMatrix2& p1, const ComplexMatrix2& p2) {
  const double f = inner(p1, p2).real();
  const double b1 = inner(p1, t).real();
  const double b2 = inner(p2, t).real();
  auto make = [&](double a, double b) { return NonnegativeFit{a, b, distance(t, a * p1 + b * p2)}; };

  NonnegativeFit best = make(0.0, 0.0);
  for (const auto cand : {make(std::max(0.0, b1), 0.0), make(0.0, std::max(0.0, b2))})
    if (cand.residual < best.residual) best = cand;
  const double det = 1.0 - f * f;
  if (det > 1e-14) {
    const double a = (b1 - f * b2) / det;
    const double b = (b2 - f * b1) / det;
    if (a >= 0.0 && b >= 0.0) {
      const auto cand = make(a, b);
      if (cand.residual < best.residual) best = cand;
    }
  }
  return best;
}

bool setting_is_pure(const Assemblage& asm_, int j, double purity_tol) {
  for (int a = 0; a < 2; ++a) {
    const ComplexMatrix2& c = asm_.conditionals[j][a];
    const double mu = c.trace().real();
    if (mu < 1e-12) return false;
    if (1.0 - purity(c) / (mu * mu) > purity_tol) return false;
  }
  return true;
}

}  // namespace

std::optional<FeasibilityResult> lhs_feasible_pure(const Assemblage& asm_, const LhsOptions& opt) {
  int pure = -1;
  for (int j = 0; j < 2 && pure < 0; ++j)
    if (setting_is_pure(asm_, j, opt.shortcut_purity_tol)) pure = j;
  if (pure < 0) return std::nullopt;
  const int other = 1 - pure;

  std::array<ComplexMatrix2, 2> proj;
  for (int a = 0; a < 2; ++a)
    proj[a] = outer(eigensystem_hermitian2(asm_.conditionals[pure][a], 1e-8).eigenvectors[0],
                    eigensystem_hermitian2(asm_.conditionals[pure][a], 1e-8).eigenvectors[0]);

  LHSModel model;
  const double overlap = (proj[0] * proj[1]).trace().real();
  if (overlap >= 1.0 - 1e-9) {
    // One pure state for both outcomes: every hidden state is that state,
    // and the product of the two outcome distributions is a valid response.
    const ComplexMatrix2 p = proj[0];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double w = asm_.conditionals[pure][a].trace().real() * asm_.conditionals[other][b].trace().real();
        if (pure == 0)
          model.components[a][b] = w * p;
        else
          model.components[b][a] = w * p;
      }
  }
  for (int b = 0; b < 2 && overlap < 1.0 - 1e-9; ++b) {
    const NonnegativeFit fit = fit_two_projectors(asm_.conditionals[other][b], proj[0], proj[1]);
    // outcome a of the pure setting, outcome b of the other
    const ComplexMatrix2 s0 = fit.a * proj[0];
    const ComplexMatrix2 s1 = fit.b * proj[1];
    if (pure == 0) {
      model.components[0][b] = s0;
      model.components[1][b] = s1;
    } else {
      model.components[b][0] = s0;
      model.components[b][1] = s1;
    }
  }

  FeasibilityResult result;
  result.method = LhsMethod::PureShortcut;
  result.residual = marginal_residual(model, asm_);
  result.feasible = result.residual <= opt.feas_tol;
  if (result.feasible) result.model = model;
  return result;
}

// ---------------------------------------------------------------------------
// Dykstra alternating projections

namespace {

using Block = std::array<std::array<ComplexMatrix2, 2>, 2>;

ComplexMatrix2 project_psd(const ComplexMatrix2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), std::abs(b));
  const double hi = mean + r;
  const double lo = mean - r;
  const ComplexMatrix2 herm{Complex{a, 0.0}, b, std::conj(b), Complex{d, 0.0}};
  if (lo >= 0.0) return herm;
  if (hi <= 0.0) return ComplexMatrix2{};
  // hi * (top eigenprojector) = hi (H - lo I) / (hi - lo)
  return (herm - lo * ComplexMatrix2::identity()) * (hi / (hi - lo));
}

Block project_affine(const Block& s, const Assemblage& asm_) {
  std::array<ComplexMatrix2, 2> row;
  std::array<ComplexMatrix2, 2> col;
  for (int a = 0; a < 2; ++a) row[a] = asm_.conditionals[0][a] - (s[a][0] + s[a][1]);
  for (int b = 0; b < 2; ++b) col[b] = asm_.conditionals[1][b] - (s[0][b] + s[1][b]);
  const ComplexMatrix2 total = 0.5 * (row[0] + row[1] + col[0] + col[1]);
  Block out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out[a][b] = s[a][b] + 0.5 * (row[a] - 0.25 * total) + 0.5 * (col[b] - 0.25 * total);
  return out;
}

}  // namespace

FeasibilityResult lhs_feasible_dykstra(const Assemblage& asm_, const LhsOptions& opt) {
  const ComplexMatrix2 start = 0.125 * (asm_.reduced(0) + asm_.reduced(1));
  Block x;
  Block p{};
  Block q{};
  for (auto& row : x) row.fill(start);

  FeasibilityResult result;
  result.method = LhsMethod::Dykstra;
  double best = std::numeric_limits<double>::infinity();
  Block best_block = x;
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(std::min(opt.max_iterations, 200000)));

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    Block shifted;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) shifted[a][b] = x[a][b] + p[a][b];
    const Block y = project_affine(shifted, asm_);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        p[a][b] = shifted[a][b] - y[a][b];
        const ComplexMatrix2 z = y[a][b] + q[a][b];
        x[a][b] = project_psd(z);
        q[a][b] = z - x[a][b];
      }

    const double r = marginal_residual(LHSModel{x}, asm_);
    if (r < best) {
      best = r;
      best_block = x;
    }
    history.push_back(best);
    if (best <= opt.feas_tol) {
      ++it;
      break;
    }
    const auto k = static_cast<std::size_t>(it);
    const auto window = static_cast<std::size_t>(opt.plateau_window);
    if (k >= window) {
      const double before = history[k - window];
      if (before - best < opt.plateau_relative * before && best > 10.0 * opt.feas_tol) {
        result.plateaued = true;
        ++it;
        break;
      }
    }
  }

  result.iterations = it;
  result.residual = best;
  result.feasible = best <= opt.feas_tol;
  if (result.feasible) result.model = LHSModel{best_block};
  return result;
}

namespace {

ComplexMatrix2 hermitian_of(const std::array<double, 4>& x) {
  return ComplexMatrix2{Complex{x[0], 0.0}, Complex{x[2], x[3]}, Complex{x[2], -x[3]}, Complex{x[1], 0.0}};
}

LHSModel model_of(const Assemblage& asm_, const ComplexMatrix2& x) {
  const auto& c = asm_.conditionals;
  return LHSModel{{{{x, c[0][0] - x}, {c[1][0] - x, c[0][1] - c[1][0] + x}}}};
}

}  // namespace

FeasibilityResult lhs_feasible_ellipsoid(const Assemblage& asm_, const LhsOptions& opt) {
  constexpr int n = 4;
  // sign of X in each component, in the order of model_of
  constexpr std::array<std::array<double, 2>, 2> sign{{{1.0, -1.0}, {-1.0, 1.0}}};

  std::array<double, n> center{};
  const ComplexMatrix2 start = 0.25 * asm_.reduced(0);
  center = {start(0, 0).real(), start(1, 1).real(), start(0, 1).real(), start(0, 1).imag()};
  // every component is PSD with trace <= 1, so |x_i| <= 1 around any valid X
  std::array<std::array<double, n>, n> shape{};
  for (int i = 0; i < n; ++i) shape[i][i] = 4.0;

  FeasibilityResult result;
  result.method = LhsMethod::Ellipsoid;
  result.residual = std::numeric_limits<double>::infinity();
  double best = -std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < opt.ellipsoid_iterations; ++it) {
    const LHSModel m = model_of(asm_, hermitian_of(center));
    double value = std::numeric_limits<double>::infinity();
    std::array<double, n> grad{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const EigenSystem2 es = eigensystem_hermitian2(m.components[a][b], 1e-8);
        if (es.eigenvalues[1] >= value) continue;
        value = es.eigenvalues[1];
        const Vector2& v = es.eigenvectors[1];
        const Complex cross = std::conj(v[0]) * v[1];
        const double s = sign[a][b];
        grad = {s * std::norm(v[0]), s * std::norm(v[1]), 2.0 * s * cross.real(), -2.0 * s * cross.imag()};
      }
    best = std::max(best, value);
    if (value >= 0.0) {
      result.feasible = true;
      result.model = m;
      result.residual = marginal_residual(m, asm_);
      ++it;
      break;
    }

    std::array<double, n> pg{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pg[i] += shape[i][j] * grad[j];
    double width2 = 0.0;
    for (int i = 0; i < n; ++i) width2 += grad[i] * pg[i];
    // value + sqrt(g^T P g) bounds the optimum from above
    if (!(width2 > 0.0) || value + std::sqrt(width2) < 0.0) {
      ++it;
      break;
    }
    const double width = std::sqrt(width2);
    for (int i = 0; i < n; ++i) pg[i] /= width;
    for (int i = 0; i < n; ++i) center[i] += pg[i] / (n + 1);
    const double scale = double(n * n) / (n * n - 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = scale * (shape[i][j] - 2.0 / (n + 1) * pg[i] * pg[j]);
        shape[i][j] = shape[j][i] = v;
      }
  }

  result.iterations = it;
  result.margin = best;
  if (result.feasible) result.feasible = result.residual <= opt.feas_tol;
  if (!result.feasible) result.model.reset();
  return result;
}

FeasibilityResult lhs_feasible(const Assemblage& asm_, const LhsOptions& opt) {
  if (opt.pure_shortcut)
    if (auto r = lhs_feasible_pure(asm_, opt)) return *r;
  if (opt.ellipsoid) {
    FeasibilityResult r = lhs_feasible_ellipsoid(asm_, opt);
    if (r.feasible) return r;
  }
  return lhs_feasible_dykstra(asm_, opt);
}

// ---------------------------------------------------------------------------
// Asymmetric scan

std::vector<SettingPair> sample_setting_pairs(std::size_t count, std::uint64_t seed, bool lead_with_xz) {
  std::vector<SettingPair> pairs;
  pairs.reserve(count);
  if (lead_with_xz && count > 0) pairs.push_back({BlochVector::x_axis(), BlochVector::z_axis()});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    for (;;) {
      const double x = gauss(rng), y = gauss(rng), z = gauss(rng);
      if (x * x + y * y + z * z > 1e-12) return BlochVector::normalized(x, y, z);
    }
  };
  while (pairs.size() < count) {
    const BlochVector n1 = draw();
    const BlochVector n2 = draw();
    if (std::abs(n1.dot(n2)) <= 1.0 - 1e-6) pairs.push_back({n1, n2});
  }
  return pairs;
}

AsymmetricReport asymmetric_steering_scan(const TwoQubitState& rho, std::span<const SettingPair> pairs,
                                          const LhsOptions& opt, kernels::Exec exec) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "asymmetric scan needs at least one setting pair");
  AsymmetricReport report;
  report.entries = kernels::map<AsymmetricEntry>(exec, pairs.size(), [&](std::size_t i) {
    const SettingPair& sp = pairs[i];
    return AsymmetricEntry{
        sp, lhs_feasible(assemblage_from_state(rho, sp.n1, sp.n2, SteeringParty::AliceToBob), opt),
        lhs_feasible(assemblage_from_state(rho, sp.n1, sp.n2, SteeringParty::BobToAlice), opt)};
  });
  for (const auto& e : report.entries) {
    report.a_to_b_steering_found |= !e.a_to_b.feasible;
    report.b_to_a_steering_found |= !e.b_to_a.feasible;
    report.max_residual_a_to_b = std::max(report.max_residual_a_to_b, e.a_to_b.residual);
    report.max_residual_b_to_a = std::max(report.max_residual_b_to_a, e.b_to_a.residual);
  }
  return report;
}

}  // namespace avn
