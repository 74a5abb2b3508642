#include "avn/inequality.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "avn/optimize.hpp"

namespace avn {

namespace {

ComplexMatrix2 conditional_on(const TwoQubitState& rho, const Vector2& alice_ket) {
  const ComplexMatrix4 lifted = tensor(outer(alice_ket, alice_ket), ComplexMatrix2::identity());
  const ComplexMatrix2 c = partial_trace_A(lifted * rho.matrix());
  return 0.5 * (c + c.adjoint());
}

double expectation(const ComplexMatrix2& m, const Vector2& ket) { return braket(ket, Vector2{
    m(0, 0) * ket[0] + m(0, 1) * ket[1], m(1, 0) * ket[0] + m(1, 1) * ket[1]}).real(); }

}  // namespace

AvnInequalityResult avn_inequality(const TwoQubitState& rho, const BlochVector& n, const AvnInequalityOptions& opt) {
  const CanonicalDecomposition d = canonical_decomposition(rho, n, opt.tol);
  const ConditionalPair pair = conditional_pair(rho, n);

  const double w1 = (tensor(direction_projector(n, 0), d.phi1.perp().projector()) * rho.matrix()).trace().real();
  const double w2 = (tensor(direction_projector(n, 1), d.phi2.perp().projector()) * rho.matrix()).trace().real();
  const double c_lhs = max_eigenvalue_hermitian2(0.5 * (pair.unnormalized[0] + pair.unnormalized[1]));

  const EigenSystem2 n_basis = eigensystem_hermitian2(n.dot_sigma());
  const Vector2& plus_n = n_basis.eigenvectors[0];
  const Vector2& minus_n = n_basis.eigenvectors[1];
  auto alice_plus = [&](double chi) {
    const Complex phase = std::polar(1.0, chi);
    const double h = std::sqrt(0.5);
    return Vector2{h * (plus_n[0] + phase * minus_n[0]), h * (plus_n[1] + phase * minus_n[1])};
  };
  auto w3_at = [&](double chi) {
    const ComplexMatrix2 z = conditional_on(rho, alice_plus(chi));
    if (opt.bob_direction) return expectation(z, PureQubit::from_bloch(*opt.bob_direction).amplitudes());
    return max_eigenvalue_hermitian2(z);
  };

  const ComplexMatrix2 z0 = conditional_on(rho, alice_plus(0.0));
  const double w3 = w3_at(0.0);
  const BlochVector optimal_nb =
      opt.bob_direction ? *opt.bob_direction : bloch_of(eigensystem_hermitian2(z0).eigenvectors[0]);

  const int samples = std::max(opt.phase_samples, 8);
  const double step = 2.0 * std::numbers::pi / samples;
  double best_phase = 0.0;
  double w3_max = w3;
  for (int k = 1; k < samples; ++k) {
    const double v = w3_at(k * step);
    if (v > w3_max) {
      w3_max = v;
      best_phase = k * step;
    }
  }
  const auto [refined_phase, refined_value] =
      optimize::golden_section_max(w3_at, best_phase - step, best_phase + step, 1e-10);
  if (refined_value > w3_max) {
    w3_max = refined_value;
    best_phase = std::remainder(refined_phase, 2.0 * std::numbers::pi);
    if (best_phase < 0.0) best_phase += 2.0 * std::numbers::pi;
  }

  AvnInequalityResult r{n, w1, w2, w3, c_lhs, false, std::nullopt, optimal_nb, w3_max, best_phase, std::nullopt};
  r.constraint_satisfied = std::abs(w1) <= opt.constraint_tol && std::abs(w2) <= opt.constraint_tol;
  if (r.constraint_satisfied) {
    r.violation = w3 - c_lhs;
    r.violation_phase_max = w3_max - c_lhs;
  }
  return r;
}

// ---------------------------------------------------------------------------

CorrelationMatrix correlation_matrix(const TwoQubitState& rho) {
  CorrelationMatrix t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t[i][j] = (tensor(pauli::axis(i), pauli::axis(j)) * rho.matrix()).trace().real();
  return t;
}

double linear_inequality_bound(std::span<const BlochVector> directions, kernels::Exec exec) {
  if (directions.empty()) throw Error(ErrorKind::InvalidArgument, "linear inequality needs at least one direction");
  if (directions.size() > kMaxLinearSettings) {
    std::ostringstream os;
    os << "brute-force bound supports at most " << kMaxLinearSettings << " settings, got " << directions.size();
    throw Error(ErrorKind::BudgetExceeded, os.str(), static_cast<double>(directions.size()));
  }
  const double best = exec == kernels::Exec::Serial ? kernels::max_signed_resultant_serial(directions)
                                                    : kernels::max_signed_resultant_omp(directions);
  return best / static_cast<double>(directions.size());
}

LinearInequalityResult linear_inequality_value(const TwoQubitState& rho, std::span<const BlochVector> directions,
                                               SteeringParty party, kernels::Exec exec) {
  const double c_n = linear_inequality_bound(directions, exec);
  const CorrelationMatrix t = correlation_matrix(rho);
  double sum = 0.0;
  for (const auto& u : directions) {
    const auto v = u.xyz();
    std::array<double, 3> image{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) image[i] += (party == SteeringParty::AliceToBob ? t[i][j] : t[j][i]) * v[j];
    sum += std::sqrt(image[0] * image[0] + image[1] * image[1] + image[2] * image[2]);
  }
  const double q = sum / static_cast<double>(directions.size());
  return {directions.size(), {directions.begin(), directions.end()}, party, q, c_n, q - c_n};
}

std::vector<BlochVector> default_direction_set() {
  const double g = std::numbers::phi;
  const double ig = 1.0 / g;
  const std::array<std::array<double, 3>, 10> raw{{{1, 1, 1},
                                                   {1, 1, -1},
                                                   {1, -1, 1},
                                                   {1, -1, -1},
                                                   {0, ig, g},
                                                   {0, ig, -g},
                                                   {ig, g, 0},
                                                   {ig, -g, 0},
                                                   {g, 0, ig},
                                                   {g, 0, -ig}}};
  std::vector<BlochVector> out;
  for (const auto& v : raw) out.push_back(BlochVector::normalized(v[0], v[1], v[2]));
  return out;
}

std::vector<BlochVector> validate_direction_set(std::span<const std::array<double, 3>> raw, double unit_tol) {
  if (raw.empty()) throw Error(ErrorKind::InvalidArgument, "direction set is empty");
  std::vector<BlochVector> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    try {
      out.push_back(BlochVector::checked(raw[i][0], raw[i][1], raw[i][2], unit_tol));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "direction " << i << ": " << e.what();
      throw Error(e.kind(), os.str(), e.measured());
    }
    for (std::size_t j = 0; j + 1 < out.size(); ++j) {
      const double overlap = std::abs(out[j].dot(out.back()));
      if (overlap > 1.0 - 1e-9) {
        std::ostringstream os;
        os << "directions " << j << " and " << i << " coincide up to sign";
        throw Error(ErrorKind::DuplicateDirection, os.str(), overlap);
      }
    }
  }
  return out;
}

}  // namespace avn
