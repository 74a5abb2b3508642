#include "avn/state.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace avn {

namespace {

std::string residual_message(const char* what, double residual) {
  std::ostringstream os;
  os.precision(3);
  os << what << " (residual " << residual << ")";
  return os.str();
}

void check_unit_interval(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must lie in [0, 1]", v);
}

ComplexMatrix4 pure_projector(const std::array<Complex, 4>& psi) {
  ComplexMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

}  // namespace

TwoQubitState make_state(const ComplexMatrix4& matrix, double tol) {
  if (!matrix.all_finite()) throw Error(ErrorKind::NotFinite, "density matrix has NaN or Inf entries");
  const double herm = matrix.hermiticity_residual();
  if (herm > tol) throw Error(ErrorKind::NotHermitian, residual_message("density matrix is not Hermitian", herm), herm);
  const Complex tr = matrix.trace();
  const double trace_dev = std::abs(tr - Complex{1.0, 0.0});
  if (trace_dev > tol)
    throw Error(ErrorKind::TraceNotOne, residual_message("density matrix trace differs from 1", trace_dev), trace_dev);
  const double min_eig = eigensystem_hermitian4(matrix, tol).eigenvalues[3];
  if (min_eig < -tol)
    throw Error(ErrorKind::NotPositive, residual_message("density matrix has a negative eigenvalue", min_eig),
                min_eig);
  return TwoQubitState(matrix);
}

TwoQubitState TwoQubitState::with_alice_unitary(const ComplexMatrix2& u) const {
  const ComplexMatrix4 big = tensor(u, ComplexMatrix2::identity());
  ComplexMatrix4 out = big * matrix_ * big.adjoint();
  out = 0.5 * (out + out.adjoint());
  return make_state(out);
}

QubitState QubitState::make(const ComplexMatrix2& m, double tol) {
  if (!m.all_finite()) throw Error(ErrorKind::NotFinite, "qubit density matrix has NaN or Inf entries");
  const double herm = m.hermiticity_residual();
  if (herm > tol) throw Error(ErrorKind::NotHermitian, residual_message("qubit state is not Hermitian", herm), herm);
  const double trace_dev = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_dev > tol)
    throw Error(ErrorKind::TraceNotOne, residual_message("qubit state trace differs from 1", trace_dev), trace_dev);
  const double min_eig = eigensystem_hermitian2(m, tol).eigenvalues[1];
  if (min_eig < -tol)
    throw Error(ErrorKind::NotPositive, residual_message("qubit state has a negative eigenvalue", min_eig), min_eig);
  return QubitState(m);
}

PureQubit PureQubit::from_amplitudes(Complex a0, Complex a1) { return PureQubit(canonical_phase(Vector2{a0, a1})); }

PureQubit PureQubit::from_bloch(const BlochVector& n) {
  const double t = n.polar();
  const double p = n.azimuth();
  return from_amplitudes(std::cos(0.5 * t), std::polar(std::sin(0.5 * t), p));
}

PureQubit PureQubit::perp() const {
  return from_amplitudes(-std::conj(amplitudes_[1]), std::conj(amplitudes_[0]));
}

// ---------------------------------------------------------------------------
// Families

TwoQubitState family_test_state(double V, double theta) {
  check_unit_interval(V, "V");
  if (!std::isfinite(theta) || theta < 0.0 || theta > 0.5 * std::numbers::pi)
    throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, pi/2]", theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const ComplexMatrix4 psi = pure_projector({c, 0.0, 0.0, s});
  const ComplexMatrix4 phi = pure_projector({0.0, s, c, 0.0});
  return make_state(V * psi + (1.0 - V) * phi);
}

TwoQubitState family_color_noise(double V, double theta) {
  check_unit_interval(V, "V");
  if (!std::isfinite(theta)) throw Error(ErrorKind::InvalidArgument, "theta must be finite", theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const ComplexMatrix4 psi = pure_projector({c, 0.0, 0.0, s});
  const ComplexMatrix4 noise = ComplexMatrix4::diagonal({0.5, 0.0, 0.0, 0.5});
  return make_state(V * psi + (1.0 - V) * noise);
}

TwoQubitState maximally_mixed() { return make_state(0.25 * ComplexMatrix4::identity()); }

TwoQubitState bell_phi_plus() {
  const double h = std::sqrt(0.5);
  return make_state(pure_projector({h, 0.0, 0.0, h}));
}

TwoQubitState product_state(const PureQubit& alice, const PureQubit& bob) {
  return make_state(tensor(alice.projector(), bob.projector()));
}

TwoQubitState mix(const TwoQubitState& rho, const TwoQubitState& other, double p) {
  check_unit_interval(p, "mixing weight");
  return make_state(p * rho.matrix() + (1.0 - p) * other.matrix());
}

TwoQubitState random_state(std::uint64_t seed, int rank) {
  if (rank < 1 || rank > 4) throw Error(ErrorKind::InvalidArgument, "rank must be between 1 and 4", rank);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<std::array<Complex, 4>, 4> g{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < rank; ++k) g[i][k] = Complex{gauss(rng), gauss(rng)};

  ComplexMatrix4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Complex s{};
      for (int k = 0; k < rank; ++k) s += g[i][k] * std::conj(g[j][k]);
      m(i, j) = s;
    }
  m = 0.5 * (m + m.adjoint());
  return make_state(m * (1.0 / m.trace().real()));
}

double ppt_min_eigenvalue(const TwoQubitState& rho) {
  return min_eigenvalue_hermitian4(partial_transpose_B(rho.matrix()));
}

bool is_ppt_separable(const TwoQubitState& rho, double tol) { return ppt_min_eigenvalue(rho) >= -tol; }

}  // namespace avn
