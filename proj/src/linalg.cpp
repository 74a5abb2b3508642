#include "avn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace avn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::ConditionalsNotPure: return "ConditionalsNotPure";
    case ErrorKind::ConditionalsIdentical: return "ConditionalsIdentical";
    case ErrorKind::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorKind::MZero: return "MZero";
    case ErrorKind::DegenerateSettings: return "DegenerateSettings";
    case ErrorKind::InconsistentAssemblage: return "InconsistentAssemblage";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DuplicateDirection: return "DuplicateDirection";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, double measured)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), measured_(measured) {}

Complex make_complex(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::NotFinite, "complex component is NaN or Inf");
  return {re, im};
}

// ---------------------------------------------------------------------------
// BlochVector

BlochVector BlochVector::checked(double x, double y, double z, double tol) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    throw Error(ErrorKind::NotFinite, "direction has a NaN or Inf component");
  const double n = std::sqrt(x * x + y * y + z * z);
  if (std::abs(n - 1.0) > tol) {
    std::ostringstream os;
    os << "direction is not unit (|n| - 1 = " << (n - 1.0) << ")";
    throw Error(ErrorKind::NotUnit, os.str(), n - 1.0);
  }
  return BlochVector(x / n, y / n, z / n);
}

BlochVector BlochVector::normalized(double x, double y, double z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    throw Error(ErrorKind::NotFinite, "direction has a NaN or Inf component");
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n == 0.0) throw Error(ErrorKind::NotUnit, "zero vector has no direction", 0.0);
  return BlochVector(x / n, y / n, z / n);
}

BlochVector BlochVector::spherical(double polar, double azimuth) {
  const double s = std::sin(polar);
  return normalized(s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar));
}

double BlochVector::polar() const { return std::acos(std::clamp(z_, -1.0, 1.0)); }
double BlochVector::azimuth() const { return std::atan2(y_, x_); }

ComplexMatrix2 BlochVector::dot_sigma() const {
  return ComplexMatrix2{Complex{z_, 0.0}, Complex{x_, -y_}, Complex{x_, y_}, Complex{-z_, 0.0}};
}

// ---------------------------------------------------------------------------
// Pauli matrices

namespace pauli {
ComplexMatrix2 identity() { return ComplexMatrix2::identity(); }
ComplexMatrix2 x() { return ComplexMatrix2{0.0, 1.0, 1.0, 0.0}; }
ComplexMatrix2 y() { return ComplexMatrix2{0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}; }
ComplexMatrix2 z() { return ComplexMatrix2{1.0, 0.0, 0.0, -1.0}; }
ComplexMatrix2 axis(int i) {
  switch (i) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw Error(ErrorKind::InvalidArgument, "Pauli axis index must be 0, 1 or 2");
  }
}
}  // namespace pauli

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix4 tensor(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  ComplexMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
  return out;
}

ComplexMatrix2 partial_trace_A(const ComplexMatrix4& m) {
  ComplexMatrix2 out;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l) out(j, l) = m(j, l) + m(2 + j, 2 + l);
  return out;
}

ComplexMatrix2 partial_trace_B(const ComplexMatrix4& m) {
  ComplexMatrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out(i, k) = m(2 * i, 2 * k) + m(2 * i + 1, 2 * k + 1);
  return out;
}

ComplexMatrix4 partial_transpose_B(const ComplexMatrix4& m) {
  ComplexMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = m(2 * i + l, 2 * k + j);
  return out;
}

ComplexMatrix4 swap_parties(const ComplexMatrix4& m) {
  ComplexMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * j + i, 2 * l + k) = m(2 * i + j, 2 * k + l);
  return out;
}

ComplexMatrix2 alice_block(const ComplexMatrix4& m, int i, int k) {
  ComplexMatrix2 out;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l) out(j, l) = m(2 * i + j, 2 * k + l);
  return out;
}

// ---------------------------------------------------------------------------
// Kets

ComplexMatrix2 outer(const Vector2& ket, const Vector2& bra) {
  ComplexMatrix2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

Complex braket(const Vector2& bra, const Vector2& ket) {
  return std::conj(bra[0]) * ket[0] + std::conj(bra[1]) * ket[1];
}

double norm(const Vector2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

Vector2 canonical_phase(Vector2 v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite ket");
  v[0] /= n;
  v[1] /= n;
  for (auto& a : v) {
    if (std::abs(a) > 1e-14) {
      const Complex phase = std::conj(a) / std::abs(a);
      v[0] *= phase;
      v[1] *= phase;
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Eigen-solvers

EigenSystem2 eigensystem_hermitian2(const ComplexMatrix2& h, double hermitian_tol) {
  const double herm = h.hermiticity_residual();
  if (herm > hermitian_tol) throw Error(ErrorKind::NotHermitian, "2x2 eigen-solver needs a Hermitian matrix", herm);

  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double mean = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  const double r = std::hypot(half_gap, std::abs(b));

  EigenSystem2 es;
  es.eigenvalues = {mean + r, mean - r};
  const double scale = std::max({std::abs(a), std::abs(d), std::abs(b), 1e-300});
  if (r <= 1e-15 * scale) {
    // degenerate: canonical basis
    es.eigenvectors = {Vector2{1.0, 0.0}, Vector2{0.0, 1.0}};
    return es;
  }
  // Two algebraically equivalent candidates; the longer one is better conditioned.
  const Vector2 from_row0{b, Complex{r - half_gap, 0.0}};
  const Vector2 from_row1{Complex{r + half_gap, 0.0}, std::conj(b)};
  const Vector2 top = canonical_phase(norm(from_row0) >= norm(from_row1) ? from_row0 : from_row1);
  const Vector2 bottom = canonical_phase(Vector2{-std::conj(top[1]), std::conj(top[0])});
  es.eigenvectors = {top, bottom};
  return es;
}

double max_eigenvalue_hermitian2(const ComplexMatrix2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  return 0.5 * (a + d) + std::hypot(0.5 * (a - d), std::abs(b));
}

EigenSystem4 eigensystem_hermitian4(const ComplexMatrix4& h, double hermitian_tol) {
  const double herm = h.hermiticity_residual();
  if (herm > hermitian_tol) throw Error(ErrorKind::NotHermitian, "4x4 eigen-solver needs a Hermitian matrix", herm);

  ComplexMatrix4 a = 0.5 * (h + h.adjoint());
  ComplexMatrix4 v = ComplexMatrix4::identity();
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  constexpr int kMaxSweeps = 64;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) off += std::norm(a(i, j));
    if (std::sqrt(off) <= 1e-12 * scale) break;

    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double b = std::abs(a(p, q));
        if (b <= 1e-300) continue;
        const Complex u = a(p, q) / b;
        const double alpha = a(p, p).real();
        const double gamma = a(q, q).real();
        const double theta = (gamma - alpha) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(u)) * [[c, s], [-s, c]] embedded at (p, q)
        ComplexMatrix4 j = ComplexMatrix4::identity();
        j(p, p) = c;
        j(p, q) = s;
        j(q, p) = -s * std::conj(u);
        j(q, q) = c * std::conj(u);
        a = j.adjoint() * a * j;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * j;
      }
    }
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return a(l, l).real() > a(r, r).real(); });
  EigenSystem4 es;
  for (int k = 0; k < 4; ++k) {
    es.eigenvalues[k] = a(order[k], order[k]).real();
    for (int i = 0; i < 4; ++i) es.eigenvectors(i, k) = v(i, order[k]);
  }
  return es;
}

double min_eigenvalue_hermitian4(const ComplexMatrix4& h) {
  return eigensystem_hermitian4(h, std::numeric_limits<double>::infinity()).eigenvalues[3];
}

EigenSystem3 eigensystem_symmetric3(const Rotation3& s) {
  Rotation3 a{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a[i][j] = a[j][i] = s[i][j];
  Rotation3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  double scale = 0.0;
  for (const auto& row : a)
    for (double x : row) scale += x * x;
  scale = std::max(std::sqrt(scale), 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::sqrt(2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) <= 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - sn * akq;
          a[k][q] = sn * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - sn * aqk;
          a[q][k] = sn * apk + c * aqk;
        }
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return a[l][l] > a[r][r]; });
  EigenSystem3 es{};
  for (int k = 0; k < 3; ++k) {
    es.eigenvalues[k] = a[order[k]][order[k]];
    for (int i = 0; i < 3; ++i) es.eigenvectors[i][k] = v[i][order[k]];
  }
  return es;
}

// ---------------------------------------------------------------------------
// Directions

ComplexMatrix2 direction_projector(const BlochVector& n, int outcome) {
  if (outcome != 0 && outcome != 1) throw Error(ErrorKind::InvalidArgument, "measurement outcome must be 0 or 1");
  const double sign = outcome == 0 ? 0.5 : -0.5;
  return 0.5 * ComplexMatrix2::identity() + sign * n.dot_sigma();
}

ComplexMatrix2 rotation_to_z(const BlochVector& n) {
  const double nx = n.x();
  const double ny = n.y();
  const double nz = n.z();
  // cos(polar/2), computed without cancellation in the south.
  const double rho = std::hypot(nx, ny);
  const double c = nz >= 0.0 ? std::sqrt(0.5 * (1.0 + nz)) : rho / std::sqrt(2.0 * (1.0 - nz));
  // Antipode: the rotation axis n x z is undefined, use pi about x.
  if (c == 0.0) return pauli::x();
  const Complex off{nx / (2.0 * c), -ny / (2.0 * c)};  // (nx - i ny) / 2c
  return ComplexMatrix2{Complex{c, 0.0}, off, -std::conj(off), Complex{c, 0.0}};
}

Rotation3 so3_of(const ComplexMatrix2& u) {
  Rotation3 r{};
  const ComplexMatrix2 ud = u.adjoint();
  for (int j = 0; j < 3; ++j) {
    const ComplexMatrix2 image = u * pauli::axis(j) * ud;
    for (int i = 0; i < 3; ++i) r[i][j] = 0.5 * (pauli::axis(i) * image).trace().real();
  }
  return r;
}

BlochVector rotate(const Rotation3& r, const BlochVector& n) {
  const auto v = n.xyz();
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
  return BlochVector::normalized(out[0], out[1], out[2]);
}

BlochVector rotate_transposed(const Rotation3& r, const BlochVector& n) {
  const auto v = n.xyz();
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = r[0][i] * v[0] + r[1][i] * v[1] + r[2][i] * v[2];
  return BlochVector::normalized(out[0], out[1], out[2]);
}

BlochVector bloch_of(const Vector2& ket) {
  const ComplexMatrix2 p = outer(ket, ket);
  return BlochVector::normalized((pauli::x() * p).trace().real(), (pauli::y() * p).trace().real(),
                                 (pauli::z() * p).trace().real());
}

}  // namespace avn
