#include "qrep/quantum_engine.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qrep/errors.hpp"

namespace qrep {
namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kCompletenessTol = 1e-10;

std::size_t bit_of(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

int log2_exact(Eigen::Index dim) {
  if (dim <= 0) return -1;
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return (Eigen::Index{1} << n) == dim ? n : -1;
}

void check_targets(int n_qubits, std::span<const int> targets) {
  std::set<int> seen;
  for (int t : targets) {
    if (t < 0 || t >= n_qubits) {
      throw InputError("qubit index " + std::to_string(t) +
                       " out of range for " + std::to_string(n_qubits) +
                       "-qubit state");
    }
    if (!seen.insert(t).second) {
      throw InputError("duplicate target qubit " + std::to_string(t));
    }
  }
}

// offsets[j] is the index contribution of the j-th basis state of the
// target register; targets[0] is the most significant bit of j.
std::vector<std::size_t> register_offsets(int n_qubits,
                                          std::span<const int> targets) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      if (j & (std::size_t{1} << (k - 1 - t))) {
        offsets[j] |= bit_of(n_qubits, targets[t]);
      }
    }
  }
  return offsets;
}

std::vector<int> complement(int n_qubits, std::span<const int> targets) {
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) {
      rest.push_back(q);
    }
  }
  return rest;
}

// op acting on `targets`, multiplied from the left onto every column of m.
Matrix apply_left(const Matrix& m, const Matrix& op, std::span<const int> targets,
                  int n_qubits) {
  const auto offsets = register_offsets(n_qubits, targets);
  std::size_t mask = 0;
  for (int t : targets) mask |= bit_of(n_qubits, t);

  const std::size_t sub = offsets.size();
  const auto dim = static_cast<std::size_t>(m.rows());
  Matrix out(m.rows(), m.cols());
  std::vector<Complex> in_buf(sub);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & mask) continue;
      for (std::size_t j = 0; j < sub; ++j) {
        in_buf[j] = m(static_cast<Eigen::Index>(base | offsets[j]), col);
      }
      for (std::size_t i = 0; i < sub; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < sub; ++j) {
          acc += op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                 in_buf[j];
        }
        out(static_cast<Eigen::Index>(base | offsets[i]), col) = acc;
      }
    }
  }
  return out;
}

// op * m * op^dagger with op acting on `targets`.
Matrix conjugate(const Matrix& m, const Matrix& op, std::span<const int> targets,
                 int n_qubits) {
  Matrix left = apply_left(m, op, targets, n_qubits);
  Matrix both = apply_left(left.adjoint(), op, targets, n_qubits);
  return both.adjoint();
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_matrix(Matrix data) {
  if (data.rows() != data.cols()) {
    throw InputError("density matrix must be square");
  }
  const int n = log2_exact(data.rows());
  if (n < 0) throw InputError("density matrix dimension is not a power of two");
  if (n > kMaxQubits) {
    throw SizeError("at most " + std::to_string(kMaxQubits) +
                    " qubits are supported, got " + std::to_string(n));
  }
  return DensityMatrix(n, std::move(data));
}

DensityMatrix DensityMatrix::from_pure(const Vector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InputError("state vector is not normalised");
  }
  return from_matrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw SizeError("qubit count out of range: " + std::to_string(n_qubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(n_qubits,
                       Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
  return (data_ * data_).trace().real();
}

ValidityReport DensityMatrix::check() const {
  ValidityReport report;
  report.trace_error = std::abs(data_.trace() - Complex{1.0, 0.0});
  report.hermiticity_error = max_abs(data_ - data_.adjoint());
  const Matrix herm = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  return report;
}

DensityMatrix tensor(const DensityMatrix& lhs, const DensityMatrix& rhs) {
  const int n = lhs.n_qubits() + rhs.n_qubits();
  if (n > kMaxQubits) {
    throw SizeError("tensor product exceeds " + std::to_string(kMaxQubits) +
                    " qubits");
  }
  const Matrix& a = lhs.matrix();
  const Matrix& b = rhs.matrix();
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return DensityMatrix::from_matrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Paulis and channels

Matrix pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::I: return gates::identity();
    case Pauli::X: return gates::x();
    case Pauli::Y: return gates::y();
    case Pauli::Z: return gates::z();
  }
  return gates::identity();
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> ops;
  ops.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': ops.push_back(Pauli::I); break;
      case 'X': ops.push_back(Pauli::X); break;
      case 'Y': ops.push_back(Pauli::Y); break;
      case 'Z': ops.push_back(Pauli::Z); break;
      default:
        throw InputError(std::string("invalid Pauli symbol '") + c + "'");
    }
  }
  return PauliString(std::move(ops));
}

double expectation(const DensityMatrix& rho, const PauliString& ops) {
  if (static_cast<int>(ops.size()) != rho.n_qubits()) {
    throw InputError("Pauli string length does not match the qubit count");
  }
  Matrix m = rho.matrix();
  for (std::size_t q = 0; q < ops.size(); ++q) {
    if (ops[q] == Pauli::I) continue;
    const int target[] = {static_cast<int>(q)};
    m = apply_left(m, pauli_matrix(ops[q]), target, rho.n_qubits());
  }
  return m.trace().real();
}

KrausChannel::KrausChannel(std::vector<Matrix> operators)
    : operators_(std::move(operators)) {
  if (operators_.empty()) throw ValidationError("Kraus channel has no operators");
  const Eigen::Index dim = operators_.front().rows();
  arity_ = log2_exact(dim);
  if (arity_ < 1) throw ValidationError("Kraus operator dimension must be 2^k");
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& k : operators_) {
    if (k.rows() != dim || k.cols() != dim) {
      throw ValidationError("Kraus operators must share one square shape");
    }
    sum += k.adjoint() * k;
  }
  const double err = max_abs(sum - Matrix::Identity(dim, dim));
  if (err > kCompletenessTol) {
    throw ValidationError("Kraus operators are not complete (deviation " +
                          std::to_string(err) + ")");
  }
}

namespace gates {

Matrix identity(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return Matrix::Identity(dim, dim);
}

Matrix x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix h() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

}  // namespace gates

// ---------------------------------------------------------------------------
// States

Vector ghz_vector(int m) {
  if (m < 1 || m > kMaxQubits) {
    throw SizeError("GHZ size must be in [1, " + std::to_string(kMaxQubits) +
                    "], got " + std::to_string(m));
  }
  Vector v = Vector::Zero(Eigen::Index{1} << m);
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

DensityMatrix ghz_state(int m) { return DensityMatrix::from_pure(ghz_vector(m)); }

Vector graph_vector(int n, std::span<const Edge> edges) {
  if (n < 1 || n > kMaxQubits) {
    throw SizeError("graph size must be in [1, " + std::to_string(kMaxQubits) +
                    "], got " + std::to_string(n));
  }
  std::set<Edge> unique;
  for (auto [a, b] : edges) {
    if (a == b) throw InputError("self-loop on vertex " + std::to_string(a));
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") references a vertex outside [0, " +
                       std::to_string(n) + ")");
    }
    unique.insert({std::min(a, b), std::max(a, b)});
  }
  const std::size_t dim = std::size_t{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    int sign = 1;
    for (auto [a, b] : unique) {
      if ((s & bit_of(n, a)) && (s & bit_of(n, b))) sign = -sign;
    }
    v(static_cast<Eigen::Index>(s)) = sign * amp;
  }
  return v;
}

DensityMatrix graph_state(int n, std::span<const Edge> edges) {
  return DensityMatrix::from_pure(graph_vector(n, edges));
}

// ---------------------------------------------------------------------------
// Dynamics

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                            std::span<const int> targets) {
  check_targets(rho.n_qubits(), targets);
  const Eigen::Index sub = Eigen::Index{1} << targets.size();
  if (u.rows() != sub || u.cols() != sub) {
    throw ValidationError("unitary dimension does not match the target count");
  }
  if (max_abs(u.adjoint() * u - Matrix::Identity(sub, sub)) > kUnitaryTol) {
    throw ValidationError("operator is not unitary");
  }
  return DensityMatrix::from_matrix(
      conjugate(rho.matrix(), u, targets, rho.n_qubits()));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            std::span<const int> targets) {
  check_targets(rho.n_qubits(), targets);
  if (static_cast<int>(targets.size()) != ch.arity()) {
    throw InputError("channel arity does not match the target count");
  }
  Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : ch.operators()) {
    out += conjugate(rho.matrix(), k, targets, rho.n_qubits());
  }
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw InputError("partial trace needs at least one kept qubit");
  check_targets(rho.n_qubits(), keep);
  const int n = rho.n_qubits();
  const auto traced = complement(n, keep);
  const auto keep_off = register_offsets(n, keep);
  const auto trace_off = register_offsets(n, traced);
  const auto dim = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off) {
        acc += rho(keep_off[static_cast<std::size_t>(r)] | t,
                   keep_off[static_cast<std::size_t>(c)] | t);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix::from_matrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Measurement

std::string_view to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
    case BellLabel::PsiPlus: return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
  }
  return "?";
}

Vector bell_vector(BellLabel label) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector v = Vector::Zero(4);
  switch (label) {
    case BellLabel::PhiPlus: v(0) = s; v(3) = s; break;
    case BellLabel::PhiMinus: v(0) = s; v(3) = -s; break;
    case BellLabel::PsiPlus: v(1) = s; v(2) = s; break;
    case BellLabel::PsiMinus: v(1) = s; v(2) = -s; break;
  }
  return v;
}

Matrix project_out(const DensityMatrix& rho, std::span<const int> targets,
                   const Vector& phi) {
  check_targets(rho.n_qubits(), targets);
  const auto target_off = register_offsets(rho.n_qubits(), targets);
  if (phi.size() != static_cast<Eigen::Index>(target_off.size())) {
    throw InputError("projection vector does not match the target count");
  }
  const auto rest = complement(rho.n_qubits(), targets);
  const auto rest_off = register_offsets(rho.n_qubits(), rest);
  const auto dim = static_cast<Eigen::Index>(rest_off.size());

  // Non-zero support of phi, to skip structural zeros (e.g. Bell vectors).
  std::vector<std::pair<std::size_t, Complex>> support;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (std::abs(phi(i)) > 0.0) {
      support.emplace_back(target_off[static_cast<std::size_t>(i)], phi(i));
    }
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Complex acc = 0.0;
      for (const auto& [oi, ai] : support) {
        for (const auto& [oj, aj] : support) {
          acc += std::conj(ai) * aj *
                 rho(rest_off[static_cast<std::size_t>(r)] | oi,
                     rest_off[static_cast<std::size_t>(c)] | oj);
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

namespace {

std::optional<DensityMatrix> normalised(Matrix m, double probability) {
  if (probability < kNegligibleProbability) return std::nullopt;
  return DensityMatrix::from_matrix(m / probability);
}

}  // namespace

std::vector<BellOutcome> bell_measure(const DensityMatrix& rho, int a, int b) {
  if (a == b) throw InputError("Bell measurement needs two distinct qubits");
  const int targets[] = {a, b};
  std::vector<BellOutcome> outcomes;
  outcomes.reserve(4);
  for (BellLabel label : kBellLabels) {
    Matrix reduced = project_out(rho, targets, bell_vector(label));
    const double prob = std::max(0.0, reduced.trace().real());
    outcomes.push_back({label, prob, normalised(std::move(reduced), prob)});
  }
  return outcomes;
}

std::vector<MeasurementOutcome> measure_qubit(const DensityMatrix& rho, int qubit,
                                              Basis basis) {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Vector, 2> eig = {Vector::Zero(2), Vector::Zero(2)};
  switch (basis) {
    case Basis::Z:
      eig[0](0) = 1;
      eig[1](1) = 1;
      break;
    case Basis::X:
      eig[0] << s, s;
      eig[1] << s, -s;
      break;
    case Basis::Y:
      eig[0] << s, Complex(0, s);
      eig[1] << s, Complex(0, -s);
      break;
  }
  const int targets[] = {qubit};
  std::vector<MeasurementOutcome> outcomes;
  for (int bit = 0; bit < 2; ++bit) {
    Matrix reduced = project_out(rho, targets, eig[static_cast<std::size_t>(bit)]);
    const double prob = std::max(0.0, reduced.trace().real());
    outcomes.push_back({bit, prob, normalised(std::move(reduced), prob)});
  }
  return outcomes;
}

double fidelity(const DensityMatrix& rho, const Vector& target) {
  if (target.size() != rho.matrix().rows()) {
    throw InputError("target state dimension " + std::to_string(target.size()) +
                     " does not match density matrix dimension " +
                     std::to_string(rho.matrix().rows()));
  }
  return (target.adjoint() * rho.matrix() * target)(0, 0).real();
}

}  // namespace qrep
