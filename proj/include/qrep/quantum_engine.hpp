#pragma once

// Dense density-matrix simulation of a few qubits.
//
// Qubits are addressed by 0-based absolute index. The basis ordering is
// big-endian: qubit 0 is the most significant bit of a basis index, so
// |q0 q1 ... q(n-1)>. Every operation is a pure function returning a new
// state; states are immutable once built.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qrep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 12;

/// Result of re-checking the density-matrix invariants.
struct ValidityReport {
  double trace_error = 0.0;        // |tr(rho) - 1|
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;

  bool ok(double trace_tol = 1e-10, double herm_tol = 1e-10,
          double psd_tol = 1e-9) const {
    return trace_error <= trace_tol && hermiticity_error <= herm_tol &&
           min_eigenvalue >= -psd_tol;
  }
};

class DensityMatrix {
 public:
  /// Wraps a 2^n x 2^n matrix. Checks only the shape; use check() for the
  /// physical invariants. n = 0 is allowed and denotes the scalar state [1]
  /// that remains after every qubit has been measured out.
  static DensityMatrix from_matrix(Matrix data);
  static DensityMatrix from_pure(const Vector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  const Matrix& matrix() const { return data_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  double trace() const { return data_.trace().real(); }
  double purity() const;
  ValidityReport check() const;

 private:
  DensityMatrix(int n_qubits, Matrix data)
      : n_qubits_(n_qubits), data_(std::move(data)) {}

  int n_qubits_ = 0;
  Matrix data_;
};

DensityMatrix tensor(const DensityMatrix& lhs, const DensityMatrix& rhs);

enum class Pauli { I, X, Y, Z };

Matrix pauli_matrix(Pauli p);

/// One Pauli operator per qubit, e.g. "XZZ".
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}
  static PauliString parse(std::string_view text);

  std::size_t size() const { return ops_.size(); }
  Pauli operator[](std::size_t i) const { return ops_[i]; }
  const std::vector<Pauli>& ops() const { return ops_; }

 private:
  std::vector<Pauli> ops_;
};

/// tr(rho P). Real because P is Hermitian.
double expectation(const DensityMatrix& rho, const PauliString& ops);

/// Kraus representation of a channel on `arity` qubits.
class KrausChannel {
 public:
  /// Throws ValidationError when the operators are not 2^k x 2^k or
  /// sum K^dagger K deviates from the identity by more than 1e-10.
  explicit KrausChannel(std::vector<Matrix> operators);

  int arity() const { return arity_; }
  const std::vector<Matrix>& operators() const { return operators_; }

 private:
  std::vector<Matrix> operators_;
  int arity_ = 0;
};

namespace gates {
Matrix identity(int n_qubits = 1);
Matrix x();
Matrix y();
Matrix z();
Matrix h();
/// Control is the first target, the second target is flipped.
Matrix cnot();
Matrix cz();
}  // namespace gates

// ---------------------------------------------------------------------------
// State preparation

Vector ghz_vector(int m);
DensityMatrix ghz_state(int m);

using Edge = std::pair<int, int>;

Vector graph_vector(int n, std::span<const Edge> edges);
/// prod_{(a,b) in edges} CZ_ab |+>^n. Duplicate edges are treated as one.
DensityMatrix graph_state(int n, std::span<const Edge> edges);

// ---------------------------------------------------------------------------
// Dynamics

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u,
                            std::span<const int> targets);
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            std::span<const int> targets);

/// Reduced state on `keep`; result qubit i is input qubit keep[i].
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

// ---------------------------------------------------------------------------
// Measurement

enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellLabel, 4> kBellLabels = {
    BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PsiPlus,
    BellLabel::PsiMinus};

std::string_view to_string(BellLabel label);
Vector bell_vector(BellLabel label);
/// Psi outcomes signal odd Z-parity on the measured pair.
constexpr bool is_psi(BellLabel l) {
  return l == BellLabel::PsiPlus || l == BellLabel::PsiMinus;
}
/// Minus outcomes signal odd X-parity on the measured pair.
constexpr bool is_minus(BellLabel l) {
  return l == BellLabel::PhiMinus || l == BellLabel::PsiMinus;
}

struct BellOutcome {
  BellLabel label;
  double probability;
  /// Normalised state of the unmeasured qubits (relative order kept).
  /// Empty when the outcome has probability below kNegligibleProbability.
  std::optional<DensityMatrix> post_state;
};

inline constexpr double kNegligibleProbability = 1e-14;

/// Full outcome ensemble of a Bell measurement on qubits a and b, in the
/// order PhiPlus, PhiMinus, PsiPlus, PsiMinus.
std::vector<BellOutcome> bell_measure(const DensityMatrix& rho, int a, int b);

enum class Basis { X, Y, Z };

struct MeasurementOutcome {
  int bit;  // 0 for the +1 eigenvector, 1 for the -1 eigenvector
  double probability;
  std::optional<DensityMatrix> post_state;
};

/// Projective single-qubit measurement; the measured qubit is removed.
std::vector<MeasurementOutcome> measure_qubit(const DensityMatrix& rho, int qubit,
                                              Basis basis);

/// <phi|_targets rho |phi>_targets, unnormalised, remaining qubits kept in order.
Matrix project_out(const DensityMatrix& rho, std::span<const int> targets,
                   const Vector& phi);

/// <psi|rho|psi>. Throws InputError on dimension mismatch.
double fidelity(const DensityMatrix& rho, const Vector& target);

}  // namespace qrep
