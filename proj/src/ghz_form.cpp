#include "qrep/ghz_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qrep/errors.hpp"

namespace qrep {
namespace {

constexpr double kClipTol = 1e-12;
constexpr double kNormTol = 1e-10;

void check_size(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw SizeError("GHZ-diagonal size must be in [1, " +
                    std::to_string(kMaxQubits) + "], got " +
                    std::to_string(n_qubits));
  }
}

std::uint32_t flip_bit(int n_qubits, int qubit) {
  // qubit i >= 1 owns bit (n-1-i) of k
  return std::uint32_t{1} << (n_qubits - 1 - qubit);
}

std::uint32_t all_flip_bits(int n_qubits) {
  return (std::uint32_t{1} << (n_qubits - 1)) - 1;
}

}  // namespace

std::size_t ghz_index(int n_qubits, GhzLabel label) {
  return (static_cast<std::size_t>(label.minus) << (n_qubits - 1)) | label.k;
}

GhzLabel ghz_label(int n_qubits, std::size_t index) {
  const std::size_t half = std::size_t{1} << (n_qubits - 1);
  return {index >= half, static_cast<std::uint32_t>(index & (half - 1))};
}

GhzLabel apply_pauli(int n_qubits, GhzLabel label, int qubit, Pauli p) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw InputError("qubit " + std::to_string(qubit) + " out of range");
  }
  const bool flips = p == Pauli::X || p == Pauli::Y;
  const bool phases = p == Pauli::Z || p == Pauli::Y;
  if (flips) {
    // X_0 |GHZ> equals X_1...X_{n-1} |GHZ> up to a global phase.
    label.k ^= qubit == 0 ? all_flip_bits(n_qubits) : flip_bit(n_qubits, qubit);
  }
  if (phases) label.minus = !label.minus;
  return label;
}

Vector ghz_basis_vector(int n_qubits, GhzLabel label) {
  check_size(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  // qubit 0 in |0>, the rest follow k; the partner branch is its complement.
  const std::size_t zero_branch = label.k;
  const std::size_t one_branch = (dim - 1) ^ zero_branch;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  const double s = 1.0 / std::sqrt(2.0);
  v(static_cast<Eigen::Index>(zero_branch)) = s;
  v(static_cast<Eigen::Index>(one_branch)) = label.minus ? -s : s;
  return v;
}

// ---------------------------------------------------------------------------

GhzDiagonal GhzDiagonal::perfect(int n_qubits) {
  check_size(n_qubits);
  std::vector<double> c(std::size_t{1} << n_qubits, 0.0);
  c[0] = 1.0;
  return GhzDiagonal(n_qubits, std::move(c));
}

GhzDiagonal GhzDiagonal::maximally_mixed(int n_qubits) {
  check_size(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  return GhzDiagonal(n_qubits,
                     std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

GhzDiagonal GhzDiagonal::from_coefficients(int n_qubits, std::vector<double> coeffs) {
  check_size(n_qubits);
  if (coeffs.size() != (std::size_t{1} << n_qubits)) {
    throw InputError("expected " + std::to_string(std::size_t{1} << n_qubits) +
                     " GHZ coefficients, got " + std::to_string(coeffs.size()));
  }
  for (double& c : coeffs) {
    if (c < -kClipTol) {
      throw InputError("negative GHZ coefficient " + std::to_string(c));
    }
    c = std::max(c, 0.0);
  }
  const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTol) {
    throw InputError("GHZ coefficients sum to " + std::to_string(total));
  }
  return GhzDiagonal(n_qubits, std::move(coeffs));
}

double GhzDiagonal::max_abs_difference(const GhzDiagonal& other) const {
  if (other.n_qubits_ != n_qubits_) {
    throw InputError("comparing GHZ-diagonal states of different sizes");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    d = std::max(d, std::abs(coeffs_[i] - other.coeffs_[i]));
  }
  return d;
}

GhzDiagonal normalise_weights(int n_qubits, std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw DegenerateStateError("zero total weight while normalising GHZ state");
  }
  for (double& w : weights) w = std::max(w / total, 0.0);
  return GhzDiagonal::from_coefficients(n_qubits, std::move(weights));
}

// ---------------------------------------------------------------------------

DensityMatrix to_density_matrix(const GhzDiagonal& s) {
  const int n = s.n_qubits();
  const auto dim = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) continue;
    const Vector v = ghz_basis_vector(n, ghz_label(n, i));
    m += s[i] * (v * v.adjoint());
  }
  return DensityMatrix::from_matrix(std::move(m));
}

GhzDiagonal from_density_matrix(const DensityMatrix& rho, double off_diagonal_tol) {
  const int n = rho.n_qubits();
  check_size(n);
  const std::size_t dim = std::size_t{1} << n;
  const double s = 1.0 / std::sqrt(2.0);

  // Each basis vector has support {k, ~k} with amplitudes s, +-s.
  struct Support {
    std::size_t lo, hi;
    double sign;
  };
  std::vector<Support> basis(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const GhzLabel l = ghz_label(n, i);
    basis[i] = {l.k, (dim - 1) ^ l.k, l.minus ? -1.0 : 1.0};
  }
  auto element = [&](std::size_t a, std::size_t b) {
    const Support& x = basis[a];
    const Support& y = basis[b];
    return s * s *
           (rho(x.lo, y.lo) + y.sign * rho(x.lo, y.hi) + x.sign * rho(x.hi, y.lo) +
            x.sign * y.sign * rho(x.hi, y.hi));
  };

  std::vector<double> diag(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const Complex e = element(a, b);
      if (a == b) {
        diag[a] = e.real();
      } else if (std::abs(e) > off_diagonal_tol) {
        throw RepresentationError(
            "state is not GHZ-diagonal: off-diagonal element of magnitude " +
            std::to_string(std::abs(e)));
      }
    }
  }
  return GhzDiagonal::from_coefficients(n, std::move(diag));
}

StandardForm to_standard_form(const GhzDiagonal& s) {
  const int n = s.n_qubits();
  const std::size_t half = std::size_t{1} << (n - 1);
  StandardForm f;
  f.n_qubits = n;
  f.lambda0_plus = s[0];
  f.lambda0_minus = s[half];
  if (f.lambda0_minus > f.lambda0_plus) std::swap(f.lambda0_plus, f.lambda0_minus);
  f.lambda_k.assign(half, 0.0);
  for (std::size_t k = 1; k < half; ++k) {
    f.lambda_k[k] = 0.5 * (s[k] + s[half | k]);
  }
  return f;
}

bool is_distillable(const StandardForm& s) {
  const double gap = s.lambda0_plus - s.lambda0_minus;
  for (std::size_t k = 1; k < s.lambda_k.size(); ++k) {
    if (!(gap > 2.0 * s.lambda_k[k])) return false;
  }
  return true;
}

bool is_distillable(const GhzDiagonal& s) { return is_distillable(to_standard_form(s)); }

GhzDiagonal ldn_coeff_update(const GhzDiagonal& s, double q, int qubit) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw InputError("LDN reliability must lie in [0,1], got " + std::to_string(q));
  }
  const int n = s.n_qubits();
  if (qubit < 0 || qubit >= n) {
    throw InputError("qubit " + std::to_string(qubit) + " out of range");
  }
  if (q == 1.0) return s;
  const double w = (1.0 - q) / 4.0;
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = s[i];
    if (c == 0.0) continue;
    out[i] += q * c;
    const GhzLabel l = ghz_label(n, i);
    for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
      out[ghz_index(n, apply_pauli(n, l, qubit, p))] += w * c;
    }
  }
  return GhzDiagonal::from_coefficients(n, std::move(out));
}

GhzDiagonal depolarize_all(const GhzDiagonal& s, double q) {
  GhzDiagonal out = s;
  for (int j = 0; j < s.n_qubits(); ++j) out = ldn_coeff_update(out, q, j);
  return out;
}

double fidelity_of(const GhzDiagonal& s) { return s[0]; }

// ---------------------------------------------------------------------------

BellDiagonal BellDiagonal::werner(double fidelity) {
  const double rest = (1.0 - fidelity) / 3.0;
  return {fidelity, rest, rest, rest};
}

void BellDiagonal::validate() const {
  for (double c : {phi_plus, phi_minus, psi_plus, psi_minus}) {
    if (c < -kClipTol) throw InputError("negative Bell coefficient");
  }
  if (std::abs(sum() - 1.0) > kNormTol) {
    throw InputError("Bell coefficients sum to " + std::to_string(sum()));
  }
}

GhzDiagonal to_ghz(const BellDiagonal& b) {
  b.validate();
  return GhzDiagonal::from_coefficients(
      2, {b.phi_plus, b.psi_plus, b.phi_minus, b.psi_minus});
}

BellDiagonal to_bell(const GhzDiagonal& s) {
  if (s.n_qubits() != 2) throw InputError("Bell-diagonal view needs two qubits");
  return {s[0], s[2], s[1], s[3]};
}

bool bipartite_distillable(const BellDiagonal& b) {
  return std::max({b.phi_plus, b.phi_minus, b.psi_plus, b.psi_minus}) > 0.5;
}

}  // namespace qrep
