#pragma once

// GHZ-diagonal states and the GHZ distillability criterion.
//
// Basis of n qubits: |Psi^+_k> = prod_i X_i^{k_i} |GHZ_n> for
// k = (k_1, ..., k_{n-1}) over qubits 1..n-1 (qubit 0 carries no flip bit),
// and |Psi^-_k> = Z_0 |Psi^+_k>. The coefficient of label (minus, k) is stored
// at index (minus << (n-1)) | k, where k_1 is the most significant bit of k.

#include <cstdint>
#include <span>
#include <vector>

#include "qrep/quantum_engine.hpp"

namespace qrep {

struct GhzLabel {
  bool minus = false;
  std::uint32_t k = 0;

  friend bool operator==(const GhzLabel&, const GhzLabel&) = default;
};

std::size_t ghz_index(int n_qubits, GhzLabel label);
GhzLabel ghz_label(int n_qubits, std::size_t index);

/// Label reached by applying the Pauli `p` on `qubit` to |Psi_label>.
GhzLabel apply_pauli(int n_qubits, GhzLabel label, int qubit, Pauli p);

Vector ghz_basis_vector(int n_qubits, GhzLabel label);

class GhzDiagonal {
 public:
  static GhzDiagonal perfect(int n_qubits);
  static GhzDiagonal maximally_mixed(int n_qubits);
  /// Coefficients above -1e-12 are accepted (tiny negatives clip to zero);
  /// they must sum to 1 within 1e-10.
  static GhzDiagonal from_coefficients(int n_qubits, std::vector<double> coeffs);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coefficients() const { return coeffs_; }
  double operator[](std::size_t index) const { return coeffs_[index]; }
  double at(GhzLabel label) const { return coeffs_[ghz_index(n_qubits_, label)]; }

  double max_abs_difference(const GhzDiagonal& other) const;

 private:
  GhzDiagonal(int n_qubits, std::vector<double> coeffs)
      : n_qubits_(n_qubits), coeffs_(std::move(coeffs)) {}

  int n_qubits_ = 0;
  std::vector<double> coeffs_;
};

/// Renormalises a non-negative weight vector into a GhzDiagonal.
/// Throws DegenerateStateError when the total weight is zero.
GhzDiagonal normalise_weights(int n_qubits, std::vector<double> weights);

DensityMatrix to_density_matrix(const GhzDiagonal& s);
/// Throws RepresentationError when an off-diagonal GHZ-basis element
/// exceeds `off_diagonal_tol` in magnitude.
GhzDiagonal from_density_matrix(const DensityMatrix& rho,
                                double off_diagonal_tol = 1e-9);

struct StandardForm {
  int n_qubits = 0;
  double lambda0_plus = 0.0;
  double lambda0_minus = 0.0;
  /// lambda_k for k = 1 .. 2^(n-1)-1; entry 0 is unused and kept at zero.
  std::vector<double> lambda_k;
};

StandardForm to_standard_form(const GhzDiagonal& s);

/// lambda0+ - lambda0- > 2 lambda_k for every k != 0.
bool is_distillable(const StandardForm& s);
bool is_distillable(const GhzDiagonal& s);

/// Local depolarising noise with reliability q on one qubit.
GhzDiagonal ldn_coeff_update(const GhzDiagonal& s, double q, int qubit);
/// ldn_coeff_update on every qubit.
GhzDiagonal depolarize_all(const GhzDiagonal& s, double q);

/// Coefficient of |Psi^+_0> = |GHZ_n>.
double fidelity_of(const GhzDiagonal& s);

/// Two-qubit Bell-diagonal state. Equivalent to GhzDiagonal(2) with
/// Phi+ = (+,0), Phi- = (-,0), Psi+ = (+,1), Psi- = (-,1).
struct BellDiagonal {
  double phi_plus = 1.0;
  double phi_minus = 0.0;
  double psi_plus = 0.0;
  double psi_minus = 0.0;

  static BellDiagonal werner(double fidelity);

  double sum() const { return phi_plus + phi_minus + psi_plus + psi_minus; }
  double fidelity() const { return phi_plus; }
  /// Throws InputError on negative entries or a total away from 1.
  void validate() const;
};

GhzDiagonal to_ghz(const BellDiagonal& b);
BellDiagonal to_bell(const GhzDiagonal& s);

/// Largest Bell coefficient above 1/2.
bool bipartite_distillable(const BellDiagonal& b);

}  // namespace qrep
