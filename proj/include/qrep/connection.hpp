#pragma once

// Connecting GHZ states into longer-distance GHZ states.
//
// Three-state connection layout (0-based; the figure numbering 1..9 minus one):
//
//   state A = qubits {0,1,2}, state B = {3,4,5}, state C = {6,7,8}
//   Bell I on (1,5), Bell II on (2,7), Bell III on (4,8)
//   remaining qubits {0,3,6} form the output, in that order.
//
// In the GHZ-diagonal representation qubit 0 of every input is its sign
// carrier, so each input contributes its own first qubit to the output.

#include <array>
#include <cstdint>
#include <vector>

#include "qrep/ghz_form.hpp"
#include "qrep/quantum_engine.hpp"

namespace qrep {

enum class ConnectMode { kDeterministic, kProbabilistic };

std::string_view to_string(ConnectMode mode);

struct ConnectResult {
  GhzDiagonal state;
  double success_prob = 1.0;
  ConnectMode mode = ConnectMode::kProbabilistic;
};

/// Correction for one sign-insensitive pattern of the three Bell outcomes.
struct CorrectionRule {
  std::array<bool, 3> psi{};  // Bell I, II, III gave a Psi outcome
  /// Output positions (0,1,2 for qubits 0,3,6) that may receive X. One of
  /// them is applied, chosen uniformly; empty means no X correction.
  std::vector<int> x_candidates;
  bool accepted = true;  // kept by the probabilistic connection
};

/// The eight rows, indexed by psi[0]*4 + psi[1]*2 + psi[2].
const std::array<CorrectionRule, 8>& correction_table();
const CorrectionRule& correction_rule(const std::array<BellLabel, 3>& outcomes);
/// Z on one remaining qubit is needed when an odd number of outcomes is a
/// minus state (Phi- or Psi-).
bool needs_phase_correction(const std::array<BellLabel, 3>& outcomes);

enum class MergeVariant {
  kMerge,    // the two qubits become one: m + n - 1 qubits
  kProject,  // Bell measurement removes both: m + n - 2 qubits
};

/// Joins the last qubit of `first` with qubit 0 of `second`, with LDN(p) on
/// those two qubits beforehand, and applies the Pauli correction. Output
/// qubits are first's (minus the joined one for kProject) followed by
/// second's qubits 1..n-1.
GhzDiagonal merge_ghz(const GhzDiagonal& first, const GhzDiagonal& second,
                      MergeVariant variant, double p);

ConnectResult connect_three(const GhzDiagonal& a, const GhzDiagonal& b,
                            const GhzDiagonal& c, double p, ConnectMode mode);

/// |GHZ_3> with LDN(q) on each qubit.
GhzDiagonal elementary_state(double q);

struct LevelsResult {
  GhzDiagonal state;
  /// Success probability of one connection at each level (index 0 = level 1).
  std::vector<double> level_success;
  /// Probability that all (3^n - 1)/2 connections of the tree succeed.
  double joint_success = 1.0;
  ConnectMode mode = ConnectMode::kProbabilistic;
};

/// n nested connections: each level connects three copies of the previous
/// level's output, so 3^n elementary states span distance 2^n.
LevelsResult connect_n_levels(const GhzDiagonal& elementary, double p, int n,
                              ConnectMode mode);

struct DistanceResult {
  /// Largest 2^n (in units of the elementary distance) whose n-level output
  /// is distillable; 0 when the elementary state is not.
  std::uint64_t distance = 0;
  int levels = -1;
  bool unbounded = false;  // still distillable at max_levels
};

DistanceResult max_distance(double p, double q, int max_levels = 40,
                            ConnectMode mode = ConnectMode::kProbabilistic);

}  // namespace qrep
