#pragma once

// Recurrence purification of GHZ-diagonal states (subprotocols P1/P2 for
// two-colourable graph states) and the bipartite DEJMPS recurrence.
//
// |GHZ_n> is locally equivalent to the star graph state with centre qubit 0
// (Hadamards on qubits 1..n-1). With colouring A = {0}, B = {1..n-1} the
// graph-basis index mu_A is the GHZ sign bit and mu_B is the flip pattern k,
// so lambda_{mu_A, mu_B} is the GhzDiagonal coefficient at index
// (mu_A << (n-1)) | mu_B.
//
// Both subprotocols take two identical copies. Every qubit of both copies
// goes through a noisy CNOT, so gate noise enters as LDN(p) on all qubits of
// each copy before an ideal step.

#include <optional>
#include <string_view>
#include <vector>

#include "qrep/ghz_form.hpp"

namespace qrep {

enum class Subprotocol { kP1, kP2 };
enum class Scheme { kAlternating, kMlf, kLw };

std::string_view to_string(Subprotocol s);
std::string_view to_string(Scheme s);
/// Accepts "alternating"/"alt", "mlf", "lw". Throws InputError otherwise.
Scheme parse_scheme(std::string_view text);

/// Partition of graph vertices into two independent sets.
struct Bicoloring {
  std::vector<int> a;
  std::vector<int> b;

  /// Throws InputError unless a and b partition 0..n-1 and no edge lies
  /// inside either set.
  void validate(int n_qubits, std::span<const Edge> edges) const;
};

/// A = {0}, B = {1..n-1}: the colouring used for GHZ states.
Bicoloring star_bicoloring(int n_qubits);
std::vector<Edge> star_edges(int n_qubits);

struct PurifyStep {
  Subprotocol protocol;
  double success_prob;
  GhzDiagonal state_out;
};

/// P1: CNOTs between the copies, the second copy measured (A in X, B in Z),
/// kept iff every stabiliser parity on A agrees. Amplifies mu_A = 0.
///   lambda'_{g_A, g_B} ~ sum_{v_B ^ w_B = g_B} lambda_{g_A, v_B} lambda_{g_A, w_B}
PurifyStep p1_step(const GhzDiagonal& s, double p);
/// P2: the mirror of P1 with A and B exchanged. Amplifies mu_B = 0.
PurifyStep p2_step(const GhzDiagonal& s, double p);
PurifyStep purify_step(const GhzDiagonal& s, Subprotocol protocol, double p);

/// Tie tolerance for the lambda-weight comparison; ties go to P1.
inline constexpr double kLwTieTolerance = 1e-12;

/// Alternating toggles `last` (P1 first). MLF simulates both steps and keeps
/// the one with the higher output fidelity (P1 on ties). LW applies P1 iff
/// sum_{mu_A} lambda_{mu_A,0} >= sum_{mu_B} lambda_{0,mu_B} - tolerance.
Subprotocol choose_protocol(const GhzDiagonal& s, double p, Scheme scheme,
                            std::optional<Subprotocol> last);

struct FixedPointOptions {
  double tol = 1e-12;  // max coefficient change
  int max_iters = 500;
};

struct TrajectoryPoint {
  Subprotocol protocol;
  double fidelity;
  double success_prob;
};

struct FixedPointResult {
  GhzDiagonal state;
  bool converged = false;
  std::vector<TrajectoryPoint> trajectory;
};

/// Iterates scheme-chosen steps until the state repeats (against the previous
/// state, or the one two steps back for a P1/P2 cycle) within tol. The
/// alternating scheme only stops after complete P1,P2 rounds. Degenerate
/// steps stop the iteration and leave converged = false.
FixedPointResult purify_to_fixed_point(const GhzDiagonal& s0, double p, Scheme scheme,
                                       const FixedPointOptions& options = {});

struct DejmpsResult {
  BellDiagonal state;
  double success_prob;
};

/// One round of the DEJMPS recurrence on two copies, with LDN(p) on all four
/// qubits before the bilateral CNOT. Post-selects on coincident outcomes.
DejmpsResult dejmps_step(const BellDiagonal& b, double p);

}  // namespace qrep
