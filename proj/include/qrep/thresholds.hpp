#pragma once

// Repeater-cycle simulation and threshold extraction.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrep/connection.hpp"
#include "qrep/purification.hpp"

namespace qrep {

/// Bisects for the boundary of a predicate that is false at lo and true at
/// hi. Stops when the bracket is narrower than tol and returns its midpoint.
/// Throws InputError if the endpoints do not have that shape.
double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi,
                       double tol);

/// Largest LDN level q at which LDN(q)^{(x)n}|GHZ_n> is not distillable.
double ldn_distillability_threshold(int n_qubits, double tol = 1e-9);
/// Same for a Bell pair under the bipartite criterion (1/sqrt 3).
double bell_distillability_threshold(double tol = 1e-9);

/// Slack allowed when comparing post- and pre-connect fidelities.
inline constexpr double kSustainTolerance = 1e-8;

struct CycleResult {
  bool sustained = false;
  double fixed_point_fidelity = 0.0;  // before connecting
  double post_fidelity = 0.0;         // after connect + purification
  double connect_success_prob = 0.0;
  bool pre_converged = false;
  bool pre_distillable = false;
  bool post_converged = false;
  std::string diagnostic;  // empty when sustained
};

/// elementary(q) -> purify to fixed point -> connect_three (probabilistic,
/// gate noise p) -> purify to fixed point, restarting the schedule. Sustained
/// iff both purifications converge, the first fixed point is distillable and
/// the final fidelity recovers the first within kSustainTolerance.
CycleResult repeater_cycle(double p, double q, Scheme scheme,
                           const FixedPointOptions& options = {});

/// Smallest p (at q = 1) whose repeater cycle is sustained, by bisection on
/// [lo, hi] down to a bracket of width tol.
double gate_threshold(Scheme scheme, double tol = 1e-4, double lo = 0.9, double hi = 1.0);

struct ThresholdSample {
  double p = 0.0;
  std::optional<double> q_min;  // empty: no q sustains the cycle at this p
};

struct ThresholdCurve {
  Scheme scheme = Scheme::kAlternating;
  std::vector<ThresholdSample> samples;
  std::optional<double> p_th;
};

/// q_min(p) by bisection on q in [q_lo, 1] for every grid point. Points where
/// even q = 1 fails are left undefined. p_th is filled in when requested.
ThresholdCurve q_min_curve(const std::vector<double>& p_grid, Scheme scheme,
                           double tol = 1e-4, bool with_p_th = false,
                           double q_lo = 0.5);

/// Smallest q whose elementary state is still distillable after n
/// probabilistic connection levels with gate noise p.
double channel_threshold_after_levels(int n, double p, double tol = 1e-7);

/// sqrt(p_c): gate reliability bound when every operation is measurement
/// based. Without an argument p_c is the GHZ3 LDN threshold.
double mb_asymptotic_threshold();
double mb_asymptotic_threshold(double p_c);

struct MbCycleResult {
  bool gain = false;
  double delta_fidelity = 0.0;  // final minus elementary
  double elementary_fidelity = 0.0;
  double final_fidelity = 0.0;
};

/// elementary(q) -> m rounds of (P1, P2) -> probabilistic connection, where
/// each step is an ideal map with LDN(p) on all of its inputs and outputs.
MbCycleResult mb_finite_cycle(double p, double q, int m);

enum class StorageStrategy { kMultipartiteFull, kBipartiteFull, kBipartiteReduced };

std::string_view to_string(StorageStrategy s);
/// "multipartite-full", "bipartite-full", "bipartite-reduced".
StorageStrategy parse_storage_strategy(std::string_view text);
/// Qubits kept per node: 3, 6 or 4 per coarse-graining level.
int storage_count(StorageStrategy strategy, int levels);

}  // namespace qrep
