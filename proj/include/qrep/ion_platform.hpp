#pragma once

// Trapped-ion repeater model: elementary-state generation, distribution times
// and end-to-end fidelities of the 1D (Bell pair) and 2D (GHZ) approaches.

#include <cstdint>

#include "qrep/connection.hpp"

namespace qrep {

struct IonParams {
  double f_ion_photon = 0.995;  // ion-photon entanglement fidelity
  double p_single = 0.001;      // LDN strength of single-qubit operations
  double p_two = 0.005;         // LDN strength of two-qubit operations
  double eta_d = 0.9;           // detector efficiency
  double p_ion = 0.9;           // photon emission and conversion
  double l_att = 22.0;          // km
  double c_fiber = 2.0e5;       // km/s

  /// Throws InputError on probabilities outside [0,1] or non-positive
  /// l_att / c_fiber.
  void validate() const;

  /// All fidelities 1, no operation noise, lossless photons.
  static IonParams ideal();

  /// Per-qubit LDN reliability giving a one-interface Bell pair fidelity
  /// f_ion_photon: (4F - 1)/3.
  double interface_reliability() const { return (4.0 * f_ion_photon - 1.0) / 3.0; }
  double single_reliability() const { return 1.0 - p_single; }
  double two_reliability() const { return 1.0 - p_two; }
  /// CNOT plus single-qubit readout on each measured qubit.
  double bell_measurement_reliability() const {
    return two_reliability() * single_reliability();
  }
};

struct LinkTopology {
  double total_distance = 0.0;  // km
  int n_links = 2;

  /// n_links must be a power of two >= 2 and the distance non-negative.
  void validate() const;
  double l0() const { return total_distance / n_links; }
  int levels() const;  // log2(n_links)
};

/// 1/4 p_ion^3 eta_d^3 eta_t^3 with eta_t = exp(-L0 / (sqrt(3) L_att)): the
/// central station sits L0/sqrt(3) from each of the three nodes.
double p_elem_2d(double l0_km, const IonParams& params);
/// 1/2 p_ion^2 eta_d^2 exp(-L0 / L_att).
double p_elem_1d(double l0_km, const IonParams& params);

/// Expected number of rounds until `slots` independent links, each
/// succeeding with probability p_elem per round, are all established:
/// sum_{i=1}^{slots} 1 / (1 - (1 - p_elem)^i). Throws DivergenceError when
/// p_elem is 0.
double expected_rounds(double p_elem, std::uint64_t slots);

/// (L0/c) sum_{i=1}^{3^n} 1/(1-(1-P)^i), in seconds.
double time_2d(double l0_km, int n, const IonParams& params);
/// (1/p_suc)(L0/c) sum_{i=1}^{2 * 2^n} 1/(1-(1-P)^i), in seconds.
double time_1d(double l0_km, int n, double p_suc, const IonParams& params);

/// 3^n elementary GHZ3 states connected over n levels; 2^n links.
double fidelity_2d(int n_links, const IonParams& params,
                   ConnectMode mode = ConnectMode::kProbabilistic);
/// Two swapped Bell-pair chains of n_links links each, fused into a GHZ3 at
/// the central node through an ancilla in |+>, two CNOTs and Z readout.
double fidelity_1d(int n_links, const IonParams& params);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Samples the waiting model behind expected_rounds: every round all open
/// slots attempt, and at least one success closes one slot. Trials are split
/// into fixed chunks with their own seeded streams, so the result does not
/// depend on `jobs`.
MonteCarloEstimate simulate_rounds(double p_elem, std::uint64_t slots,
                                   std::uint64_t trials, std::uint64_t seed,
                                   unsigned jobs = 1);

/// Photon-loss sampling of one elementary attempt: every photon must be
/// emitted, transmitted and detected, then the analysing box succeeds with
/// probability 1/4 (three photons) or 1/2 (two photons).
MonteCarloEstimate simulate_p_elem_2d(double l0_km, const IonParams& params,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned jobs = 1);
MonteCarloEstimate simulate_p_elem_1d(double l0_km, const IonParams& params,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned jobs = 1);

}  // namespace qrep
