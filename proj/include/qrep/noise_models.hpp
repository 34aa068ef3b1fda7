#pragma once

// Local depolarising noise (LDN) and noisy operations.
//
//   E_q(rho) = q rho + (1-q)/4 sum_{s in {I,X,Y,Z}} s rho s
//
// i.e. the qubit is replaced by the maximally mixed state with probability
// 1-q. A noisy operation applies E_p to every qubit it touches and then the
// ideal operation.

#include <functional>
#include <span>
#include <vector>

#include "qrep/ghz_form.hpp"
#include "qrep/quantum_engine.hpp"

namespace qrep {

/// Gate reliability p and channel reliability q.
struct NoiseParams {
  double p = 1.0;
  double q = 1.0;

  void validate() const;
};

/// Throws InputError unless value lies in [0,1].
void require_reliability(double value, const char* name);

KrausChannel ldn(double q);

DensityMatrix apply_ldn(const DensityMatrix& rho, double q, int qubit);
DensityMatrix depolarize_all(const DensityMatrix& rho, double q);

/// LDN(p) on each target followed by the ideal unitary.
DensityMatrix noisy_apply(const DensityMatrix& rho, const Matrix& u,
                          std::span<const int> targets, double p);

/// LDN(p) on a and b followed by an ideal Bell measurement.
std::vector<BellOutcome> noisy_bell_measure(const DensityMatrix& rho, int a, int b,
                                            double p);

/// Map realised by a noisy measurement-based resource state: LDN on every
/// input qubit, the ideal map, LDN on every output qubit.
///
/// State is any type with a `depolarize_all(State, double)` overload
/// (DensityMatrix, GhzDiagonal). The inner map fixes the qubit counts.
template <class State>
struct EffectiveMap {
  std::function<State(const State&)> inner;
  double input_noise = 1.0;
  double output_noise = 1.0;

  State operator()(const State& in) const {
    return depolarize_all(inner(depolarize_all(in, input_noise)), output_noise);
  }
};

template <class State>
EffectiveMap<State> mb_effective(std::function<State(const State&)> inner, double p) {
  require_reliability(p, "p");
  return EffectiveMap<State>{std::move(inner), p, p};
}

}  // namespace qrep
