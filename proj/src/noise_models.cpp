#include "qrep/noise_models.hpp"

#include <cmath>
#include <string>

#include "qrep/errors.hpp"

namespace qrep {

void require_reliability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InputError(std::string(name) + " must lie in [0,1], got " +
                     std::to_string(value));
  }
}

void NoiseParams::validate() const {
  require_reliability(p, "p");
  require_reliability(q, "q");
}

KrausChannel ldn(double q) {
  require_reliability(q, "q");
  const double w = std::sqrt((1.0 - q) / 4.0);
  return KrausChannel({std::sqrt(q + (1.0 - q) / 4.0) * gates::identity(),
                       w * gates::x(), w * gates::y(), w * gates::z()});
}

DensityMatrix apply_ldn(const DensityMatrix& rho, double q, int qubit) {
  require_reliability(q, "q");
  if (q == 1.0) return rho;
  const int target[] = {qubit};
  return apply_channel(rho, ldn(q), target);
}

DensityMatrix depolarize_all(const DensityMatrix& rho, double q) {
  DensityMatrix out = rho;
  for (int j = 0; j < rho.n_qubits(); ++j) out = apply_ldn(out, q, j);
  return out;
}

DensityMatrix noisy_apply(const DensityMatrix& rho, const Matrix& u,
                          std::span<const int> targets, double p) {
  require_reliability(p, "p");
  DensityMatrix noisy = rho;
  for (int t : targets) noisy = apply_ldn(noisy, p, t);
  return apply_unitary(noisy, u, targets);
}

std::vector<BellOutcome> noisy_bell_measure(const DensityMatrix& rho, int a, int b,
                                            double p) {
  require_reliability(p, "p");
  if (a == b) throw InputError("Bell measurement needs two distinct qubits");
  return bell_measure(apply_ldn(apply_ldn(rho, p, a), p, b), a, b);
}

}  // namespace qrep
