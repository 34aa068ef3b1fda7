#include "qrep/ion_platform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qrep/errors.hpp"
#include "qrep/noise_models.hpp"

namespace qrep {

void IonParams::validate() const {
  require_reliability(f_ion_photon, "f_ion_photon");
  require_reliability(p_single, "p_single");
  require_reliability(p_two, "p_two");
  require_reliability(eta_d, "eta_d");
  require_reliability(p_ion, "p_ion");
  if (!(l_att > 0.0)) throw InputError("l_att must be positive");
  if (!(c_fiber > 0.0)) throw InputError("c_fiber must be positive");
  if (f_ion_photon < 0.25) throw InputError("f_ion_photon below 1/4 is not a valid fidelity");
}

IonParams IonParams::ideal() {
  IonParams p;
  p.f_ion_photon = 1.0;
  p.p_single = 0.0;
  p.p_two = 0.0;
  p.eta_d = 1.0;
  p.p_ion = 1.0;
  return p;
}

void LinkTopology::validate() const {
  if (!(total_distance >= 0.0)) throw InputError("total distance must be non-negative");
  if (n_links < 2 || (n_links & (n_links - 1)) != 0) {
    throw InputError("n_links must be a power of two >= 2, got " + std::to_string(n_links));
  }
}

int LinkTopology::levels() const {
  validate();
  int n = 0;
  while ((1 << n) < n_links) ++n;
  return n;
}

namespace {

int levels_of(int n_links) { return LinkTopology{0.0, n_links}.levels(); }

void require_distance(double l0_km) {
  if (!(l0_km >= 0.0)) throw InputError("L0 must be non-negative");
}

double photon_2d(double l0_km, const IonParams& params) {
  return params.p_ion * params.eta_d * std::exp(-l0_km / (std::sqrt(3.0) * params.l_att));
}

double photon_1d(double l0_km, const IonParams& params) {
  // The middle station sits L0/2 from each end.
  return params.p_ion * params.eta_d * std::exp(-l0_km / (2.0 * params.l_att));
}

// Runs `chunk(rng, n)` on fixed chunks so the estimate is independent of the
// thread count; chunk returns (sum, sum of squares).
MonteCarloEstimate run_chunks(
    std::uint64_t trials, std::uint64_t seed, unsigned jobs,
    const std::function<std::pair<double, double>(std::mt19937_64&, std::uint64_t)>& chunk) {
  if (trials < 2) throw InputError("Monte Carlo needs at least 2 trials");
  constexpr std::uint64_t kChunks = 64;
  std::vector<std::pair<double, double>> partial(kChunks, {0.0, 0.0});
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < kChunks; c = next++) {
      const std::uint64_t n = trials / kChunks + (c < trials % kChunks ? 1 : 0);
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(c)};
      std::mt19937_64 rng(seq);
      partial[c] = chunk(rng, n);
    }
  };
  const unsigned threads = std::clamp(jobs, 1u, static_cast<unsigned>(kChunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& [s, s2] : partial) {
    sum += s;
    sum_sq += s2;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), trials};
}

MonteCarloEstimate simulate_elementary(double photon_prob, int photons, double box_prob,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned jobs, double p_ion, double eta_d) {
  const double transmit = photon_prob / (p_ion * eta_d);
  return run_chunks(trials, seed, jobs, [=](std::mt19937_64& rng, std::uint64_t n) {
    std::bernoulli_distribution emitted(p_ion), arrived(transmit), detected(eta_d),
        box(box_prob);
    double hits = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) {
      bool ok = true;
      for (int k = 0; k < photons; ++k) {
        ok = emitted(rng) && arrived(rng) && detected(rng) && ok;
      }
      if (ok && box(rng)) hits += 1.0;
    }
    return std::pair{hits, hits};
  });
}

}  // namespace

double p_elem_2d(double l0_km, const IonParams& params) {
  params.validate();
  require_distance(l0_km);
  return 0.25 * std::pow(photon_2d(l0_km, params), 3);
}

double p_elem_1d(double l0_km, const IonParams& params) {
  params.validate();
  require_distance(l0_km);
  return 0.5 * std::pow(photon_1d(l0_km, params), 2);
}

double expected_rounds(double p_elem, std::uint64_t slots) {
  require_reliability(p_elem, "p_elem");
  if (p_elem == 0.0) throw DivergenceError("elementary success probability is zero");
  double total = 0.0;
  for (std::uint64_t i = 1; i <= slots; ++i) {
    // 1 - fail^i computed without cancellation for small p_elem
    total += 1.0 / -std::expm1(static_cast<double>(i) * std::log1p(-p_elem));
  }
  return total;
}

double time_2d(double l0_km, int n, const IonParams& params) {
  if (n < 1) throw InputError("time_2d needs n >= 1");
  const double p = p_elem_2d(l0_km, params);
  const auto slots = static_cast<std::uint64_t>(std::llround(std::pow(3.0, n)));
  return l0_km / params.c_fiber * expected_rounds(p, slots);
}

double time_1d(double l0_km, int n, double p_suc, const IonParams& params) {
  if (n < 1) throw InputError("time_1d needs n >= 1");
  require_reliability(p_suc, "p_suc");
  if (p_suc == 0.0) throw DivergenceError("p_suc is zero");
  const double p = p_elem_1d(l0_km, params);
  const std::uint64_t slots = std::uint64_t{2} << n;
  return l0_km / params.c_fiber * expected_rounds(p, slots) / p_suc;
}

double fidelity_2d(int n_links, const IonParams& params, ConnectMode mode) {
  params.validate();
  const int levels = levels_of(n_links);
  const GhzDiagonal elementary = elementary_state(params.interface_reliability());
  return fidelity_of(
      connect_n_levels(elementary, params.bell_measurement_reliability(), levels, mode).state);
}

double fidelity_1d(int n_links, const IonParams& params) {
  params.validate();
  levels_of(n_links);
  const double r_ip = params.interface_reliability();
  const double r_bm = params.bell_measurement_reliability();
  const double r1 = params.single_reliability();
  const double r2 = params.two_reliability();

  const GhzDiagonal link = depolarize_all(GhzDiagonal::perfect(2), r_ip);
  GhzDiagonal chain = link;
  for (int i = 1; i < n_links; ++i) chain = merge_ghz(chain, link, MergeVariant::kProject, r_bm);

  // Qubits: 0 ancilla, 1 A's half of A-B, 2 B, 3 A's half of A-C, 4 C.
  Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  DensityMatrix pair = to_density_matrix(chain);
  DensityMatrix rho = tensor(tensor(DensityMatrix::from_pure(plus), pair), pair);
  rho = apply_ldn(rho, r1, 0);
  for (int target : {1, 3}) {
    const int wires[] = {0, target};
    rho = noisy_apply(rho, gates::cnot(), wires, r2);
  }
  rho = apply_ldn(apply_ldn(rho, r1, 1), r1, 3);

  const int measured[] = {1, 3};
  Matrix out = Matrix::Zero(8, 8);
  for (int m1 = 0; m1 < 2; ++m1) {
    for (int m2 = 0; m2 < 2; ++m2) {
      DensityMatrix corrected = rho;
      const int b[] = {2}, c[] = {4};
      if (m1) corrected = apply_unitary(corrected, gates::x(), b);
      if (m2) corrected = apply_unitary(corrected, gates::x(), c);
      Vector outcome = Vector::Zero(4);
      outcome(m1 * 2 + m2) = 1.0;
      out += project_out(corrected, measured, outcome);
    }
  }
  return fidelity(DensityMatrix::from_matrix(out), ghz_vector(3));
}

MonteCarloEstimate simulate_rounds(double p_elem, std::uint64_t slots, std::uint64_t trials,
                                   std::uint64_t seed, unsigned jobs) {
  require_reliability(p_elem, "p_elem");
  if (p_elem == 0.0) throw DivergenceError("elementary success probability is zero");
  if (slots == 0) throw InputError("need at least one slot");
  return run_chunks(trials, seed, jobs, [=](std::mt19937_64& rng, std::uint64_t n) {
    // With r slots open a round closes one of them with probability
    // 1 - (1-P)^r; the rounds spent at each r are geometric.
    std::vector<std::geometric_distribution<std::uint64_t>> stage;
    for (std::uint64_t r = 1; r <= slots; ++r) {
      stage.emplace_back(-std::expm1(static_cast<double>(r) * std::log1p(-p_elem)));
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) {
      double rounds = 0.0;
      for (auto& g : stage) rounds += static_cast<double>(g(rng) + 1);
      sum += rounds;
      sum_sq += rounds * rounds;
    }
    return std::pair{sum, sum_sq};
  });
}

MonteCarloEstimate simulate_p_elem_2d(double l0_km, const IonParams& params,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned jobs) {
  params.validate();
  require_distance(l0_km);
  return simulate_elementary(photon_2d(l0_km, params), 3, 0.25, trials, seed, jobs,
                             params.p_ion, params.eta_d);
}

MonteCarloEstimate simulate_p_elem_1d(double l0_km, const IonParams& params,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned jobs) {
  params.validate();
  require_distance(l0_km);
  return simulate_elementary(photon_1d(l0_km, params), 2, 0.5, trials, seed, jobs,
                             params.p_ion, params.eta_d);
}

}  // namespace qrep
