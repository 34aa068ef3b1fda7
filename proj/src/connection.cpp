#include "qrep/connection.hpp"

#include <cmath>
#include <string>

#include "qrep/errors.hpp"
#include "qrep/noise_models.hpp"

namespace qrep {
namespace {

// Pauli error relative to |GHZ+>, one (x, z) bit pair per qubit.
struct PauliFrame {
  std::vector<std::uint8_t> x, z;
};

PauliFrame frame_of(int n, GhzLabel label) {
  PauliFrame f{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0),
               std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
  f.z[0] = label.minus;
  for (int i = 1; i < n; ++i) {
    f.x[static_cast<std::size_t>(i)] = (label.k >> (n - 1 - i)) & 1u;
  }
  return f;
}

GhzLabel label_of(const PauliFrame& f) {
  const int n = static_cast<int>(f.x.size());
  GhzLabel label;
  std::uint8_t parity = 0;
  for (auto b : f.z) parity ^= b;
  label.minus = parity;
  for (int i = 1; i < n; ++i) {
    if (f.x[static_cast<std::size_t>(i)] ^ f.x[0]) {
      label.k |= std::uint32_t{1} << (n - 1 - i);
    }
  }
  return label;
}

std::array<bool, 3> psi_pattern(const std::array<BellLabel, 3>& outcomes) {
  return {is_psi(outcomes[0]), is_psi(outcomes[1]), is_psi(outcomes[2])};
}

}  // namespace

std::string_view to_string(ConnectMode mode) {
  return mode == ConnectMode::kDeterministic ? "deterministic" : "probabilistic";
}

const std::array<CorrectionRule, 8>& correction_table() {
  static const std::array<CorrectionRule, 8> table = {{
      {{false, false, false}, {}, true},
      {{false, false, true}, {}, false},
      {{false, true, false}, {}, false},
      {{false, true, true}, {2}, true},
      {{true, false, false}, {}, false},
      {{true, false, true}, {1}, true},
      {{true, true, false}, {0}, true},
      {{true, true, true}, {0, 1, 2}, false},
  }};
  return table;
}

const CorrectionRule& correction_rule(const std::array<BellLabel, 3>& outcomes) {
  const auto psi = psi_pattern(outcomes);
  return correction_table()[static_cast<std::size_t>(psi[0] * 4 + psi[1] * 2 + psi[2])];
}

bool needs_phase_correction(const std::array<BellLabel, 3>& outcomes) {
  int minus = 0;
  for (auto l : outcomes) minus += is_minus(l);
  return minus % 2 == 1;
}

// ---------------------------------------------------------------------------

GhzDiagonal merge_ghz(const GhzDiagonal& first, const GhzDiagonal& second,
                      MergeVariant variant, double p) {
  require_reliability(p, "p");
  const int m = first.n_qubits();
  const int n = second.n_qubits();
  if (m + n > kMaxQubits) {
    throw InputError("merged system of " + std::to_string(m + n) +
                     " qubits exceeds the " + std::to_string(kMaxQubits) +
                     "-qubit cap");
  }
  if (variant == MergeVariant::kProject && m + n < 3) {
    throw InputError("projecting two single qubits leaves no state");
  }
  const GhzDiagonal noisy1 = ldn_coeff_update(first, p, m - 1);
  const GhzDiagonal noisy2 = ldn_coeff_update(second, p, 0);

  const bool merge = variant == MergeVariant::kMerge;
  const int out_n = merge ? m + n - 1 : m + n - 2;
  const auto joined_a = static_cast<std::size_t>(m - 1);
  std::vector<double> out(std::size_t{1} << out_n, 0.0);

  for (std::size_t i = 0; i < noisy1.size(); ++i) {
    if (noisy1[i] == 0.0) continue;
    const PauliFrame f1 = frame_of(m, ghz_label(m, i));
    for (std::size_t j = 0; j < noisy2.size(); ++j) {
      const double w = noisy1[i] * noisy2[j];
      if (w == 0.0) continue;
      const PauliFrame f2 = frame_of(n, ghz_label(n, j));

      // A bit flip on either joined qubit flips the recorded Z-parity, so
      // the correction wrongly flips the rest of the second state.
      const std::uint8_t parity_flip = f1.x[joined_a] ^ f2.x[0];
      PauliFrame fo;
      for (std::size_t q = 0; q < static_cast<std::size_t>(m); ++q) {
        if (!merge && q == joined_a) continue;
        fo.x.push_back(f1.x[q]);
        fo.z.push_back(f1.z[q]);
      }
      for (std::size_t q = 1; q < static_cast<std::size_t>(n); ++q) {
        fo.x.push_back(f2.x[q] ^ parity_flip);
        fo.z.push_back(f2.z[q]);
      }
      if (merge) {
        // Z on the absorbed qubit acts as Z on the surviving one.
        fo.z[joined_a] ^= f2.z[0];
      } else {
        // Phase errors flip the recorded X-parity; the Z correction then
        // lands on the output as a sign flip.
        fo.z.front() ^= f1.z[joined_a] ^ f2.z[0];
      }
      out[ghz_index(out_n, label_of(fo))] += w;
    }
  }
  return normalise_weights(out_n, std::move(out));
}

ConnectResult connect_three(const GhzDiagonal& a, const GhzDiagonal& b,
                            const GhzDiagonal& c, double p, ConnectMode mode) {
  require_reliability(p, "p");
  for (const auto* s : {&a, &b, &c}) {
    if (s->n_qubits() != 3) throw InputError("connect_three needs 3-qubit states");
  }
  // Only qubits 1 and 2 of each input are measured.
  auto measured_noise = [p](const GhzDiagonal& s) {
    return ldn_coeff_update(ldn_coeff_update(s, p, 1), p, 2);
  };
  const GhzDiagonal na = measured_noise(a);
  const GhzDiagonal nb = measured_noise(b);
  const GhzDiagonal nc = measured_noise(c);

  // Output flip pattern k (over output qubits 3, 6) for each even syndrome.
  // Bell I = (1,5), II = (2,7), III = (4,8).
  auto flips = [](int k) { return std::pair<int, int>{(k >> 1) & 1, k & 1}; };
  constexpr std::uint32_t kNoFlip = 0b00, kFlipFirst = 0b11, kFlipSecond = 0b10,
                          kFlipThird = 0b01;

  std::vector<double> out(8, 0.0);
  double accepted = 0.0;
  for (std::size_t ia = 0; ia < 8; ++ia) {
    for (std::size_t ib = 0; ib < 8; ++ib) {
      const double wab = na[ia] * nb[ib];
      if (wab == 0.0) continue;
      for (std::size_t ic = 0; ic < 8; ++ic) {
        const double w = wab * nc[ic];
        if (w == 0.0) continue;
        const GhzLabel la = ghz_label(3, ia);
        const GhzLabel lb = ghz_label(3, ib);
        const GhzLabel lc = ghz_label(3, ic);
        const bool minus = la.minus ^ lb.minus ^ lc.minus;
        const auto [a1, a2] = flips(static_cast<int>(la.k));
        const auto [b1, b2] = flips(static_cast<int>(lb.k));
        const auto [c1, c2] = flips(static_cast<int>(lc.k));
        const int z1 = a1 ^ b2;
        const int z2 = a2 ^ c1;
        const int z3 = b1 ^ c2;

        if ((z1 + z2 + z3) % 2 == 0) {
          std::uint32_t k = kNoFlip;
          if (z1 && z2) k = kFlipFirst;
          else if (z1 && z3) k = kFlipSecond;
          else if (z2 && z3) k = kFlipThird;
          out[ghz_index(3, {minus, k})] += w;
          accepted += w;
        } else if (mode == ConnectMode::kDeterministic) {
          // The true parities are uniformly random given an odd syndrome,
          // so the corrected output is an even mixture of the four flips.
          for (std::uint32_t k : {kNoFlip, kFlipFirst, kFlipSecond, kFlipThird}) {
            out[ghz_index(3, {minus, k})] += 0.25 * w;
          }
          accepted += w;
        }
      }
    }
  }
  if (!(accepted > 0.0)) {
    throw DegenerateStateError("no Bell outcome pattern was accepted");
  }
  return {normalise_weights(3, std::move(out)), accepted, mode};
}

GhzDiagonal elementary_state(double q) {
  require_reliability(q, "q");
  return depolarize_all(GhzDiagonal::perfect(3), q);
}

LevelsResult connect_n_levels(const GhzDiagonal& elementary, double p, int n,
                              ConnectMode mode) {
  if (n < 1) throw InputError("connect_n_levels needs n >= 1");
  LevelsResult result{elementary, {}, 1.0, mode};
  double connections = std::pow(3.0, n - 1);
  for (int level = 1; level <= n; ++level) {
    ConnectResult r =
        connect_three(result.state, result.state, result.state, p, mode);
    result.state = std::move(r.state);
    result.level_success.push_back(r.success_prob);
    result.joint_success *= std::pow(r.success_prob, connections);
    connections /= 3.0;
  }
  return result;
}

DistanceResult max_distance(double p, double q, int max_levels, ConnectMode mode) {
  require_reliability(p, "p");
  require_reliability(q, "q");
  if (max_levels < 1 || max_levels > 62) {
    throw InputError("max_levels must lie in [1, 62]");
  }
  GhzDiagonal state = elementary_state(q);
  if (!is_distillable(state)) return {0, -1, false};
  for (int level = 1; level <= max_levels; ++level) {
    state = connect_three(state, state, state, p, mode).state;
    if (!is_distillable(state)) {
      return {std::uint64_t{1} << (level - 1), level - 1, false};
    }
  }
  return {std::uint64_t{1} << max_levels, max_levels, true};
}

}  // namespace qrep
