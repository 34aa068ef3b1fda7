#include "qrep/purification.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "qrep/errors.hpp"
#include "qrep/noise_models.hpp"

namespace qrep {

std::string_view to_string(Subprotocol s) { return s == Subprotocol::kP1 ? "P1" : "P2"; }

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kAlternating: return "alternating";
    case Scheme::kMlf: return "mlf";
    case Scheme::kLw: return "lw";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "alternating" || text == "alt") return Scheme::kAlternating;
  if (text == "mlf") return Scheme::kMlf;
  if (text == "lw") return Scheme::kLw;
  throw InputError("unknown purification scheme '" + std::string(text) + "'");
}

void Bicoloring::validate(int n_qubits, std::span<const Edge> edges) const {
  std::vector<int> colour(static_cast<std::size_t>(std::max(n_qubits, 0)), -1);
  auto mark = [&](const std::vector<int>& set, int c) {
    for (int v : set) {
      if (v < 0 || v >= n_qubits) throw InputError("bicoloring vertex out of range");
      if (colour[static_cast<std::size_t>(v)] != -1) {
        throw InputError("vertex " + std::to_string(v) + " coloured twice");
      }
      colour[static_cast<std::size_t>(v)] = c;
    }
  };
  mark(a, 0);
  mark(b, 1);
  if (std::find(colour.begin(), colour.end(), -1) != colour.end()) {
    throw InputError("bicoloring does not cover every vertex");
  }
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_qubits || v >= n_qubits) {
      throw InputError("edge vertex out of range");
    }
    if (colour[static_cast<std::size_t>(u)] == colour[static_cast<std::size_t>(v)]) {
      throw InputError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") lies inside one colour class");
    }
  }
}

Bicoloring star_bicoloring(int n_qubits) {
  if (n_qubits < 2) throw InputError("a star graph needs at least 2 vertices");
  Bicoloring c{{0}, {}};
  for (int i = 1; i < n_qubits; ++i) c.b.push_back(i);
  return c;
}

std::vector<Edge> star_edges(int n_qubits) {
  std::vector<Edge> edges;
  for (int i = 1; i < n_qubits; ++i) edges.emplace_back(0, i);
  return edges;
}

namespace {

PurifyStep recurrence(const GhzDiagonal& s, Subprotocol protocol, double p) {
  require_reliability(p, "p");
  const int n = s.n_qubits();
  if (n < 2) throw InputError("purification needs at least 2 qubits");
  const GhzDiagonal noisy = depolarize_all(s, p);
  const int shift = n - 1;
  const std::size_t b_mask = (std::size_t{1} << shift) - 1;
  std::vector<double> out(noisy.size(), 0.0);
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] == 0.0) continue;
    for (std::size_t j = 0; j < noisy.size(); ++j) {
      const std::size_t ai = i >> shift, aj = j >> shift;
      const std::size_t bi = i & b_mask, bj = j & b_mask;
      if (protocol == Subprotocol::kP1) {
        if (ai == aj) out[(ai << shift) | (bi ^ bj)] += noisy[i] * noisy[j];
      } else {
        if (bi == bj) out[((ai ^ aj) << shift) | bi] += noisy[i] * noisy[j];
      }
    }
  }
  double total = 0.0;
  for (double w : out) total += w;
  if (!(total > 0.0)) {
    throw DegenerateStateError(std::string(to_string(protocol)) +
                               " has zero success probability");
  }
  return {protocol, std::min(total, 1.0), normalise_weights(n, std::move(out))};
}

}  // namespace

PurifyStep p1_step(const GhzDiagonal& s, double p) {
  return recurrence(s, Subprotocol::kP1, p);
}

PurifyStep p2_step(const GhzDiagonal& s, double p) {
  return recurrence(s, Subprotocol::kP2, p);
}

PurifyStep purify_step(const GhzDiagonal& s, Subprotocol protocol, double p) {
  return recurrence(s, protocol, p);
}

Subprotocol choose_protocol(const GhzDiagonal& s, double p, Scheme scheme,
                            std::optional<Subprotocol> last) {
  switch (scheme) {
    case Scheme::kAlternating:
      return last == Subprotocol::kP1 ? Subprotocol::kP2 : Subprotocol::kP1;
    case Scheme::kMlf: {
      const double f1 = fidelity_of(p1_step(s, p).state_out);
      const double f2 = fidelity_of(p2_step(s, p).state_out);
      return f1 >= f2 ? Subprotocol::kP1 : Subprotocol::kP2;
    }
    case Scheme::kLw: {
      const int shift = s.n_qubits() - 1;
      // sum over mu_A of lambda_{mu_A,0} vs sum over mu_B of lambda_{0,mu_B}
      const double sum_a = s[0] + s[std::size_t{1} << shift];
      double sum_b = 0.0;
      for (std::size_t k = 0; k < (std::size_t{1} << shift); ++k) sum_b += s[k];
      return sum_a >= sum_b - kLwTieTolerance ? Subprotocol::kP1 : Subprotocol::kP2;
    }
  }
  return Subprotocol::kP1;
}

FixedPointResult purify_to_fixed_point(const GhzDiagonal& s0, double p, Scheme scheme,
                                       const FixedPointOptions& options) {
  require_reliability(p, "p");
  if (!(options.tol > 0.0)) throw InputError("fixed-point tolerance must be positive");
  if (options.max_iters < 1) throw InputError("max_iters must be at least 1");

  FixedPointResult result{s0, false, {}};
  std::deque<GhzDiagonal> recent{s0};  // last three states
  std::optional<Subprotocol> last;
  for (int it = 0; it < options.max_iters; ++it) {
    const Subprotocol next = choose_protocol(result.state, p, scheme, last);
    std::optional<PurifyStep> attempt;
    try {
      attempt = purify_step(result.state, next, p);
    } catch (const DegenerateStateError&) {
      return result;
    }
    const PurifyStep& step = *attempt;
    last = next;
    result.state = step.state_out;
    result.trajectory.push_back({next, fidelity_of(step.state_out), step.success_prob});
    recent.push_back(step.state_out);
    if (recent.size() > 3) recent.pop_front();

    if (scheme == Scheme::kAlternating && next != Subprotocol::kP2) continue;
    const std::size_t m = recent.size();
    const bool still = m >= 2 && recent[m - 1].max_abs_difference(recent[m - 2]) < options.tol;
    const bool cycle = m >= 3 && recent[m - 1].max_abs_difference(recent[m - 3]) < options.tol;
    if (still || cycle) {
      result.converged = true;
      // An adaptive scheme may settle into the same P1/P2 cycle as the
      // alternating one but stop on the other phase; report the better one.
      if (!still && scheme != Scheme::kAlternating &&
          fidelity_of(recent[m - 2]) > fidelity_of(recent[m - 1])) {
        result.state = recent[m - 2];
        result.trajectory.pop_back();
      }
      return result;
    }
  }
  return result;
}

DejmpsResult dejmps_step(const BellDiagonal& b, double p) {
  b.validate();
  require_reliability(p, "p");
  const BellDiagonal noisy = to_bell(depolarize_all(to_ghz(b), p));
  const double a = noisy.phi_plus, bb = noisy.psi_minus, c = noisy.psi_plus,
               d = noisy.phi_minus;
  const double norm = (a + bb) * (a + bb) + (c + d) * (c + d);
  if (!(norm > 0.0)) throw DegenerateStateError("DEJMPS step has zero success probability");
  BellDiagonal out;
  out.phi_plus = (a * a + bb * bb) / norm;
  out.psi_minus = 2.0 * c * d / norm;
  out.psi_plus = (c * c + d * d) / norm;
  out.phi_minus = 2.0 * a * bb / norm;
  return {out, std::min(norm, 1.0)};
}

}  // namespace qrep
