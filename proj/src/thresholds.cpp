#include "qrep/thresholds.hpp"

#include <cmath>

#include "qrep/errors.hpp"
#include "qrep/noise_models.hpp"

namespace qrep {

double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi,
                       double tol) {
  if (!(tol > 0.0)) throw InputError("bisection tolerance must be positive");
  if (!(lo < hi)) throw InputError("bisection needs lo < hi");
  if (pred(lo)) throw InputError("predicate already holds at the lower end");
  if (!pred(hi)) throw InputError("predicate fails at the upper end");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double ldn_distillability_threshold(int n_qubits, double tol) {
  const GhzDiagonal perfect = GhzDiagonal::perfect(n_qubits);
  return bisect_boundary(
      [&](double q) { return is_distillable(depolarize_all(perfect, q)); }, 0.0, 1.0,
      tol);
}

double bell_distillability_threshold(double tol) {
  const GhzDiagonal perfect = GhzDiagonal::perfect(2);
  return bisect_boundary(
      [&](double q) { return bipartite_distillable(to_bell(depolarize_all(perfect, q))); },
      0.0, 1.0, tol);
}

CycleResult repeater_cycle(double p, double q, Scheme scheme,
                           const FixedPointOptions& options) {
  require_reliability(p, "p");
  require_reliability(q, "q");
  CycleResult r;
  const FixedPointResult pre = purify_to_fixed_point(elementary_state(q), p, scheme, options);
  r.fixed_point_fidelity = fidelity_of(pre.state);
  r.pre_converged = pre.converged;
  r.pre_distillable = is_distillable(pre.state);
  if (!r.pre_converged) {
    r.diagnostic = "initial purification did not converge";
    return r;
  }
  if (!r.pre_distillable) {
    r.diagnostic = "initial fixed point is not distillable";
    return r;
  }
  std::optional<ConnectResult> attempt;
  try {
    attempt = connect_three(pre.state, pre.state, pre.state, p,
                              ConnectMode::kProbabilistic);
  } catch (const DegenerateStateError& e) {
    r.diagnostic = e.what();
    return r;
  }
  const ConnectResult& connected = *attempt;
  r.connect_success_prob = connected.success_prob;
  const FixedPointResult post = purify_to_fixed_point(connected.state, p, scheme, options);
  r.post_fidelity = fidelity_of(post.state);
  r.post_converged = post.converged;
  if (!post.converged) {
    r.diagnostic = "purification after connecting did not converge";
  } else if (!is_distillable(post.state)) {
    r.diagnostic = "connected state purifies to a non-distillable state";
  } else if (r.post_fidelity < r.fixed_point_fidelity - kSustainTolerance) {
    r.diagnostic = "fidelity lost over the cycle";
  } else {
    r.sustained = true;
  }
  return r;
}

double gate_threshold(Scheme scheme, double tol, double lo, double hi) {
  return bisect_boundary([&](double p) { return repeater_cycle(p, 1.0, scheme).sustained; },
                         lo, hi, tol);
}

ThresholdCurve q_min_curve(const std::vector<double>& p_grid, Scheme scheme, double tol,
                           bool with_p_th, double q_lo) {
  if (p_grid.empty()) throw InputError("p grid is empty");
  ThresholdCurve curve;
  curve.scheme = scheme;
  for (double p : p_grid) {
    require_reliability(p, "p");
    ThresholdSample sample{p, std::nullopt};
    auto ok = [&](double q) { return repeater_cycle(p, q, scheme).sustained; };
    if (ok(1.0)) sample.q_min = ok(q_lo) ? q_lo : bisect_boundary(ok, q_lo, 1.0, tol);
    curve.samples.push_back(sample);
  }
  if (with_p_th) curve.p_th = gate_threshold(scheme, tol);
  return curve;
}

double channel_threshold_after_levels(int n, double p, double tol) {
  require_reliability(p, "p");
  if (n < 1) throw InputError("need at least one connection level");
  auto ok = [&](double q) {
    try {
      return is_distillable(
          connect_n_levels(elementary_state(q), p, n, ConnectMode::kProbabilistic).state);
    } catch (const DegenerateStateError&) {
      return false;
    }
  };
  return bisect_boundary(ok, 0.5, 1.0, tol);
}

double mb_asymptotic_threshold() {
  return mb_asymptotic_threshold(ldn_distillability_threshold(3));
}

double mb_asymptotic_threshold(double p_c) {
  require_reliability(p_c, "p_c");
  return std::sqrt(p_c);
}

MbCycleResult mb_finite_cycle(double p, double q, int m) {
  require_reliability(p, "p");
  require_reliability(q, "q");
  if (m < 1) throw InputError("mb_finite_cycle needs m >= 1");
  using Map = std::function<GhzDiagonal(const GhzDiagonal&)>;
  const auto p1 = mb_effective<GhzDiagonal>(
      Map([](const GhzDiagonal& s) { return p1_step(s, 1.0).state_out; }), p);
  const auto p2 = mb_effective<GhzDiagonal>(
      Map([](const GhzDiagonal& s) { return p2_step(s, 1.0).state_out; }), p);
  // The three inputs are identical copies.
  const auto connect = mb_effective<GhzDiagonal>(Map([](const GhzDiagonal& s) {
                                                   return connect_three(
                                                              s, s, s, 1.0,
                                                              ConnectMode::kProbabilistic)
                                                       .state;
                                                 }),
                                                 p);
  MbCycleResult r;
  GhzDiagonal state = elementary_state(q);
  r.elementary_fidelity = fidelity_of(state);
  try {
    for (int i = 0; i < m; ++i) state = p2(p1(state));
    state = connect(state);
  } catch (const DegenerateStateError&) {
    r.delta_fidelity = -r.elementary_fidelity;
    return r;
  }
  r.final_fidelity = fidelity_of(state);
  r.delta_fidelity = r.final_fidelity - r.elementary_fidelity;
  r.gain = r.delta_fidelity >= 0.0;
  return r;
}

std::string_view to_string(StorageStrategy s) {
  switch (s) {
    case StorageStrategy::kMultipartiteFull: return "multipartite-full";
    case StorageStrategy::kBipartiteFull: return "bipartite-full";
    case StorageStrategy::kBipartiteReduced: return "bipartite-reduced";
  }
  return "?";
}

StorageStrategy parse_storage_strategy(std::string_view text) {
  for (auto s : {StorageStrategy::kMultipartiteFull, StorageStrategy::kBipartiteFull,
                 StorageStrategy::kBipartiteReduced}) {
    if (text == to_string(s)) return s;
  }
  throw InputError("unknown storage strategy '" + std::string(text) + "'");
}

int storage_count(StorageStrategy strategy, int levels) {
  if (levels < 0) throw InputError("levels must be non-negative");
  switch (strategy) {
    case StorageStrategy::kMultipartiteFull: return 3 * levels;
    case StorageStrategy::kBipartiteFull: return 6 * levels;
    case StorageStrategy::kBipartiteReduced: return 4 * levels;
  }
  return 0;
}

}  // namespace qrep
