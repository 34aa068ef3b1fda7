#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrep/connection.hpp"
#include "qrep/errors.hpp"
#include "qrep/purification.hpp"

using namespace qrep;

namespace {

GhzDiagonal per_qubit_ldn(double q0, double q1, double q2) {
  return ldn_coeff_update(
      ldn_coeff_update(ldn_coeff_update(GhzDiagonal::perfect(3), q0, 0), q1, 1), q2, 2);
}

GhzDiagonal labelled(std::vector<std::pair<std::size_t, double>> entries) {
  std::vector<double> c(8, 0.0);
  for (auto [i, w] : entries) c[i] = w;
  return GhzDiagonal::from_coefficients(3, c);
}

}  // namespace

TEST_CASE("perfect input is a fixed point of both subprotocols") {
  const GhzDiagonal ghz = GhzDiagonal::perfect(3);
  for (auto proto : {Subprotocol::kP1, Subprotocol::kP2}) {
    const PurifyStep step = purify_step(ghz, proto, 1.0);
    CHECK(step.protocol == proto);
    CHECK(step.success_prob == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity_of(step.state_out) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("P1 and P2 match the six-qubit circuit") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pdist(0.5, 1.0);
  for (int i = 0; i < 100; ++i) {
    const GhzDiagonal s = oracle::random_ghz_diagonal(3, rng);
    const double p = pdist(rng);
    for (auto proto : {Subprotocol::kP1, Subprotocol::kP2}) {
      CAPTURE(i);
      const PurifyStep fast = purify_step(s, proto, p);
      const PurifyStep slow = oracle::purify(s, proto, p);
      CHECK(fast.state_out.max_abs_difference(slow.state_out) < 1e-10);
      CHECK(std::abs(fast.success_prob - slow.success_prob) < 1e-10);
      CHECK(fast.success_prob > 0.0);
      CHECK(fast.success_prob <= 1.0);
    }
  }
}

TEST_CASE("P1 amplifies mu_A = 0, P2 amplifies mu_B = 0") {
  // sign errors only: P1 suppresses them
  const GhzDiagonal sign = labelled({{0, 0.8}, {4, 0.2}});
  CHECK(p1_step(sign, 1.0).state_out[0] > 0.8);
  CHECK(p2_step(sign, 1.0).state_out[0] < 0.8);
  // flip errors only: P2 suppresses them
  const GhzDiagonal flip = labelled({{0, 0.8}, {1, 0.1}, {2, 0.1}});
  CHECK(p2_step(flip, 1.0).state_out[0] > 0.8);
  CHECK(p1_step(flip, 1.0).state_out[0] < 0.8);
}

TEST_CASE("one round raises the fidelity of LDN-noised GHZ3 at p=1") {
  const GhzDiagonal s = elementary_state(0.9);
  const GhzDiagonal round = p2_step(p1_step(s, 1.0).state_out, 1.0).state_out;
  CHECK(fidelity_of(round) > fidelity_of(s));
  const GhzDiagonal oracle_round =
      oracle::purify(oracle::purify(s, Subprotocol::kP1, 1.0).state_out, Subprotocol::kP2, 1.0)
          .state_out;
  CHECK(round.max_abs_difference(oracle_round) < 1e-10);
}

TEST_CASE("property: P2,P1 round raises fidelity of distillable per-qubit LDN states") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> qdist(0.5, 1.0);
  int tested = 0;
  for (int i = 0; i < 3000; ++i) {
    const GhzDiagonal s = per_qubit_ldn(qdist(rng), qdist(rng), qdist(rng));
    if (!is_distillable(s)) continue;
    ++tested;
    const GhzDiagonal out = p1_step(p2_step(s, 1.0).state_out, 1.0).state_out;
    CAPTURE(i);
    CHECK(fidelity_of(out) > fidelity_of(s));
  }
  CHECK(tested > 1000);
}

TEST_CASE("property: P1,P2 round raises fidelity of uniform LDN states with q >= 0.63") {
  for (double q = 0.63; q < 0.9999; q += 0.005) {
    const GhzDiagonal s = elementary_state(q);
    const GhzDiagonal out = p2_step(p1_step(s, 1.0).state_out, 1.0).state_out;
    CAPTURE(q);
    CHECK(fidelity_of(out) > fidelity_of(s));
  }
  // Closer to the distillability threshold the P1-first round loses
  // fidelity even though the state is distillable.
  const GhzDiagonal low = elementary_state(0.56);
  REQUIRE(is_distillable(low));
  CHECK(fidelity_of(p2_step(p1_step(low, 1.0).state_out, 1.0).state_out) < fidelity_of(low));
}

TEST_CASE("maximally mixed input does not purify") {
  const FixedPointResult r =
      purify_to_fixed_point(GhzDiagonal::maximally_mixed(3), 1.0, Scheme::kAlternating);
  CHECK(r.converged);
  CHECK(fidelity_of(r.state) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("choose_protocol") {
  const GhzDiagonal ghz = GhzDiagonal::perfect(3);
  SUBCASE("alternating toggles, starting with P1") {
    CHECK(choose_protocol(ghz, 1.0, Scheme::kAlternating, std::nullopt) == Subprotocol::kP1);
    CHECK(choose_protocol(ghz, 1.0, Scheme::kAlternating, Subprotocol::kP1) ==
          Subprotocol::kP2);
    CHECK(choose_protocol(ghz, 1.0, Scheme::kAlternating, Subprotocol::kP2) ==
          Subprotocol::kP1);
  }
  SUBCASE("LW tie goes to P1") {
    CHECK(choose_protocol(ghz, 1.0, Scheme::kLw, std::nullopt) == Subprotocol::kP1);
    const GhzDiagonal tie = labelled({{0, 0.5}, {4, 0.25}, {3, 0.25}});
    CHECK(choose_protocol(tie, 1.0, Scheme::kLw, Subprotocol::kP1) == Subprotocol::kP1);
  }
  SUBCASE("LW picks P2 when the weight sits on mu_B errors") {
    const GhzDiagonal flips = labelled({{0, 0.6}, {1, 0.2}, {2, 0.2}});
    CHECK(choose_protocol(flips, 1.0, Scheme::kLw, std::nullopt) == Subprotocol::kP2);
    const GhzDiagonal signs = labelled({{0, 0.6}, {4, 0.4}});
    CHECK(choose_protocol(signs, 1.0, Scheme::kLw, std::nullopt) == Subprotocol::kP1);
  }
  SUBCASE("MLF matches evaluating both branches") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pdist(0.8, 1.0);
    for (int i = 0; i < 300; ++i) {
      const GhzDiagonal s = oracle::random_ghz_diagonal(3, rng);
      const double p = pdist(rng);
      const double f1 = fidelity_of(oracle::purify(s, Subprotocol::kP1, p).state_out);
      const double f2 = fidelity_of(oracle::purify(s, Subprotocol::kP2, p).state_out);
      if (std::abs(f1 - f2) < 1e-9) continue;
      CHECK(choose_protocol(s, p, Scheme::kMlf, std::nullopt) ==
            (f1 > f2 ? Subprotocol::kP1 : Subprotocol::kP2));
    }
  }
}

TEST_CASE("fixed point iteration") {
  SUBCASE("perfect input converges at once") {
    for (auto scheme : {Scheme::kAlternating, Scheme::kMlf, Scheme::kLw}) {
      const FixedPointResult r = purify_to_fixed_point(GhzDiagonal::perfect(3), 1.0, scheme);
      CHECK(r.converged);
      CHECK(r.trajectory.size() <= 2);
      CHECK(fidelity_of(r.state) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("noiseless gates purify LDN(0.9) inputs towards 1") {
    const FixedPointResult r =
        purify_to_fixed_point(elementary_state(0.9), 1.0, Scheme::kAlternating);
    CHECK(r.converged);
    CHECK(fidelity_of(r.state) > 0.99);
    CHECK(r.trajectory.size() % 2 == 0);  // complete rounds only
    CHECK(r.trajectory.back().protocol == Subprotocol::kP2);
    for (const auto& t : r.trajectory) {
      CHECK(t.success_prob > 0.0);
      CHECK(t.success_prob <= 1.0);
    }
  }
  SUBCASE("noisy gates stop short of 1") {
    const FixedPointResult r =
        purify_to_fixed_point(elementary_state(0.9), 0.99, Scheme::kAlternating);
    CHECK(r.converged);
    CHECK(fidelity_of(r.state) < 0.99);
    CHECK(fidelity_of(r.state) > fidelity_of(elementary_state(0.9)));
  }
  SUBCASE("non-convergence is flagged with a partial trajectory") {
    const FixedPointResult r = purify_to_fixed_point(elementary_state(0.9), 1.0,
                                                     Scheme::kAlternating, {1e-12, 3});
    CHECK_FALSE(r.converged);
    CHECK(r.trajectory.size() == 3);
  }
  SUBCASE("bad options") {
    CHECK_THROWS_AS(purify_to_fixed_point(elementary_state(0.9), 1.0, Scheme::kLw, {0.0, 10}),
                    InputError);
    CHECK_THROWS_AS(purify_to_fixed_point(elementary_state(0.9), 1.0, Scheme::kLw, {1e-9, 0}),
                    InputError);
  }
}

TEST_CASE("property: adaptive schemes reach at least the alternating fixed point") {
  for (double q : {0.7, 0.8, 0.9, 0.95}) {
    for (double p : {0.97, 0.98, 0.99, 0.995, 1.0}) {
      const GhzDiagonal s = elementary_state(q);
      const FixedPointResult alt = purify_to_fixed_point(s, p, Scheme::kAlternating);
      if (!alt.converged || !is_distillable(alt.state)) continue;
      CAPTURE(q);
      CAPTURE(p);
      for (auto scheme : {Scheme::kMlf, Scheme::kLw}) {
        const FixedPointResult r = purify_to_fixed_point(s, p, scheme);
        CHECK(r.converged);
        CHECK(fidelity_of(r.state) >= fidelity_of(alt.state) - 1e-9);
      }
    }
  }
}

TEST_CASE("bicoloring") {
  const Bicoloring star = star_bicoloring(3);
  CHECK(star.a == std::vector<int>{0});
  CHECK(star.b == std::vector<int>{1, 2});
  const auto edges = star_edges(3);
  CHECK_NOTHROW(star.validate(3, edges));
  const Bicoloring bad{{0, 1}, {2}};
  CHECK_THROWS_AS(bad.validate(3, edges), InputError);
  const Bicoloring missing{{0}, {1}};
  CHECK_THROWS_AS(missing.validate(3, edges), InputError);
  const Bicoloring twice{{0, 1}, {1, 2}};
  CHECK_THROWS_AS(twice.validate(3, edges), InputError);
}

TEST_CASE("scheme names") {
  CHECK(parse_scheme("alternating") == Scheme::kAlternating);
  CHECK(parse_scheme("mlf") == Scheme::kMlf);
  CHECK(parse_scheme("lw") == Scheme::kLw);
  CHECK_THROWS_AS(parse_scheme("greedy"), InputError);
  CHECK(to_string(Subprotocol::kP2) == "P2");
}

TEST_CASE("DEJMPS matches the four-qubit circuit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pdist(0.6, 1.0);
  for (int i = 0; i < 200; ++i) {
    const BellDiagonal b = oracle::random_bell_diagonal(rng);
    const double p = pdist(rng);
    const DejmpsResult fast = dejmps_step(b, p);
    const DejmpsResult slow = oracle::dejmps(b, p);
    CAPTURE(i);
    CHECK(std::abs(fast.state.phi_plus - slow.state.phi_plus) < 1e-10);
    CHECK(std::abs(fast.state.phi_minus - slow.state.phi_minus) < 1e-10);
    CHECK(std::abs(fast.state.psi_plus - slow.state.psi_plus) < 1e-10);
    CHECK(std::abs(fast.state.psi_minus - slow.state.psi_minus) < 1e-10);
    CHECK(std::abs(fast.success_prob - slow.success_prob) < 1e-10);
  }
}

TEST_CASE("DEJMPS on Werner states") {
  const DejmpsResult perfect = dejmps_step(BellDiagonal{}, 1.0);
  CHECK(perfect.state.fidelity() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(perfect.success_prob == doctest::Approx(1.0).epsilon(1e-14));

  const DejmpsResult w7 = dejmps_step(BellDiagonal::werner(0.7), 1.0);
  CHECK(w7.state.fidelity() == doctest::Approx(0.7352941176470589).epsilon(1e-12));
  CHECK(w7.success_prob == doctest::Approx(0.68).epsilon(1e-12));

  const DejmpsResult w5 = dejmps_step(BellDiagonal::werner(0.5), 1.0);
  CHECK(w5.state.fidelity() <= 0.5 + 1e-12);

  BellDiagonal zero{0.0, 0.0, 0.5, 0.5};
  CHECK_NOTHROW(dejmps_step(zero, 1.0));
  CHECK_THROWS_AS(dejmps_step(BellDiagonal{0.5, 0.0, 0.0, 0.0}, 1.0), InputError);
}
