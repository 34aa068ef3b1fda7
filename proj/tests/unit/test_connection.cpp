#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrep/connection.hpp"
#include "qrep/errors.hpp"

using namespace qrep;

namespace {

using BL = BellLabel;

double max_diff(const GhzDiagonal& a, const GhzDiagonal& b) { return a.max_abs_difference(b); }

}  // namespace

TEST_CASE("correction table rows") {
  // Psi positions -> X position on the output (0,1,2 = qubits 0,3,6).
  const auto& psi_psi_phi = correction_rule({BL::PsiPlus, BL::PsiMinus, BL::PhiPlus});
  CHECK(psi_psi_phi.accepted);
  CHECK(psi_psi_phi.x_candidates == std::vector<int>{0});
  CHECK(correction_rule({BL::PsiPlus, BL::PhiPlus, BL::PsiPlus}).x_candidates ==
        std::vector<int>{1});
  CHECK(correction_rule({BL::PhiMinus, BL::PsiPlus, BL::PsiPlus}).x_candidates ==
        std::vector<int>{2});
  CHECK(correction_rule({BL::PhiPlus, BL::PhiMinus, BL::PhiPlus}).x_candidates.empty());
  CHECK(correction_rule({BL::PhiPlus, BL::PhiMinus, BL::PhiPlus}).accepted);

  const auto& all_psi = correction_rule({BL::PsiPlus, BL::PsiPlus, BL::PsiMinus});
  CHECK_FALSE(all_psi.accepted);
  CHECK(all_psi.x_candidates == std::vector<int>{0, 1, 2});
  for (int single = 0; single < 3; ++single) {
    std::array<BellLabel, 3> o{BL::PhiPlus, BL::PhiPlus, BL::PhiPlus};
    o[static_cast<std::size_t>(single)] = BL::PsiPlus;
    CHECK_FALSE(correction_rule(o).accepted);
  }
}

TEST_CASE("phase correction follows the number of minus outcomes") {
  CHECK_FALSE(needs_phase_correction({BL::PhiPlus, BL::PsiPlus, BL::PhiPlus}));
  CHECK(needs_phase_correction({BL::PhiMinus, BL::PsiPlus, BL::PhiPlus}));
  CHECK_FALSE(needs_phase_correction({BL::PhiMinus, BL::PsiMinus, BL::PhiPlus}));
  CHECK(needs_phase_correction({BL::PhiMinus, BL::PsiMinus, BL::PsiMinus}));
}

TEST_CASE("perfect inputs connect to a perfect GHZ state") {
  const GhzDiagonal ghz = GhzDiagonal::perfect(3);
  for (auto mode : {ConnectMode::kProbabilistic, ConnectMode::kDeterministic}) {
    const ConnectResult r = connect_three(ghz, ghz, ghz, 1.0, mode);
    CHECK(fidelity_of(r.state) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.success_prob == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.mode == mode);
  }
  const oracle::ConnectOracle o =
      oracle::connect_three(ghz, ghz, ghz, 1.0, ConnectMode::kDeterministic);
  CHECK(o.odd_psi_prob < 1e-12);
  CHECK(fidelity_of(o.state) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("connect_three matches the nine-qubit simulation") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> pdist(0.6, 1.0);
  for (int i = 0; i < 60; ++i) {
    const GhzDiagonal a = oracle::random_ghz_diagonal(3, rng);
    const GhzDiagonal b = oracle::random_ghz_diagonal(3, rng);
    const GhzDiagonal c = oracle::random_ghz_diagonal(3, rng);
    const double p = pdist(rng);
    const auto mode = i % 2 ? ConnectMode::kDeterministic : ConnectMode::kProbabilistic;
    const ConnectResult fast = connect_three(a, b, c, p, mode);
    const oracle::ConnectOracle slow = oracle::connect_three(a, b, c, p, mode);
    CAPTURE(i);
    CHECK(max_diff(fast.state, slow.state) < 1e-10);
    CHECK(std::abs(fast.success_prob - slow.success_prob) < 1e-10);
  }
}

TEST_CASE("odd Psi patterns get probability from noise only") {
  const GhzDiagonal noisy = elementary_state(0.9);
  const auto o = oracle::connect_three(noisy, noisy, noisy, 0.95, ConnectMode::kDeterministic);
  CHECK(o.odd_psi_prob > 1e-3);
  const ConnectResult r = connect_three(noisy, noisy, noisy, 0.95, ConnectMode::kProbabilistic);
  CHECK(r.success_prob == doctest::Approx(1.0 - o.odd_psi_prob).epsilon(1e-12));
}

TEST_CASE("connect_three input validation") {
  const GhzDiagonal g3 = GhzDiagonal::perfect(3);
  const GhzDiagonal g4 = GhzDiagonal::perfect(4);
  CHECK_THROWS_AS(connect_three(g3, g4, g3, 1.0, ConnectMode::kProbabilistic), InputError);
  CHECK_THROWS_AS(connect_three(g3, g3, g3, 1.5, ConnectMode::kProbabilistic), InputError);
  CHECK_THROWS_AS(connect_three(g3, g3, g3, -0.1, ConnectMode::kProbabilistic), InputError);
}

TEST_CASE("merge_ghz matches the CNOT and readout circuit") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(2, 3);
  std::uniform_real_distribution<double> pdist(0.5, 1.0);
  for (int i = 0; i < 40; ++i) {
    const GhzDiagonal s1 = oracle::random_ghz_diagonal(size(rng), rng);
    const GhzDiagonal s2 = oracle::random_ghz_diagonal(size(rng), rng);
    const double p = pdist(rng);
    for (auto v : {MergeVariant::kMerge, MergeVariant::kProject}) {
      CAPTURE(i);
      const GhzDiagonal fast = merge_ghz(s1, s2, v, p);
      const GhzDiagonal slow = oracle::merge(s1, s2, v, p);
      REQUIRE(fast.n_qubits() == slow.n_qubits());
      CHECK(max_diff(fast, slow) < 1e-10);
    }
  }
}

TEST_CASE("merging two noisy GHZ3 states") {
  const GhzDiagonal s = elementary_state(0.95);
  const GhzDiagonal merged = merge_ghz(s, s, MergeVariant::kMerge, 1.0);
  CHECK(merged.n_qubits() == 5);
  // 5-qubit density-matrix value of the same circuit
  CHECK(fidelity_of(merged) == doctest::Approx(0.7970945781249993).epsilon(1e-12));
  const GhzDiagonal projected = merge_ghz(s, s, MergeVariant::kProject, 1.0);
  CHECK(projected.n_qubits() == 4);
}

TEST_CASE("merge_ghz size limits") {
  const GhzDiagonal big = GhzDiagonal::perfect(7);
  CHECK_THROWS_AS(merge_ghz(big, big, MergeVariant::kMerge, 1.0), InputError);
  const GhzDiagonal one = GhzDiagonal::perfect(1);
  CHECK_THROWS_AS(merge_ghz(one, one, MergeVariant::kProject, 1.0), InputError);
  CHECK(merge_ghz(GhzDiagonal::perfect(6), GhzDiagonal::perfect(6), MergeVariant::kMerge, 1.0)
            .n_qubits() == 11);
}

TEST_CASE("elementary state is GHZ3 under per-qubit LDN") {
  const double q = 0.83;
  GhzDiagonal expected = GhzDiagonal::perfect(3);
  for (int j = 0; j < 3; ++j) expected = oracle::ldn(expected, q, j);
  CHECK(max_diff(elementary_state(q), expected) < 1e-12);
  CHECK_THROWS_AS(elementary_state(1.2), InputError);
}

TEST_CASE("connection success probabilities over several levels") {
  // p = q, elementary inputs, n connections before any purification.
  struct Row {
    double pq;
    std::vector<double> percent;
  };
  const std::vector<Row> rows{{0.98, {89.24, 88.48, 87.61}},
                              {0.99, {94.32, 94.12, 93.87, 93.63}},
                              {0.995, {97.08, 97.02, 96.97, 96.90, 96.84}}};
  for (const Row& row : rows) {
    const auto n = static_cast<int>(row.percent.size());
    const LevelsResult r =
        connect_n_levels(elementary_state(row.pq), row.pq, n, ConnectMode::kProbabilistic);
    REQUIRE(r.level_success.size() == row.percent.size());
    double joint = 1.0;
    for (std::size_t l = 0; l < row.percent.size(); ++l) {
      CAPTURE(row.pq);
      CAPTURE(l);
      CHECK(std::abs(100.0 * r.level_success[l] - row.percent[l]) <= 0.02);  // table rounding, one entry is 0.015 off
      joint *= std::pow(r.level_success[l], std::pow(3.0, n - 1 - static_cast<double>(l)));
    }
    CHECK(r.joint_success == doctest::Approx(joint).epsilon(1e-12));
  }
  CHECK_THROWS_AS(connect_n_levels(elementary_state(0.9), 0.9, 0, ConnectMode::kProbabilistic),
                  InputError);
}

TEST_CASE("deterministic connection never rejects") {
  const GhzDiagonal s = elementary_state(0.9);
  const ConnectResult r = connect_three(s, s, s, 0.9, ConnectMode::kDeterministic);
  CHECK(r.success_prob == doctest::Approx(1.0).epsilon(1e-14));
  const ConnectResult pr = connect_three(s, s, s, 0.9, ConnectMode::kProbabilistic);
  CHECK(fidelity_of(pr.state) > fidelity_of(r.state));
}

TEST_CASE("max_distance") {
  CHECK(max_distance(1.0, 0.5).distance == 0);
  const DistanceResult perfect = max_distance(1.0, 1.0, 10);
  CHECK(perfect.unbounded);
  CHECK(perfect.distance == 1024);
  const DistanceResult noisy = max_distance(0.99, 0.99);
  CHECK_FALSE(noisy.unbounded);
  CHECK(noisy.distance == (std::uint64_t{1} << noisy.levels));
  // one more level must break distillability
  LevelsResult beyond = connect_n_levels(elementary_state(0.99), 0.99, noisy.levels + 1,
                                         ConnectMode::kProbabilistic);
  CHECK_FALSE(is_distillable(beyond.state));
  CHECK_THROWS_AS(max_distance(0.9, 0.9, 0), InputError);
}
