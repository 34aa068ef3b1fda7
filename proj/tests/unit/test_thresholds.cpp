#include <doctest.h>

#include <cmath>

#include "qrep/errors.hpp"
#include "qrep/thresholds.hpp"

using namespace qrep;

TEST_CASE("bisect_boundary") {
  const double x = bisect_boundary([](double v) { return v > 0.3; }, 0.0, 1.0, 1e-10);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-9));
  CHECK_THROWS_AS(bisect_boundary([](double) { return true; }, 0.0, 1.0, 1e-6), InputError);
  CHECK_THROWS_AS(bisect_boundary([](double) { return false; }, 0.0, 1.0, 1e-6), InputError);
}

TEST_CASE("distillability thresholds") {
  CHECK(std::abs(ldn_distillability_threshold(3) - 0.5567) <= 0.0005);
  CHECK(std::abs(bell_distillability_threshold() - 0.57735) <= 0.0005);
  // a Bell pair seen as a 2-qubit GHZ state agrees with the bipartite rule
  CHECK(ldn_distillability_threshold(2) == doctest::Approx(bell_distillability_threshold()).epsilon(1e-7));
}

TEST_CASE("repeater_cycle examples") {
  const CycleResult perfect = repeater_cycle(1.0, 1.0, Scheme::kAlternating);
  CHECK(perfect.sustained);
  CHECK(perfect.fixed_point_fidelity == doctest::Approx(1.0));
  CHECK(perfect.post_fidelity == doctest::Approx(1.0));
  CHECK(perfect.diagnostic.empty());

  const CycleResult low = repeater_cycle(0.95, 1.0, Scheme::kAlternating);
  CHECK_FALSE(low.sustained);
  CHECK_FALSE(low.diagnostic.empty());

  const CycleResult lw = repeater_cycle(0.97, 0.99, Scheme::kLw);
  CHECK(lw.sustained);
  CHECK(lw.post_fidelity >= lw.fixed_point_fidelity - kSustainTolerance);
  CHECK(lw.connect_success_prob > 0.0);
  CHECK(lw.connect_success_prob <= 1.0);

  // noisy channel far below the distillability limit never sustains
  const CycleResult mixed = repeater_cycle(0.99, 0.5, Scheme::kAlternating);
  CHECK_FALSE(mixed.sustained);
  CHECK_FALSE(mixed.pre_distillable);

  CHECK_THROWS_AS(repeater_cycle(1.2, 1.0, Scheme::kMlf), InputError);
}

TEST_CASE("sustained is monotone in p at q = 1") {
  for (Scheme s : {Scheme::kAlternating, Scheme::kMlf, Scheme::kLw}) {
    bool was = false;
    for (int i = 0; i <= 50; ++i) {
      const double p = 0.93 + 0.0014 * i;
      const bool now = repeater_cycle(p, 1.0, s).sustained;
      CAPTURE(to_string(s));
      CAPTURE(p);
      CHECK((now || !was));
      was = now;
    }
    CHECK(was);
  }
}

TEST_CASE("gate thresholds") {
  CHECK(std::abs(gate_threshold(Scheme::kAlternating) - 0.9581) <= 0.002);
  CHECK(std::abs(gate_threshold(Scheme::kMlf) - 0.9554) <= 0.002);
  CHECK(std::abs(gate_threshold(Scheme::kLw) - 0.9490) <= 0.002);
}

TEST_CASE("q_min curve") {
  const std::vector<double> grid{0.94, 0.96, 0.97, 0.98, 0.99, 1.0};
  for (Scheme s : {Scheme::kAlternating, Scheme::kMlf, Scheme::kLw}) {
    const ThresholdCurve c = q_min_curve(grid, s, 1e-4, true);
    REQUIRE(c.samples.size() == grid.size());
    REQUIRE(c.p_th);
    std::optional<double> prev;
    for (const ThresholdSample& sample : c.samples) {
      CAPTURE(to_string(s));
      CAPTURE(sample.p);
      if (sample.p < *c.p_th) {
        CHECK_FALSE(sample.q_min);
        continue;
      }
      // grid points just above p_th may still fail the q = 1 test by round-off
      if (!sample.q_min) continue;
      if (prev) CHECK(*sample.q_min <= *prev + 1e-4);
      prev = sample.q_min;
    }
    REQUIRE(c.samples.back().q_min);
    CHECK(*c.samples.back().q_min >= 0.5567 - 0.01);
  }
}

TEST_CASE("q_min at p = 1 approaches the distillability limit") {
  double best = 1.0;
  for (Scheme s : {Scheme::kAlternating, Scheme::kMlf, Scheme::kLw}) {
    const ThresholdCurve c = q_min_curve({1.0}, s);
    REQUIRE(c.samples[0].q_min);
    best = std::min(best, *c.samples[0].q_min);
  }
  CHECK(best >= 0.5567 - 0.01);
  CHECK(best <= 0.5567 + 0.01);
}

TEST_CASE("q_min at p = 0.98 matches a fine grid search") {
  const ThresholdCurve c = q_min_curve({0.98}, Scheme::kAlternating, 1e-5);
  REQUIRE(c.samples[0].q_min);
  const double q_min = *c.samples[0].q_min;
  // first sustained point on a 1e-3 grid, and sustained everywhere above it
  double first = 2.0;
  for (int i = 0; i <= 500; ++i) {
    const double q = 0.5 + 0.001 * i;
    const bool ok = repeater_cycle(0.98, q, Scheme::kAlternating).sustained;
    if (ok && first > 1.5) first = q;
    if (first < 1.5) CHECK(ok);
  }
  CHECK(q_min <= first + 1e-5);
  CHECK(q_min > first - 0.001 - 1e-5);
}

TEST_CASE("channel threshold after connection levels") {
  // with perfect gates no connection level needs a cleaner channel than
  // the bare distillability limit, and more levels need a cleaner one
  const double one = channel_threshold_after_levels(1, 1.0);
  const double two = channel_threshold_after_levels(2, 1.0);
  CHECK(one >= ldn_distillability_threshold(3) - 1e-6);
  CHECK(two >= one);
  CHECK(channel_threshold_after_levels(1, 0.99) > one);
}

TEST_CASE("measurement-based thresholds") {
  CHECK(std::abs(mb_asymptotic_threshold() - 0.7461) <= 0.0005);
  CHECK(mb_asymptotic_threshold(1.0) == 1.0);
  CHECK(mb_asymptotic_threshold(1.0 / std::sqrt(3.0)) == doctest::Approx(std::pow(3.0, -0.25)));

  const MbCycleResult ideal = mb_finite_cycle(1.0, 0.9, 1);
  CHECK(ideal.gain);
  CHECK(ideal.delta_fidelity > 0.0);
  CHECK(ideal.final_fidelity == doctest::Approx(ideal.elementary_fidelity + ideal.delta_fidelity));
  for (double q : {0.6, 0.8, 0.95, 1.0}) CHECK_FALSE(mb_finite_cycle(0.5, q, 2).gain);
  CHECK_THROWS_AS(mb_finite_cycle(0.99, 0.9, 0), InputError);
}

TEST_CASE("more MB purification steps extend the gain region") {
  // at q = 0.95, sweep p and find the lowest gaining p for m = 1 and m = 3
  auto lowest = [](int m) {
    double best = 2.0;
    for (int i = 0; i <= 200; ++i) {
      const double p = 0.95 + 0.00025 * i;
      if (mb_finite_cycle(p, 0.95, m).gain) best = std::min(best, p);
    }
    return best;
  };
  const double m1 = lowest(1), m3 = lowest(3);
  CHECK(m1 <= 1.0);
  CHECK(m3 < m1);

  // and at fixed p the lowest gaining q drops with m
  auto lowest_q = [](int m) {
    double best = 2.0;
    for (int i = 0; i <= 100; ++i) {
      const double q = 0.5 + 0.005 * i;
      if (mb_finite_cycle(0.995, q, m).gain) best = std::min(best, q);
    }
    return best;
  };
  CHECK(lowest_q(3) < lowest_q(1));
}

TEST_CASE("storage counts") {
  CHECK(storage_count(StorageStrategy::kMultipartiteFull, 5) == 15);
  CHECK(storage_count(StorageStrategy::kBipartiteFull, 1) == 6);
  CHECK(storage_count(StorageStrategy::kBipartiteReduced, 3) == 12);
  for (auto s : {StorageStrategy::kMultipartiteFull, StorageStrategy::kBipartiteFull,
                 StorageStrategy::kBipartiteReduced}) {
    CHECK(storage_count(s, 0) == 0);
    CHECK(parse_storage_strategy(to_string(s)) == s);
  }
  CHECK_THROWS_AS(storage_count(StorageStrategy::kBipartiteFull, -1), InputError);
  CHECK_THROWS_AS(parse_storage_strategy("tripartite"), InputError);
}
