#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "morphin/drift.hpp"
#include "morphin/rng.hpp"
#include "oracle_helpers.hpp"

using morphin::DriftDirection;
using morphin::PageHinkleyConfig;
using morphin::PageHinkleyDetector;
using morphin::Rng;

namespace {

oracle::PhDirection to_oracle(DriftDirection d) {
  switch (d) {
    case DriftDirection::decrease_only: return oracle::PhDirection::decrease;
    case DriftDirection::increase_only: return oracle::PhDirection::increase;
    default: return oracle::PhDirection::both;
  }
}

// Runs the incremental detector and returns per-step state snapshots plus
// the first alarm index.
struct IncrementalRun {
  std::vector<oracle::PhSnapshot> snaps;
  std::optional<std::size_t> first_alarm;
};

IncrementalRun run_incremental(const std::vector<double>& xs, const PageHinkleyConfig& cfg) {
  PageHinkleyDetector det(cfg);
  IncrementalRun run;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool drift = det.update(xs[i]);
    const auto& s = det.state();
    run.snaps.push_back({s.running_mean, s.cum_dec, s.cum_inc, drift});
    if (drift && !run.first_alarm) run.first_alarm = i;
  }
  return run;
}

}  // namespace

TEST_CASE("constant stream never fires") {
  PageHinkleyConfig cfg;
  cfg.delta = 0.0;
  cfg.threshold_h = 300.0;
  PageHinkleyDetector det(cfg);
  for (int i = 0; i < 1000; ++i) CHECK_FALSE(det.update(10.0));
  CHECK(det.state().cum_dec == 0.0);
  CHECK(det.state().cum_inc == 0.0);
  CHECK(det.state().running_mean == doctest::Approx(10.0));
}

TEST_CASE("step change fires where the from-scratch oracle says") {
  PageHinkleyConfig cfg;
  cfg.delta = 0.5;
  cfg.threshold_h = 300.0;
  cfg.direction = DriftDirection::decrease_only;
  cfg.min_samples = 30;

  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(100.0);
  for (int i = 0; i < 200; ++i) xs.push_back(0.0);

  const auto oracle_snaps = oracle::ph_replay(xs, cfg.delta, cfg.threshold_h, cfg.min_samples,
                                              to_oracle(cfg.direction));
  const auto oracle_alarm = oracle::ph_first_alarm(oracle_snaps);
  REQUIRE(oracle_alarm.has_value());
  CHECK(*oracle_alarm >= 200);  // only after the drop

  const auto run = run_incremental(xs, cfg);
  REQUIRE(run.first_alarm.has_value());
  CHECK(*run.first_alarm == *oracle_alarm);
}

TEST_CASE("gridworld-scale reward collapse is detected inside the post-drift window") {
  // Episode rewards near +100 collapsing to large negatives after a goal
  // relocation; delta=0.5, H=300.
  PageHinkleyConfig cfg;
  cfg.delta = 0.5;
  cfg.threshold_h = 300.0;
  cfg.direction = DriftDirection::decrease_only;

  Rng rng(99);
  std::vector<double> xs;
  for (int i = 0; i < 300; ++i) xs.push_back(92.0 + 4.0 * rng.uniform01());
  for (int i = 0; i < 50; ++i) xs.push_back(-350.0 + 100.0 * rng.uniform01());

  const auto run = run_incremental(xs, cfg);
  REQUIRE(run.first_alarm.has_value());
  CHECK(*run.first_alarm >= 300);
  CHECK(*run.first_alarm < 310);
}

TEST_CASE("incremental detector matches the from-scratch oracle on random streams") {
  Rng rng(0xD1F7);
  for (int round = 0; round < 120; ++round) {
    const int length = 20 + rng.uniform_below(300);
    const double level = -100.0 + 200.0 * rng.uniform01();
    const double shift = -150.0 + 300.0 * rng.uniform01();
    const int change_at = rng.uniform_below(length);
    std::vector<double> xs;
    xs.reserve(length);
    for (int i = 0; i < length; ++i) {
      const double base = i < change_at ? level : level + shift;
      xs.push_back(base + 20.0 * (rng.uniform01() - 0.5));
    }

    PageHinkleyConfig cfg;
    cfg.delta = rng.uniform01();
    cfg.threshold_h = 50.0 + 200.0 * rng.uniform01();
    cfg.min_samples = rng.uniform_below(40);
    cfg.direction = static_cast<DriftDirection>(rng.uniform_below(3));

    const auto oracle_snaps = oracle::ph_replay(xs, cfg.delta, cfg.threshold_h, cfg.min_samples,
                                                to_oracle(cfg.direction));
    const auto run = run_incremental(xs, cfg);
    REQUIRE(run.snaps.size() == oracle_snaps.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      REQUIRE(std::fabs(run.snaps[i].mean - oracle_snaps[i].mean) <= 1e-9);
      REQUIRE(std::fabs(run.snaps[i].cum_dec - oracle_snaps[i].cum_dec) <= 1e-9);
      REQUIRE(std::fabs(run.snaps[i].cum_inc - oracle_snaps[i].cum_inc) <= 1e-9);
      REQUIRE(run.snaps[i].alarm == oracle_snaps[i].alarm);
    }
  }
}

TEST_CASE("lowering H can only make the first alarm earlier") {
  Rng rng(4242);
  for (int round = 0; round < 40; ++round) {
    std::vector<double> xs;
    for (int i = 0; i < 150; ++i) xs.push_back(50.0 + 10.0 * (rng.uniform01() - 0.5));
    for (int i = 0; i < 150; ++i) xs.push_back(-20.0 + 10.0 * (rng.uniform01() - 0.5));

    PageHinkleyConfig strict;
    strict.delta = 0.5;
    strict.direction = DriftDirection::decrease_only;
    strict.threshold_h = 100.0 + 400.0 * rng.uniform01();
    PageHinkleyConfig loose = strict;
    loose.threshold_h = strict.threshold_h * rng.uniform01();

    const auto strict_alarm = run_incremental(xs, strict).first_alarm;
    const auto loose_alarm = run_incremental(xs, loose).first_alarm;
    if (strict_alarm.has_value()) {
      REQUIRE(loose_alarm.has_value());
      REQUIRE(*loose_alarm <= *strict_alarm);
    }
  }
}

TEST_CASE("no alarms during the warm-up window") {
  PageHinkleyConfig cfg;
  cfg.delta = 0.0;
  cfg.threshold_h = 1.0;  // trigger-happy on purpose
  cfg.min_samples = 25;
  cfg.direction = DriftDirection::two_sided;
  PageHinkleyDetector det(cfg);
  Rng rng(5);
  for (int i = 0; i < 25; ++i) CHECK_FALSE(det.update(1000.0 * (rng.uniform01() - 0.5)));
}

TEST_CASE("reset restores a fresh detector") {
  PageHinkleyConfig cfg;
  cfg.threshold_h = 10.0;
  cfg.min_samples = 0;
  PageHinkleyDetector det(cfg);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) det.update(rng.uniform01() * 500.0);
  det.reset();
  CHECK(det.state().sample_count == 0);
  CHECK(det.state().running_mean == 0.0);
  CHECK(det.state().cum_dec == 0.0);
  CHECK(det.state().cum_inc == 0.0);

  SUBCASE("post-reset constant stream stays quiet") {
    for (int i = 0; i < 200; ++i) CHECK_FALSE(det.update(7.0));
  }
  SUBCASE("reset is idempotent") {
    det.reset();
    CHECK(det.state().sample_count == 0);
    CHECK(det.state().running_mean == 0.0);
    CHECK(det.state().cum_dec == 0.0);
    CHECK(det.state().cum_inc == 0.0);
  }
}

TEST_CASE("non-finite observations are rejected") {
  PageHinkleyDetector det(PageHinkleyConfig{});
  CHECK_THROWS_AS(det.update(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(det.update(INFINITY), std::invalid_argument);
}

TEST_CASE("config invariants") {
  PageHinkleyConfig cfg;
  cfg.threshold_h = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.threshold_h = 10.0;
  cfg.delta = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("direction names round-trip") {
  for (auto d : {DriftDirection::decrease_only, DriftDirection::increase_only,
                 DriftDirection::two_sided})
    CHECK(morphin::drift_direction_from_string(morphin::to_string(d)) == d);
  CHECK_THROWS_AS(morphin::drift_direction_from_string("sideways"), std::invalid_argument);
}
