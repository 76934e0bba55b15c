#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "morphin/qtable.hpp"
#include "morphin/rng.hpp"

using morphin::QTable;
using morphin::Rng;

TEST_CASE("fresh table is all zeros") {
  QTable q(4, 81);
  for (int s = 0; s < 81; ++s)
    for (int a = 0; a < 4; ++a) CHECK(q.at(s, a) == 0.0);
  CHECK(q.action_count() == 4);
  CHECK(q.state_count() == 81);
}

TEST_CASE("read your write") {
  QTable q(4, 81);
  q.set(3, 1, 2.5);
  CHECK(q.at(3, 1) == 2.5);
  CHECK(q.at(3, 0) == 0.0);
}

TEST_CASE("bounds are enforced") {
  QTable q(4, 81);
  CHECK_THROWS_AS(q.at(0, 5), std::out_of_range);
  CHECK_THROWS_AS(q.at(81, 0), std::out_of_range);
  CHECK_THROWS_AS(q.at(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(q.set(0, 4, 1.0), std::out_of_range);
  CHECK_THROWS_AS(q.max_over_actions(81), std::out_of_range);
}

TEST_CASE("set rejects non-finite values") {
  QTable q(2, 2);
  CHECK_THROWS_AS(q.set(0, 0, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(q.set(0, 0, INFINITY), std::invalid_argument);
}

TEST_CASE("max over actions breaks ties toward the lowest index") {
  QTable q(4, 3);
  SUBCASE("all zeros") {
    const auto m = q.max_over_actions(1);
    CHECK(m.value == 0.0);
    CHECK(m.action == 0);
  }
  SUBCASE("first maximizer wins") {
    q.set(0, 0, 1.0);
    q.set(0, 1, 3.0);
    q.set(0, 2, 3.0);
    q.set(0, 3, -1.0);
    const auto m = q.max_over_actions(0);
    CHECK(m.value == 3.0);
    CHECK(m.action == 1);
  }
  SUBCASE("max of negatives") {
    QTable q2(2, 1);
    q2.set(0, 0, -5.0);
    q2.set(0, 1, -2.0);
    const auto m = q2.max_over_actions(0);
    CHECK(m.value == -2.0);
    CHECK(m.action == 1);
  }
  SUBCASE("repeated calls are deterministic") {
    q.set(2, 1, 7.0);
    q.set(2, 3, 7.0);
    const auto first = q.max_over_actions(2);
    for (int i = 0; i < 10; ++i) {
      const auto again = q.max_over_actions(2);
      CHECK(again.action == first.action);
      CHECK(again.value == first.value);
    }
  }
}

TEST_CASE("expansion preserves old rows exactly and zero-fills new ones") {
  QTable q(4, 81);
  Rng rng(20240811);
  for (int s = 0; s < 81; ++s)
    for (int a = 0; a < 4; ++a) q.set(s, a, rng.uniform01() * 200.0 - 100.0);
  QTable before = q;

  q.expand_actions(8);
  CHECK(q.action_count() == 8);
  for (int s = 0; s < 81; ++s) {
    for (int a = 0; a < 4; ++a) CHECK(q.at(s, a) == before.at(s, a));  // bitwise equal
    for (int a = 4; a < 8; ++a) CHECK(q.at(s, a) == 0.0);
  }
}

TEST_CASE("expansion requires strict growth") {
  QTable q(4, 81);
  CHECK_THROWS_AS(q.expand_actions(4), std::invalid_argument);
  CHECK_THROWS_AS(q.expand_actions(3), std::invalid_argument);
}

TEST_CASE("expansion property over random tables") {
  // Preservation for any growth, and argmax stability whenever the old
  // column max is positive (fresh zero rows cannot win).
  Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    const int actions = 1 + rng.uniform_below(6);
    const int states = 1 + rng.uniform_below(30);
    QTable q(actions, states);
    for (int s = 0; s < states; ++s)
      for (int a = 0; a < actions; ++a) q.set(s, a, rng.uniform01() * 20.0 - 10.0);
    const QTable before = q;
    const int growth = 1 + rng.uniform_below(4);
    q.expand_actions(actions + growth);

    for (int s = 0; s < states; ++s) {
      for (int a = 0; a < actions; ++a) REQUIRE(q.at(s, a) == before.at(s, a));
      for (int a = actions; a < actions + growth; ++a) REQUIRE(q.at(s, a) == 0.0);
      const auto old_max = before.max_over_actions(s);
      if (old_max.value > 0.0) {
        const auto new_max = q.max_over_actions(s);
        REQUIRE(new_max.value == old_max.value);
        REQUIRE(new_max.action == old_max.action);
      }
    }
  }
}

TEST_CASE("csv snapshot format") {
  QTable q(2, 3);
  q.set(0, 0, 1.0);
  q.set(2, 0, -0.5);
  q.set(1, 1, 2.25);
  std::ostringstream out;
  q.write_csv(out);
  CHECK(out.str() ==
        "state_0,state_1,state_2\n"
        "1.000000,0.000000,-0.500000\n"
        "0.000000,2.250000,0.000000\n");
}
