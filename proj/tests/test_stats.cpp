#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "morphin/rng.hpp"
#include "morphin/stats.hpp"

using morphin::Rng;
using morphin::sample_stats;
using morphin::welch_t_test;

TEST_CASE("sample stats") {
  const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  const auto s = sample_stats(xs);
  CHECK(s.n == 8);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.variance == doctest::Approx(32.0 / 7.0));
}

TEST_CASE("welch t-test matches an externally computed reference") {
  // Reference values computed with an independent statistics package.
  const std::vector<double> a{12.1, 14.3, 11.8, 13.5, 12.9, 14.0, 13.2, 12.4};
  const std::vector<double> b{10.2, 11.1, 10.8, 9.9, 11.4, 10.5, 10.9};
  const auto r = welch_t_test(a, b);
  REQUIRE(r.has_value());
  CHECK(r->t == doctest::Approx(6.281546889525002).epsilon(1e-9));
  CHECK(r->df == doctest::Approx(11.471869277773992).epsilon(1e-9));
  CHECK(r->p_value == doctest::Approx(4.966277305200016e-05).epsilon(1e-7));
}

TEST_CASE("identical samples give t = 0 and p = 1") {
  const std::vector<double> a{5.0, 6.0, 7.0, 8.0};
  const auto r = welch_t_test(a, a);
  REQUIRE(r.has_value());
  CHECK(r->t == 0.0);
  CHECK(r->p_value == doctest::Approx(1.0));
}

TEST_CASE("well-separated samples give a vanishing p-value") {
  Rng rng(303);
  auto normal = [&](double mean, double sd) {
    // Box-Muller from the deterministic generator
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
  };
  std::vector<double> a, b;
  for (int i = 0; i < 30; ++i) {
    a.push_back(normal(40000.0, 500.0));
    b.push_back(normal(23000.0, 500.0));
  }
  const auto r = welch_t_test(a, b);
  REQUIRE(r.has_value());
  CHECK(r->p_value < 1e-10);
  CHECK(r->t > 0.0);
}

TEST_CASE("degenerate inputs") {
  SUBCASE("fewer than two observations is undefined") {
    CHECK_FALSE(welch_t_test(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}).has_value());
    CHECK_FALSE(welch_t_test(std::vector<double>{}, std::vector<double>{1.0, 2.0}).has_value());
  }
  SUBCASE("constant equal samples") {
    const std::vector<double> a{3.0, 3.0, 3.0};
    const auto r = welch_t_test(a, a);
    REQUIRE(r.has_value());
    CHECK(r->p_value == 1.0);
  }
  SUBCASE("constant different samples") {
    const std::vector<double> a{3.0, 3.0, 3.0};
    const std::vector<double> b{4.0, 4.0, 4.0};
    const auto r = welch_t_test(a, b);
    REQUIRE(r.has_value());
    CHECK(r->p_value == 0.0);
  }
}

TEST_CASE("t quantile for the 95 percent interval") {
  CHECK(morphin::t_quantile_975(29) == doctest::Approx(2.045229642132703).epsilon(1e-9));
  CHECK(morphin::t_quantile_975(49) == doctest::Approx(2.0095752371292397).epsilon(1e-9));
  CHECK(morphin::t_quantile_975(7) == doctest::Approx(2.3646242515927844).epsilon(1e-9));
}

TEST_CASE("ci half-width percent") {
  // n=4, mean=5, variance=5/3 -> hw = t(0.975,3) * sqrt(5/12)
  const std::vector<double> xs{4.0, 4.5, 5.5, 6.0};
  const auto s = sample_stats(xs);
  const auto pct = morphin::ci95_half_width_percent(s);
  REQUIRE(pct.has_value());
  const double expected = 100.0 * morphin::t_quantile_975(3) * std::sqrt(s.variance / 4.0) / 5.0;
  CHECK(*pct == doctest::Approx(expected).epsilon(1e-12));

  SUBCASE("undefined for tiny samples or zero mean") {
    CHECK_FALSE(morphin::ci95_half_width_percent(sample_stats(std::vector<double>{1.0})).has_value());
    CHECK_FALSE(
        morphin::ci95_half_width_percent(sample_stats(std::vector<double>{-1.0, 1.0})).has_value());
  }
}
