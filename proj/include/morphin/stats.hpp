#ifndef MORPHIN_STATS_HPP
#define MORPHIN_STATS_HPP

#include <optional>
#include <span>

namespace morphin {

struct SampleStats {
  int n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1 denominator); 0 when n < 2
};

SampleStats sample_stats(std::span<const double> values);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided
};

// Welch's unequal-variance two-sample t-test. Undefined (nullopt) when
// either sample has fewer than two observations.
std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b);

// Student's t two-sided upper quantile at 97.5%, i.e. the multiplier for a
// 95% confidence interval on the mean.
double t_quantile_975(double degrees_of_freedom);

// Half-width of the 95% CI of the mean, as a percent of |mean|.
// nullopt when n < 2 or mean == 0.
std::optional<double> ci95_half_width_percent(const SampleStats& stats);

}  // namespace morphin

#endif  // MORPHIN_STATS_HPP
