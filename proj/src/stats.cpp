#include "morphin/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace morphin {

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    ss += d * d;
  }
  s.variance = ss / (s.n - 1);
  return s;
}

std::optional<WelchResult> welch_t_test(std::span<const double> a, std::span<const double> b) {
  const SampleStats sa = sample_stats(a);
  const SampleStats sb = sample_stats(b);
  if (sa.n < 2 || sb.n < 2) return std::nullopt;

  const double va_n = sa.variance / sa.n;
  const double vb_n = sb.variance / sb.n;
  const double se2 = va_n + vb_n;
  WelchResult r;
  if (se2 == 0.0) {
    // Degenerate: both samples constant. Equal means are indistinguishable;
    // unequal means differ with certainty.
    r.t = sa.mean == sb.mean ? 0.0 : std::numeric_limits<double>::infinity();
    r.df = static_cast<double>(sa.n + sb.n - 2);
    r.p_value = sa.mean == sb.mean ? 1.0 : 0.0;
    return r;
  }
  r.t = (sa.mean - sb.mean) / std::sqrt(se2);
  r.df = se2 * se2 / (va_n * va_n / (sa.n - 1) + vb_n * vb_n / (sb.n - 1));
  const boost::math::students_t dist(r.df);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

double t_quantile_975(double degrees_of_freedom) {
  if (!(degrees_of_freedom > 0.0))
    throw std::invalid_argument("t_quantile_975: degrees of freedom must be > 0");
  const boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(dist, 0.975);
}

std::optional<double> ci95_half_width_percent(const SampleStats& stats) {
  if (stats.n < 2 || stats.mean == 0.0) return std::nullopt;
  const double half_width =
      t_quantile_975(stats.n - 1) * std::sqrt(stats.variance / stats.n);
  return 100.0 * half_width / std::fabs(stats.mean);
}

}  // namespace morphin
