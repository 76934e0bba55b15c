#include "morphin/drift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace morphin {

std::string to_string(DriftDirection d) {
  switch (d) {
    case DriftDirection::decrease_only: return "decrease_only";
    case DriftDirection::increase_only: return "increase_only";
    case DriftDirection::two_sided: return "two_sided";
  }
  return "two_sided";
}

DriftDirection drift_direction_from_string(const std::string& s) {
  if (s == "decrease_only") return DriftDirection::decrease_only;
  if (s == "increase_only") return DriftDirection::increase_only;
  if (s == "two_sided") return DriftDirection::two_sided;
  throw std::invalid_argument("unknown drift direction '" + s +
                              "' (expected decrease_only, increase_only or two_sided)");
}

void PageHinkleyConfig::validate() const {
  if (!(threshold_h > 0.0)) throw std::invalid_argument("ph.threshold_h must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("ph.delta must be >= 0");
  if (min_samples < 0) throw std::invalid_argument("ph.min_samples must be >= 0");
}

PageHinkleyDetector::PageHinkleyDetector(const PageHinkleyConfig& config) : config_(config) {
  config_.validate();
}

bool PageHinkleyDetector::update(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("PageHinkleyDetector::update: observation must be finite");

  state_.sample_count += 1;
  state_.running_mean += (x - state_.running_mean) / static_cast<double>(state_.sample_count);
  state_.cum_dec = std::max(0.0, state_.cum_dec + (state_.running_mean - x - config_.delta));
  state_.cum_inc = std::max(0.0, state_.cum_inc + (x - state_.running_mean - config_.delta));

  if (state_.sample_count <= config_.min_samples) return false;
  switch (config_.direction) {
    case DriftDirection::decrease_only: return state_.cum_dec > config_.threshold_h;
    case DriftDirection::increase_only: return state_.cum_inc > config_.threshold_h;
    case DriftDirection::two_sided:
      return state_.cum_dec > config_.threshold_h || state_.cum_inc > config_.threshold_h;
  }
  return false;
}

void write_detector_trace(std::ostream& out, const PageHinkleyConfig& config,
                          const std::vector<DetectorTraceRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "# page-hinkley delta=%g threshold_h=%g direction=%s min_samples=%d\n",
                config.delta, config.threshold_h, to_string(config.direction).c_str(),
                config.min_samples);
  out << buf;
  out << "episode,x,running_mean,cum_dec,cum_inc,drift_flag\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%.9g,%.9g,%.9g,%.9g,%d\n", r.episode, r.x, r.running_mean,
                  r.cum_dec, r.cum_inc, r.drift ? 1 : 0);
    out << buf;
  }
}

}  // namespace morphin
