#ifndef MORPHIN_DRIFT_HPP
#define MORPHIN_DRIFT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace morphin {

enum class DriftDirection { decrease_only, increase_only, two_sided };

std::string to_string(DriftDirection d);
DriftDirection drift_direction_from_string(const std::string& s);

struct PageHinkleyConfig {
  double delta = 0.5;        // magnitude tolerance, in reward units
  double threshold_h = 300.0;  // alarm threshold H, in reward units
  DriftDirection direction = DriftDirection::two_sided;
  int min_samples = 30;  // warm-up: no alarms for the first min_samples observations

  void validate() const;
};

struct PageHinkleyState {
  long sample_count = 0;
  double running_mean = 0.0;
  double cum_dec = 0.0;  // clamped cumulant for a mean decrease
  double cum_inc = 0.0;  // clamped cumulant for a mean increase
};

// Streaming Page-Hinkley change-point detector.
//
// Per observation x (with n the post-increment sample count and mean the
// arithmetic mean of all observations since the last reset, including x):
//
//   mean    <- mean + (x - mean) / n
//   cum_dec <- max(0, cum_dec + (mean - x - delta))
//   cum_inc <- max(0, cum_inc + (x - mean - delta))
//
// An alarm fires once n > min_samples and the cumulant selected by
// `direction` exceeds threshold_h. reset() erases all history; each regime
// after a detected drift is modeled fresh.
class PageHinkleyDetector {
 public:
  PageHinkleyDetector() = default;
  explicit PageHinkleyDetector(const PageHinkleyConfig& config);

  // Feeds one observation; returns true when drift is flagged.
  bool update(double x);

  void reset() { state_ = PageHinkleyState{}; }

  const PageHinkleyState& state() const { return state_; }
  const PageHinkleyConfig& config() const { return config_; }

 private:
  PageHinkleyConfig config_{};
  PageHinkleyState state_{};
};

// One row of a detector trace (one update call).
struct DetectorTraceRow {
  long episode = 0;
  double x = 0.0;
  double running_mean = 0.0;
  double cum_dec = 0.0;
  double cum_inc = 0.0;
  bool drift = false;
};

// CSV trace with a leading comment line echoing the detector parameters.
void write_detector_trace(std::ostream& out, const PageHinkleyConfig& config,
                          const std::vector<DetectorTraceRow>& rows);

}  // namespace morphin

#endif  // MORPHIN_DRIFT_HPP
