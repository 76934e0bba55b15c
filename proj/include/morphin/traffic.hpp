#ifndef MORPHIN_TRAFFIC_HPP
#define MORPHIN_TRAFFIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "morphin/env.hpp"
#include "morphin/rng.hpp"

namespace morphin {

// A signal phase: green for one lane, discharging up to `capacity`
// vehicles per step.
struct TrafficPhase {
  int lane = 0;
  int capacity = 1;
  friend bool operator==(const TrafficPhase&, const TrafficPhase&) = default;
};

struct TrafficDriftPoint {
  long episode = 0;
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
  friend bool operator==(const TrafficDriftPoint&, const TrafficDriftPoint&) = default;
};

struct TrafficConfig {
  double lambda_1 = 0.5;  // Poisson mean arrivals per step, lane 0
  double lambda_2 = 0.5;  // lane 1
  int queue_cap = 20;
  int congestion_threshold = 5;
  double empty_green_penalty = 1.0;
  std::vector<TrafficPhase> base_phases{{0, 2}, {1, 2}};
  std::vector<TrafficPhase> aggressive_phases{{0, 4}, {1, 4}};
  std::vector<TrafficDriftPoint> drift_schedule{{3000, 1.5, 1.5}, {8000, 0.3, 0.3}};
  long steps_per_episode = 60;

  void validate() const;
};

// Two-lane intersection. State is the pair of queue lengths (c1, c2), each
// clamped to [0, queue_cap]; actions are signal phases. Per step: the
// chosen phase discharges its lane, Poisson arrivals join both queues, and
// the reward penalizes queues beyond the congestion threshold plus a flat
// penalty for serving an empty lane. Episodes run a fixed number of steps.
//
// Arrival rates change at the scheduled episodes regardless of detection.
// The aggressive phases are appended (once) only when the harness reports
// the agent's detector fired.
class TrafficEnv final : public Environment {
 public:
  TrafficEnv(const TrafficConfig& config, std::uint64_t rng_seed);

  int state_count() const override {
    return (config_.queue_cap + 1) * (config_.queue_cap + 1);
  }
  int action_count() const override { return static_cast<int>(phases_.size()); }

  std::optional<int> on_episode_start(long episode, bool agent_drift_detected) override;
  int reset() override;
  Transition step(int action) override;

  int state_of(int queue_1, int queue_2) const {
    return queue_1 * (config_.queue_cap + 1) + queue_2;
  }
  // Forces the queue state inside an active episode (scenario probing and
  // diagnostics; the harness never calls this).
  void set_queues(int queue_1, int queue_2);
  std::array<int, 2> queues_of(int state) const {
    return {state / (config_.queue_cap + 1), state % (config_.queue_cap + 1)};
  }

  bool expanded() const { return expanded_; }
  double lambda(int lane) const { return lambda_[lane]; }
  const TrafficConfig& config() const { return config_; }

 private:
  TrafficConfig config_;
  std::vector<TrafficPhase> phases_;
  std::array<double, 2> lambda_{};
  std::array<int, 2> queues_{};
  long steps_in_episode_ = 0;
  bool episode_active_ = false;
  bool expanded_ = false;
  Rng rng_;
};

}  // namespace morphin

#endif  // MORPHIN_TRAFFIC_HPP
