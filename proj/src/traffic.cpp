#include "morphin/traffic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace morphin {

void TrafficConfig::validate() const {
  if (!(lambda_1 >= 0.0 && lambda_2 >= 0.0))
    throw std::invalid_argument("traffic lambda_1/lambda_2 must be >= 0");
  if (queue_cap <= 0) throw std::invalid_argument("traffic queue_cap must be positive");
  if (congestion_threshold <= 0)
    throw std::invalid_argument("traffic congestion_threshold must be positive");
  if (!(empty_green_penalty > 0.0))
    throw std::invalid_argument("traffic empty_green_penalty must be > 0");
  if (steps_per_episode <= 0)
    throw std::invalid_argument("traffic steps_per_episode must be positive");
  if (base_phases.empty()) throw std::invalid_argument("traffic base_phases must not be empty");
  auto check_phases = [](const std::vector<TrafficPhase>& phases, const char* name) {
    for (const auto& p : phases) {
      if (p.lane != 0 && p.lane != 1)
        throw std::invalid_argument(std::string(name) + ": lane must be 0 or 1");
      if (p.capacity <= 0)
        throw std::invalid_argument(std::string(name) + ": capacity must be positive");
    }
  };
  check_phases(base_phases, "traffic base_phases");
  check_phases(aggressive_phases, "traffic aggressive_phases");
  long prev = -1;
  for (const auto& d : drift_schedule) {
    if (d.episode <= prev)
      throw std::invalid_argument("traffic drift_schedule episodes must be strictly increasing");
    if (!(d.lambda_1 >= 0.0 && d.lambda_2 >= 0.0))
      throw std::invalid_argument("traffic drift_schedule lambdas must be >= 0");
    prev = d.episode;
  }
}

TrafficEnv::TrafficEnv(const TrafficConfig& config, std::uint64_t rng_seed)
    : config_(config), rng_(rng_seed) {
  config_.validate();
  phases_ = config_.base_phases;
  lambda_ = {config_.lambda_1, config_.lambda_2};
}

std::optional<int> TrafficEnv::on_episode_start(long episode, bool agent_drift_detected) {
  if (episode < 0) throw std::invalid_argument("episode index must be >= 0");
  for (const auto& d : config_.drift_schedule) {
    if (d.episode == episode) lambda_ = {d.lambda_1, d.lambda_2};
  }
  if (agent_drift_detected && !expanded_ && !config_.aggressive_phases.empty()) {
    phases_.insert(phases_.end(), config_.aggressive_phases.begin(),
                   config_.aggressive_phases.end());
    expanded_ = true;
    return action_count();
  }
  return std::nullopt;
}

int TrafficEnv::reset() {
  queues_ = {0, 0};
  steps_in_episode_ = 0;
  episode_active_ = true;
  return state_of(queues_[0], queues_[1]);
}

void TrafficEnv::set_queues(int queue_1, int queue_2) {
  if (!episode_active_)
    throw std::logic_error("TrafficEnv::set_queues outside an active episode");
  if (queue_1 < 0 || queue_1 > config_.queue_cap || queue_2 < 0 || queue_2 > config_.queue_cap)
    throw std::out_of_range("TrafficEnv::set_queues: queue lengths must be in [0, queue_cap]");
  queues_ = {queue_1, queue_2};
}

Transition TrafficEnv::step(int action) {
  if (!episode_active_) throw std::logic_error("TrafficEnv::step outside an active episode");
  if (action < 0 || action >= action_count())
    throw std::out_of_range("TrafficEnv::step: phase " + std::to_string(action) +
                            " out of range [0," + std::to_string(action_count()) + ")");
  const int from_state = state_of(queues_[0], queues_[1]);
  const TrafficPhase& phase = phases_[static_cast<std::size_t>(action)];

  const bool empty_green = queues_[phase.lane] == 0;
  queues_[phase.lane] -= std::min(queues_[phase.lane], phase.capacity);
  for (int lane = 0; lane < 2; ++lane)
    queues_[lane] = std::min(config_.queue_cap, queues_[lane] + rng_.poisson(lambda_[lane]));

  const int over_1 = std::max(0, queues_[0] - config_.congestion_threshold);
  const int over_2 = std::max(0, queues_[1] - config_.congestion_threshold);
  const double reward =
      -static_cast<double>(over_1 + over_2) - (empty_green ? config_.empty_green_penalty : 0.0);

  ++steps_in_episode_;
  Transition t;
  t.state = from_state;
  t.action = action;
  t.reward = reward;
  t.next_state = state_of(queues_[0], queues_[1]);
  t.terminal = steps_in_episode_ >= config_.steps_per_episode;
  if (t.terminal) episode_active_ = false;
  return t;
}

}  // namespace morphin
