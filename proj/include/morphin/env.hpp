#ifndef MORPHIN_ENV_HPP
#define MORPHIN_ENV_HPP

#include <optional>

#include "morphin/qtable.hpp"

namespace morphin {

// Episodic environment with a scheduled drift / action-expansion hook.
// Usage per episode: on_episode_start, then reset, then step until the
// returned transition is terminal. step outside an active episode is a
// contract violation. The action count never shrinks.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int state_count() const = 0;
  virtual int action_count() const = 0;

  // Applies the drift/expansion schedule for this episode.
  // agent_drift_detected reports whether the agent's detector fired at the
  // end of the previous episode (consumed by the traffic scenario, which
  // expands its action set only upon detection). Returns the new action
  // count when the action set grew.
  virtual std::optional<int> on_episode_start(long episode, bool agent_drift_detected) = 0;

  // Starts an episode and returns the initial state.
  virtual int reset() = 0;

  virtual Transition step(int action) = 0;

  // Steps an optimal policy needs per episode under the current schedule,
  // where well-defined (gridworld). Used by the convergence band.
  virtual std::optional<int> optimal_steps() const { return std::nullopt; }
};

}  // namespace morphin

#endif  // MORPHIN_ENV_HPP
