#ifndef MORPHIN_AGENT_HPP
#define MORPHIN_AGENT_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "morphin/drift.hpp"
#include "morphin/qtable.hpp"
#include "morphin/rng.hpp"

namespace morphin {

enum class AgentKind { morphin, baseline };

std::string to_string(AgentKind k);

struct AgentConfig {
  double alpha_base = 0.1;   // base learning rate
  double alpha_max = 0.9;    // ceiling for the dynamic learning rate
  double gamma = 0.9;        // discount factor
  double k = 5.0;            // TD-error sensitivity of the dynamic rate
  double epsilon_min = 0.05; // exploration floor
  double decay_rate = 0.01;  // exponential exploration decay constant
  PageHinkleyConfig ph{};

  void validate() const;
};

// epsilon(e) = epsilon_min + (1 - epsilon_min) * exp(-decay_rate * e).
// e is the episode-level decay counter, so epsilon is constant within an
// episode; e = 0 forces epsilon = 1.
double current_epsilon(const AgentConfig& cfg, long decay_counter);

// TD error r + gamma * max_a Q(s', a) - Q(s, a). The bootstrap term is
// zero on terminal transitions.
double td_error(const AgentConfig& cfg, const QTable& q, const Transition& t);

// alpha* = alpha + (alpha_max - alpha) * sigmoid(|td| - k). Strictly inside
// (alpha, alpha_max) and strictly increasing in |td|.
double dynamic_alpha(const AgentConfig& cfg, double td);

struct StepOutcome {
  Transition transition{};
  double epsilon_used = 0.0;
  double alpha_used = 0.0;
  double td_error = 0.0;
  bool explored = false;
};

// A tabular Q-learning agent. AgentKind::morphin applies the TD-driven
// dynamic learning rate and the drift-triggered exploration reset;
// AgentKind::baseline keeps alpha fixed at alpha_base and a single
// non-resetting decay schedule. Neither kind ever clears learned Q-values:
// the only writes are the per-step Bellman update and zero-initialized
// rows appended on action-space growth.
class Agent {
 public:
  Agent(AgentKind kind, const AgentConfig& config, int state_count, int action_count,
        std::uint64_t rng_seed);

  // Epsilon-greedy selection: one uniform real per call, plus one uniform
  // action index when the exploration branch is taken.
  std::pair<int, bool> select_action(int state, double epsilon);

  // Applies the Bellman update for this transition. epsilon_used/explored
  // are echoed into the outcome for tracing.
  StepOutcome update(const Transition& t, double epsilon_used, bool explored);

  // End-of-episode bookkeeping with the cumulative episode reward.
  // morphin: feeds the drift detector; on alarm resets the decay counter
  // and the detector, otherwise increments the counter.
  // baseline: increments the counter unconditionally.
  // Returns true when drift was detected.
  bool end_episode(double episode_reward);

  // Action-space growth announced by the environment. Q rows are appended
  // (zeros) for both kinds; morphin additionally restarts exploration and
  // the detector so the new actions' utility gets probed.
  void on_actions_expanded(int new_action_count);

  double episode_epsilon() const { return current_epsilon(config_, decay_counter_); }

  AgentKind kind() const { return kind_; }
  const AgentConfig& config() const { return config_; }
  const QTable& table() const { return q_; }
  QTable& table() { return q_; }
  long decay_counter() const { return decay_counter_; }
  const PageHinkleyDetector& detector() const { return detector_; }

 private:
  AgentKind kind_;
  AgentConfig config_;
  QTable q_;
  long decay_counter_ = 0;
  PageHinkleyDetector detector_;
  Rng rng_;
};

}  // namespace morphin

#endif  // MORPHIN_AGENT_HPP
