#include "morphin/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace morphin {

std::string to_string(AgentKind k) {
  return k == AgentKind::morphin ? "morphin" : "baseline";
}

void AgentConfig::validate() const {
  if (!(alpha_base > 0.0 && alpha_base <= 1.0))
    throw std::invalid_argument("alpha_base must be in (0,1]");
  if (!(alpha_max > alpha_base && alpha_max <= 1.0))
    throw std::invalid_argument("alpha_max must be in (alpha_base,1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  if (!(epsilon_min >= 0.0 && epsilon_min < 1.0))
    throw std::invalid_argument("epsilon_min must be in [0,1)");
  if (!(decay_rate > 0.0)) throw std::invalid_argument("decay_rate must be > 0");
  ph.validate();
}

double current_epsilon(const AgentConfig& cfg, long decay_counter) {
  return cfg.epsilon_min +
         (1.0 - cfg.epsilon_min) * std::exp(-cfg.decay_rate * static_cast<double>(decay_counter));
}

double td_error(const AgentConfig& cfg, const QTable& q, const Transition& t) {
  const double bootstrap = t.terminal ? 0.0 : cfg.gamma * q.max_over_actions(t.next_state).value;
  return t.reward + bootstrap - q.at(t.state, t.action);
}

double dynamic_alpha(const AgentConfig& cfg, double td) {
  const double z = std::fabs(td) - cfg.k;
  const double sigmoid = 1.0 / (1.0 + std::exp(-z));
  return cfg.alpha_base + (cfg.alpha_max - cfg.alpha_base) * sigmoid;
}

Agent::Agent(AgentKind kind, const AgentConfig& config, int state_count, int action_count,
             std::uint64_t rng_seed)
    : kind_(kind),
      config_(config),
      q_(action_count, state_count),
      detector_(config.ph),
      rng_(rng_seed) {
  config_.validate();
}

std::pair<int, bool> Agent::select_action(int state, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("select_action: epsilon must be in [0,1]");
  const double u = rng_.uniform01();
  if (u < epsilon) return {rng_.uniform_below(q_.action_count()), true};
  return {q_.max_over_actions(state).action, false};
}

StepOutcome Agent::update(const Transition& t, double epsilon_used, bool explored) {
  const double td = td_error(config_, q_, t);
  const double alpha = kind_ == AgentKind::morphin ? dynamic_alpha(config_, td) : config_.alpha_base;
  q_.set(t.state, t.action, q_.at(t.state, t.action) + alpha * td);
  return StepOutcome{t, epsilon_used, alpha, td, explored};
}

bool Agent::end_episode(double episode_reward) {
  if (kind_ == AgentKind::baseline) {
    ++decay_counter_;
    return false;
  }
  const bool drift = detector_.update(episode_reward);
  if (drift) {
    decay_counter_ = 0;
    detector_.reset();
  } else {
    ++decay_counter_;
  }
  return drift;
}

void Agent::on_actions_expanded(int new_action_count) {
  q_.expand_actions(new_action_count);
  if (kind_ == AgentKind::morphin) {
    decay_counter_ = 0;
    detector_.reset();
  }
}

}  // namespace morphin
