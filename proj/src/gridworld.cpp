#include "morphin/gridworld.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace morphin {

namespace {
// Row/col deltas for actions 0..3; jumps 4..7 reuse them with magnitude 2.
constexpr int kRowDelta[4] = {-1, 1, 0, 0};
constexpr int kColDelta[4] = {0, 0, -1, 1};
}  // namespace

void GridworldConfig::validate() const {
  if (width < 2 || height < 2) throw std::invalid_argument("gridworld width/height must be >= 2");
  auto in_bounds = [&](GridCell c) {
    return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
  };
  if (!in_bounds(start)) throw std::invalid_argument("gridworld start out of bounds");
  if (!in_bounds(goal_a)) throw std::invalid_argument("gridworld goal_a out of bounds");
  if (!in_bounds(goal_b)) throw std::invalid_argument("gridworld goal_b out of bounds");
  if (start == goal_a || start == goal_b)
    throw std::invalid_argument("gridworld start must differ from both goals");
  if (max_steps_per_episode <= 0)
    throw std::invalid_argument("gridworld max_steps_per_episode must be positive");
  if (goal_swap_period < 0)
    throw std::invalid_argument("gridworld goal_swap_period must be >= 0");
  for (const auto& o : obstacles) {
    if (!in_bounds(o)) throw std::invalid_argument("gridworld obstacle out of bounds");
    if (o == start || o == goal_a || o == goal_b)
      throw std::invalid_argument("gridworld obstacles must not cover start or goals");
  }
}

GridworldEnv::GridworldEnv(const GridworldConfig& config) : config_(config) {
  config_.validate();
  obstacle_mask_.assign(static_cast<std::size_t>(state_count()), false);
  for (const auto& o : config_.obstacles) obstacle_mask_[state_of(o)] = true;
}

bool GridworldEnv::blocked(GridCell cell) const { return obstacle_mask_[state_of(cell)]; }

GridCell GridworldEnv::apply_move(GridCell from, int action) const {
  const int dir = action % 4;
  const int magnitude = action < 4 ? 1 : 2;
  GridCell to{from.row + magnitude * kRowDelta[dir], from.col + magnitude * kColDelta[dir]};
  to.row = std::clamp(to.row, 0, config_.height - 1);
  to.col = std::clamp(to.col, 0, config_.width - 1);
  // Landing on an obstacle blocks the move; jumping over one is allowed.
  if (blocked(to)) return from;
  return to;
}

std::optional<int> GridworldEnv::on_episode_start(long episode, bool /*agent_drift_detected*/) {
  if (episode < 0) throw std::invalid_argument("episode index must be >= 0");
  if (config_.goal_swap_period > 0)
    goal_is_b_ = (episode / config_.goal_swap_period) % 2 == 1;
  if (config_.jump_introduction_episode >= 0 && episode >= config_.jump_introduction_episode &&
      action_count_ == 4) {
    action_count_ = 8;
    return action_count_;
  }
  return std::nullopt;
}

int GridworldEnv::reset() {
  pos_ = config_.start;
  steps_in_episode_ = 0;
  episode_active_ = true;
  return state_of(pos_);
}

Transition GridworldEnv::step(int action) {
  if (!episode_active_) throw std::logic_error("GridworldEnv::step outside an active episode");
  if (action < 0 || action >= action_count_)
    throw std::out_of_range("GridworldEnv::step: action " + std::to_string(action) +
                            " out of range [0," + std::to_string(action_count_) + ")");
  const GridCell from = pos_;
  pos_ = apply_move(from, action);
  ++steps_in_episode_;

  const bool at_goal = pos_ == goal();
  const GridCell inactive = goal_is_b_ ? config_.goal_a : config_.goal_b;
  const bool at_inactive_goal =
      config_.terminal_at_inactive_goal && config_.goal_swap_period > 0 && pos_ == inactive;
  const bool out_of_steps = steps_in_episode_ >= config_.max_steps_per_episode;
  Transition t;
  t.state = state_of(from);
  t.action = action;
  t.reward = at_goal ? config_.goal_reward : config_.step_reward;
  t.next_state = state_of(pos_);
  t.terminal = at_goal || at_inactive_goal || out_of_steps;
  if (t.terminal) episode_active_ = false;
  return t;
}

std::optional<int> GridworldEnv::optimal_steps() const {
  const auto key = std::make_pair(state_of(goal()), action_count_);
  auto it = optimal_cache_.find(key);
  if (it == optimal_cache_.end()) {
    const int steps = grid_shortest_path_steps(config_, config_.start, goal(), action_count_);
    it = optimal_cache_.emplace(key, steps).first;
  }
  if (it->second < 0) return std::nullopt;
  return it->second;
}

int grid_shortest_path_steps(const GridworldConfig& config, GridCell from, GridCell goal,
                             int action_count) {
  if (action_count != 4 && action_count != 8)
    throw std::invalid_argument("grid_shortest_path_steps: action_count must be 4 or 8");
  const int w = config.width;
  const int h = config.height;
  std::vector<bool> obstacle(static_cast<std::size_t>(w) * h, false);
  for (const auto& o : config.obstacles) obstacle[o.row * w + o.col] = true;
  std::vector<int> dist(static_cast<std::size_t>(w) * h, -1);

  std::deque<GridCell> frontier;
  dist[from.row * w + from.col] = 0;
  frontier.push_back(from);
  while (!frontier.empty()) {
    const GridCell cur = frontier.front();
    frontier.pop_front();
    if (cur == goal) return dist[cur.row * w + cur.col];
    for (int action = 0; action < action_count; ++action) {
      const int dir = action % 4;
      const int magnitude = action < 4 ? 1 : 2;
      GridCell next{cur.row + magnitude * kRowDelta[dir], cur.col + magnitude * kColDelta[dir]};
      next.row = std::clamp(next.row, 0, h - 1);
      next.col = std::clamp(next.col, 0, w - 1);
      if (obstacle[next.row * w + next.col]) next = cur;
      const int idx = next.row * w + next.col;
      if (dist[idx] < 0) {
        dist[idx] = dist[cur.row * w + cur.col] + 1;
        frontier.push_back(next);
      }
    }
  }
  return -1;
}

}  // namespace morphin
