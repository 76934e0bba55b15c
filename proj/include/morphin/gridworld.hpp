#ifndef MORPHIN_GRIDWORLD_HPP
#define MORPHIN_GRIDWORLD_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "morphin/env.hpp"

namespace morphin {

struct GridCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridworldConfig {
  int width = 9;
  int height = 9;
  GridCell start{4, 4};
  GridCell goal_a{0, 0};
  GridCell goal_b{8, 8};
  double goal_reward = 100.0;
  double step_reward = -1.0;
  long goal_swap_period = 300;          // 0 disables goal swapping
  int max_steps_per_episode = 500;
  long jump_introduction_episode = -1;  // < 0: jump actions never appear
  // Both goal cells are absorbing; only the active one pays goal_reward.
  // Entering the inactive goal ends the episode on the step reward, which
  // is what starves a stale policy of updates after a goal swap.
  bool terminal_at_inactive_goal = true;
  std::vector<GridCell> obstacles;      // optional; default empty

  void validate() const;
};

// 9x9 navigation task. Basic actions 0..3 move one cell (up, down, left,
// right); jump actions 4..7, once introduced, move two cells in the same
// directions. Moves clamp at walls, so a blocked move leaves the cell
// unchanged. Reaching the active goal pays goal_reward and ends the
// episode; every other step pays step_reward. Episodes also end when
// max_steps_per_episode is exhausted.
//
// Schedule: the active goal is goal_a on even swap intervals and goal_b on
// odd ones (the swap happens AT multiples of goal_swap_period), and the
// action set grows from 4 to 8 at jump_introduction_episode.
class GridworldEnv final : public Environment {
 public:
  explicit GridworldEnv(const GridworldConfig& config);

  int state_count() const override { return config_.width * config_.height; }
  int action_count() const override { return action_count_; }

  std::optional<int> on_episode_start(long episode, bool agent_drift_detected) override;
  int reset() override;
  Transition step(int action) override;
  std::optional<int> optimal_steps() const override;

  int state_of(GridCell cell) const { return cell.row * config_.width + cell.col; }
  GridCell cell_of(int state) const {
    return {state / config_.width, state % config_.width};
  }
  GridCell goal() const { return goal_is_b_ ? config_.goal_b : config_.goal_a; }
  const GridworldConfig& config() const { return config_; }

 private:
  bool blocked(GridCell cell) const;
  GridCell apply_move(GridCell from, int action) const;

  GridworldConfig config_;
  int action_count_ = 4;
  bool goal_is_b_ = false;
  GridCell pos_{};
  int steps_in_episode_ = 0;
  bool episode_active_ = false;
  std::vector<bool> obstacle_mask_;
  mutable std::map<std::pair<int, int>, int> optimal_cache_;  // (goal state, actions) -> steps
};

// Shortest number of steps from `from` to `goal` under the given action
// count (4 basic, 8 with jumps) and the config's obstacles; -1 when
// unreachable. Breadth-first search over the grid graph.
int grid_shortest_path_steps(const GridworldConfig& config, GridCell from, GridCell goal,
                             int action_count);

}  // namespace morphin

#endif  // MORPHIN_GRIDWORLD_HPP
