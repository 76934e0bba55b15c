#ifndef MORPHIN_HARNESS_HPP
#define MORPHIN_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morphin/agent.hpp"
#include "morphin/env.hpp"
#include "morphin/gridworld.hpp"
#include "morphin/stats.hpp"
#include "morphin/traffic.hpp"

namespace morphin {

enum class Scenario { gridworld_goals, gridworld_actions, traffic };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ConvergenceConfig {
  int window = 30;        // W: consecutive episodes the band must hold
  double tolerance = 0.25;  // tau

  void validate() const;
};

struct ExperimentSpec {
  Scenario scenario = Scenario::gridworld_goals;
  long episodes = 1500;
  int trials = 50;
  std::uint64_t base_seed = 42;
  AgentConfig morphin;
  AgentConfig baseline;
  GridworldConfig gridworld;
  TrafficConfig traffic;
  ConvergenceConfig convergence;

  bool is_gridworld() const { return scenario != Scenario::traffic; }

  // Drift episodes implied by the scenario schedule, in increasing order.
  std::vector<long> drift_episodes() const;

  void validate() const;
};

struct TrialRecord {
  std::vector<double> episode_reward;
  std::vector<int> steps_taken;
  std::vector<double> epsilon_at_start;
  std::vector<std::uint8_t> drift_flags;
  // Whether the episode ended by reaching the active goal (gridworld).
  std::vector<std::uint8_t> goal_reached;
  // Per-episode optimal step count where the environment defines one
  // (gridworld); -1 otherwise.
  std::vector<int> optimal_steps;
  long long total_steps = 0;
  // Episodes-after-drift per scheduled drift; nullopt = failed to converge.
  std::vector<std::optional<long>> convergence;
  // Episodes at which the action set grew.
  std::vector<long> expansion_episodes;
  int final_action_count = 0;
  // Final Q-table; only captured on request (snapshot export).
  std::optional<QTable> final_q;
};

std::unique_ptr<Environment> make_environment(const ExperimentSpec& spec, AgentKind kind,
                                              int trial_index);

// Observer for per-step tracing; q_value is the updated Q(s,a) entry.
using StepObserver =
    std::function<void(long episode, long step, const StepOutcome& outcome, double q_value)>;

// Runs the full episode loop for one (agent, trial) pair. Deterministic in
// (spec.base_seed, trial_index, kind).
TrialRecord run_trial(const ExperimentSpec& spec, AgentKind kind, int trial_index,
                      bool capture_qtable = false, const StepObserver& observer = {});

// Gridworld criterion: smallest n such that every episode of the window
// [drift+n, drift+n+W) reaches the active goal within (1+tol)*optimal
// steps, with the window fitting before next_drift. nullopt when no such
// n exists.
std::optional<long> detect_convergence_steps(std::span<const int> steps_taken,
                                             std::span<const std::uint8_t> goal_reached,
                                             std::span<const int> optimal_steps,
                                             long drift_episode, long next_drift_episode,
                                             int window, double tolerance);

// Traffic criterion: the target is the best trailing-window mean reward in
// [drift, next_drift); convergence is the smallest n whose window holds
// every episode reward at or above target - tol*|target|.
std::optional<long> detect_convergence_reward(std::span<const double> episode_reward,
                                              long drift_episode, long next_drift_episode,
                                              int window, double tolerance);

struct ConvergenceSummary {
  long drift_episode = 0;
  int converged_trials = 0;
  int failed_trials = 0;
  std::optional<double> mean_episodes;  // over converged trials
  std::optional<double> spread_pct;     // 95% CI half-width as % of the mean
};

struct AgentSummary {
  std::string agent;
  std::vector<ConvergenceSummary> drifts;
  double mean_total_steps = 0.0;
  std::optional<double> total_steps_spread_pct;
};

struct RunSummary {
  std::vector<long> drift_episodes;
  AgentSummary morphin;
  AgentSummary baseline;
  std::optional<WelchResult> total_steps_test;    // Welch on per-trial total steps
  std::optional<double> efficiency_ratio;         // baseline mean / morphin mean
};

RunSummary summarize(const ExperimentSpec& spec, std::span<const TrialRecord> morphin_records,
                     std::span<const TrialRecord> baseline_records);

struct ExperimentResult {
  std::vector<TrialRecord> morphin;
  std::vector<TrialRecord> baseline;
  RunSummary summary;
};

// Runs all trials for both agents. Trials are independent work units;
// `parallelism` bounds the worker count and never changes results.
ExperimentResult run_experiment(const ExperimentSpec& spec, int parallelism = 1);

}  // namespace morphin

#endif  // MORPHIN_HARNESS_HPP
