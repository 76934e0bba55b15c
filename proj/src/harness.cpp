#include "morphin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "morphin/rng.hpp"

namespace morphin {

namespace {
constexpr std::uint64_t kAgentStream = 1;
constexpr std::uint64_t kEnvStream = 2;

std::uint64_t agent_tag(AgentKind kind) { return kind == AgentKind::morphin ? 0 : 1; }
}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::gridworld_goals: return "gridworld_goals";
    case Scenario::gridworld_actions: return "gridworld_actions";
    case Scenario::traffic: return "traffic";
  }
  return "gridworld_goals";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "gridworld_goals") return Scenario::gridworld_goals;
  if (s == "gridworld_actions") return Scenario::gridworld_actions;
  if (s == "traffic") return Scenario::traffic;
  throw std::invalid_argument("unknown scenario '" + s +
                              "' (expected gridworld_goals, gridworld_actions or traffic)");
}

void ConvergenceConfig::validate() const {
  if (window <= 0) throw std::invalid_argument("convergence.window must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("convergence.tolerance must be > 0");
}

std::vector<long> ExperimentSpec::drift_episodes() const {
  std::vector<long> drifts;
  switch (scenario) {
    case Scenario::gridworld_goals:
      if (gridworld.goal_swap_period > 0)
        for (long e = gridworld.goal_swap_period; e < episodes; e += gridworld.goal_swap_period)
          drifts.push_back(e);
      break;
    case Scenario::gridworld_actions:
      if (gridworld.jump_introduction_episode >= 0)
        drifts.push_back(gridworld.jump_introduction_episode);
      break;
    case Scenario::traffic:
      for (const auto& d : traffic.drift_schedule) drifts.push_back(d.episode);
      break;
  }
  return drifts;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  morphin.validate();
  baseline.validate();
  convergence.validate();
  if (is_gridworld()) {
    gridworld.validate();
  } else {
    traffic.validate();
  }
  const auto drifts = drift_episodes();
  if (!drifts.empty() && drifts.back() >= episodes)
    throw std::invalid_argument("episodes must cover the scenario's drift schedule (last drift at " +
                                std::to_string(drifts.back()) + ")");
  if (scenario == Scenario::gridworld_actions && gridworld.jump_introduction_episode < 0)
    throw std::invalid_argument(
        "gridworld_actions requires gridworld.jump_introduction_episode >= 0");
}

std::unique_ptr<Environment> make_environment(const ExperimentSpec& spec, AgentKind kind,
                                              int trial_index) {
  const std::uint64_t env_seed =
      derive_seed(spec.base_seed, static_cast<std::uint64_t>(trial_index), agent_tag(kind),
                  kEnvStream);
  if (spec.is_gridworld()) return std::make_unique<GridworldEnv>(spec.gridworld);
  return std::make_unique<TrafficEnv>(spec.traffic, env_seed);
}

TrialRecord run_trial(const ExperimentSpec& spec, AgentKind kind, int trial_index,
                      bool capture_qtable, const StepObserver& observer) {
  spec.validate();
  auto env = make_environment(spec, kind, trial_index);
  const AgentConfig& cfg = kind == AgentKind::morphin ? spec.morphin : spec.baseline;
  const std::uint64_t agent_seed =
      derive_seed(spec.base_seed, static_cast<std::uint64_t>(trial_index), agent_tag(kind),
                  kAgentStream);
  Agent agent(kind, cfg, env->state_count(), env->action_count(), agent_seed);

  TrialRecord record;
  record.episode_reward.reserve(spec.episodes);
  record.steps_taken.reserve(spec.episodes);
  record.epsilon_at_start.reserve(spec.episodes);
  record.drift_flags.reserve(spec.episodes);
  record.goal_reached.reserve(spec.episodes);
  record.optimal_steps.reserve(spec.episodes);

  bool drift_last_episode = false;
  for (long episode = 0; episode < spec.episodes; ++episode) {
    if (const auto grown = env->on_episode_start(episode, drift_last_episode)) {
      if (*grown <= agent.table().action_count())
        throw std::runtime_error("expansion event with mismatched Q-table (new count " +
                                 std::to_string(*grown) + ")");
      agent.on_actions_expanded(*grown);
      record.expansion_episodes.push_back(episode);
    }

    const double epsilon = agent.episode_epsilon();
    int state = env->reset();
    double episode_reward = 0.0;
    int steps = 0;
    bool terminal = false;
    bool reached_goal = false;
    while (!terminal) {
      const auto [action, explored] = agent.select_action(state, epsilon);
      const Transition t = env->step(action);
      const StepOutcome outcome = agent.update(t, epsilon, explored);
      if (observer) observer(episode, steps, outcome, agent.table().at(t.state, t.action));
      episode_reward += t.reward;
      ++steps;
      state = t.next_state;
      terminal = t.terminal;
      if (terminal && spec.is_gridworld() && t.reward == spec.gridworld.goal_reward)
        reached_goal = true;
    }

    drift_last_episode = agent.end_episode(episode_reward);
    record.episode_reward.push_back(episode_reward);
    record.steps_taken.push_back(steps);
    record.epsilon_at_start.push_back(epsilon);
    record.drift_flags.push_back(drift_last_episode ? 1 : 0);
    record.goal_reached.push_back(reached_goal ? 1 : 0);
    record.optimal_steps.push_back(env->optimal_steps().value_or(-1));
    record.total_steps += steps;
  }
  record.final_action_count = agent.table().action_count();
  if (capture_qtable) record.final_q = agent.table();

  const auto drifts = spec.drift_episodes();
  for (std::size_t i = 0; i < drifts.size(); ++i) {
    const long next = i + 1 < drifts.size() ? drifts[i + 1] : spec.episodes;
    if (spec.is_gridworld()) {
      record.convergence.push_back(detect_convergence_steps(
          record.steps_taken, record.goal_reached, record.optimal_steps, drifts[i], next,
          spec.convergence.window, spec.convergence.tolerance));
    } else {
      record.convergence.push_back(detect_convergence_reward(
          record.episode_reward, drifts[i], next, spec.convergence.window,
          spec.convergence.tolerance));
    }
  }
  return record;
}

std::optional<long> detect_convergence_steps(std::span<const int> steps_taken,
                                             std::span<const std::uint8_t> goal_reached,
                                             std::span<const int> optimal_steps,
                                             long drift_episode, long next_drift_episode,
                                             int window, double tolerance) {
  if (drift_episode < 0 || drift_episode > static_cast<long>(steps_taken.size()))
    throw std::invalid_argument("detect_convergence: drift_episode out of range");
  if (steps_taken.size() != optimal_steps.size() || steps_taken.size() != goal_reached.size())
    throw std::invalid_argument("detect_convergence: series lengths differ");
  const long end = std::min<long>(next_drift_episode, static_cast<long>(steps_taken.size()));

  auto in_band = [&](long episode) {
    const int optimal = optimal_steps[static_cast<std::size_t>(episode)];
    if (optimal < 0) return false;
    if (!goal_reached[static_cast<std::size_t>(episode)]) return false;
    return steps_taken[static_cast<std::size_t>(episode)] <= (1.0 + tolerance) * optimal;
  };
  for (long n = 0; drift_episode + n + window <= end; ++n) {
    bool ok = true;
    for (long e = drift_episode + n; e < drift_episode + n + window; ++e) {
      if (!in_band(e)) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return std::nullopt;
}

std::optional<long> detect_convergence_reward(std::span<const double> episode_reward,
                                              long drift_episode, long next_drift_episode,
                                              int window, double tolerance) {
  if (drift_episode < 0 || drift_episode > static_cast<long>(episode_reward.size()))
    throw std::invalid_argument("detect_convergence: drift_episode out of range");
  const long end = std::min<long>(next_drift_episode, static_cast<long>(episode_reward.size()));
  if (drift_episode + window > end) return std::nullopt;

  // Target band from the best trailing-window mean within the interval.
  double best = -std::numeric_limits<double>::infinity();
  double window_sum = 0.0;
  for (long e = drift_episode; e < end; ++e) {
    window_sum += episode_reward[static_cast<std::size_t>(e)];
    if (e - drift_episode >= window)
      window_sum -= episode_reward[static_cast<std::size_t>(e - window)];
    if (e - drift_episode >= window - 1) best = std::max(best, window_sum / window);
  }
  const double band = best - tolerance * std::fabs(best);

  for (long n = 0; drift_episode + n + window <= end; ++n) {
    bool ok = true;
    for (long e = drift_episode + n; e < drift_episode + n + window; ++e) {
      if (episode_reward[static_cast<std::size_t>(e)] < band) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return std::nullopt;
}

namespace {

AgentSummary summarize_agent(const ExperimentSpec& spec, const std::string& name,
                             std::span<const TrialRecord> records) {
  AgentSummary summary;
  summary.agent = name;
  const auto drifts = spec.drift_episodes();
  for (std::size_t i = 0; i < drifts.size(); ++i) {
    ConvergenceSummary cs;
    cs.drift_episode = drifts[i];
    std::vector<double> converged;
    for (const auto& r : records) {
      if (i < r.convergence.size() && r.convergence[i].has_value())
        converged.push_back(static_cast<double>(*r.convergence[i]));
      else
        ++cs.failed_trials;
    }
    cs.converged_trials = static_cast<int>(converged.size());
    if (!converged.empty()) {
      const SampleStats stats = sample_stats(converged);
      cs.mean_episodes = stats.mean;
      cs.spread_pct = ci95_half_width_percent(stats);
    }
    summary.drifts.push_back(std::move(cs));
  }

  std::vector<double> totals;
  totals.reserve(records.size());
  for (const auto& r : records) totals.push_back(static_cast<double>(r.total_steps));
  const SampleStats stats = sample_stats(totals);
  summary.mean_total_steps = stats.mean;
  summary.total_steps_spread_pct = ci95_half_width_percent(stats);
  return summary;
}

}  // namespace

RunSummary summarize(const ExperimentSpec& spec, std::span<const TrialRecord> morphin_records,
                     std::span<const TrialRecord> baseline_records) {
  if (morphin_records.size() != baseline_records.size())
    throw std::invalid_argument("summarize: trial counts must match");
  RunSummary summary;
  summary.drift_episodes = spec.drift_episodes();
  summary.morphin = summarize_agent(spec, "morphin", morphin_records);
  summary.baseline = summarize_agent(spec, "baseline", baseline_records);

  std::vector<double> morphin_totals, baseline_totals;
  for (const auto& r : morphin_records) morphin_totals.push_back(static_cast<double>(r.total_steps));
  for (const auto& r : baseline_records)
    baseline_totals.push_back(static_cast<double>(r.total_steps));
  summary.total_steps_test = welch_t_test(baseline_totals, morphin_totals);
  if (summary.morphin.mean_total_steps > 0.0)
    summary.efficiency_ratio = summary.baseline.mean_total_steps / summary.morphin.mean_total_steps;
  return summary;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int parallelism) {
  spec.validate();
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");

  ExperimentResult result;
  result.morphin.resize(spec.trials);
  result.baseline.resize(spec.trials);

  const int task_count = spec.trials * 2;
  std::atomic<int> next_task{0};
  auto worker = [&] {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= task_count) return;
      const int trial = task / 2;
      const AgentKind kind = task % 2 == 0 ? AgentKind::morphin : AgentKind::baseline;
      TrialRecord record = run_trial(spec, kind, trial);
      auto& slot = kind == AgentKind::morphin ? result.morphin : result.baseline;
      slot[static_cast<std::size_t>(trial)] = std::move(record);
    }
  };

  const int workers = std::min(parallelism, task_count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.summary = summarize(spec, result.morphin, result.baseline);
  return result;
}

}  // namespace morphin
