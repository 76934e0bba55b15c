#include "morphin/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "morphin/config_io.hpp"
#include "morphin/version.hpp"

namespace morphin {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

json agent_summary_to_json(const AgentSummary& a) {
  json drifts = json::array();
  for (const auto& d : a.drifts) {
    drifts.push_back(json{{"drift_episode", d.drift_episode},
                          {"converged_trials", d.converged_trials},
                          {"failed_trials", d.failed_trials},
                          {"mean_episodes_after_drift", optional_number(d.mean_episodes)},
                          {"spread_pct", optional_number(d.spread_pct)}});
  }
  return json{{"agent", a.agent},
              {"drifts", drifts},
              {"total_steps", json{{"mean", a.mean_total_steps},
                                   {"spread_pct", optional_number(a.total_steps_spread_pct)}}}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
  return out;
}

std::string format_mean_spread(double mean, const std::optional<double>& spread_pct) {
  char buf[64];
  if (spread_pct)
    std::snprintf(buf, sizeof(buf), "%.2f ± %.2f%%", mean, *spread_pct);
  else
    std::snprintf(buf, sizeof(buf), "%.2f", mean);
  return buf;
}

// Replays the morphin agent's detector over a recorded trial so the trace
// can be exported without keeping per-episode detector state in every
// TrialRecord. Expansion episodes and alarm episodes reset the detector
// exactly as the agent did.
std::vector<DetectorTraceRow> rebuild_detector_trace(const PageHinkleyConfig& config,
                                                     const TrialRecord& record) {
  PageHinkleyDetector detector(config);
  std::vector<DetectorTraceRow> rows;
  rows.reserve(record.episode_reward.size());
  std::size_t next_expansion = 0;
  for (std::size_t episode = 0; episode < record.episode_reward.size(); ++episode) {
    if (next_expansion < record.expansion_episodes.size() &&
        record.expansion_episodes[next_expansion] == static_cast<long>(episode)) {
      detector.reset();
      ++next_expansion;
    }
    const bool drift = detector.update(record.episode_reward[episode]);
    const auto& s = detector.state();
    rows.push_back(DetectorTraceRow{static_cast<long>(episode), record.episode_reward[episode],
                                    s.running_mean, s.cum_dec, s.cum_inc, drift});
    if (drift) detector.reset();
  }
  return rows;
}

}  // namespace

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json run_summary_to_json(const RunSummary& summary) {
  json t_test = nullptr;
  if (summary.total_steps_test) {
    t_test = json{{"t", summary.total_steps_test->t},
                  {"df", summary.total_steps_test->df},
                  {"p_value", summary.total_steps_test->p_value}};
  }
  return json{{"drift_episodes", summary.drift_episodes},
              {"agents", json{{"morphin", agent_summary_to_json(summary.morphin)},
                              {"baseline", agent_summary_to_json(summary.baseline)}}},
              {"welch_total_steps", t_test},
              {"efficiency_ratio", optional_number(summary.efficiency_ratio)}};
}

json summary_to_json(const ExperimentSpec& spec, const RunSummary& summary,
                     const std::string& generated_at) {
  return json{{"tool", "morphin"},
              {"version", MORPHIN_VERSION},
              {"generated_at", generated_at},
              {"spec", spec_to_json(spec)},
              {"results", run_summary_to_json(summary)}};
}

void write_trials_csv(std::ostream& out, const ExperimentSpec& spec,
                      std::span<const TrialRecord> morphin_records,
                      std::span<const TrialRecord> baseline_records) {
  const auto drifts = spec.drift_episodes();
  out << "trial,agent,total_steps";
  for (long d : drifts) out << ",conv_after_" << d;
  out << '\n';
  auto write_rows = [&](std::span<const TrialRecord> records, const char* agent) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      out << i << ',' << agent << ',' << records[i].total_steps;
      for (std::size_t d = 0; d < drifts.size(); ++d) {
        out << ',';
        if (d < records[i].convergence.size() && records[i].convergence[d])
          out << *records[i].convergence[d];
        else
          out << "--";
      }
      out << '\n';
    }
  };
  write_rows(morphin_records, "morphin");
  write_rows(baseline_records, "baseline");
}

void write_series_csv(std::ostream& out, const TrialRecord& record) {
  out << "episode,reward,steps,epsilon,drift\n";
  char buf[128];
  for (std::size_t e = 0; e < record.episode_reward.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%d,%.9g,%d\n", e, record.episode_reward[e],
                  record.steps_taken[e], record.epsilon_at_start[e],
                  record.drift_flags[e] ? 1 : 0);
    out << buf;
  }
}

void print_summary_table(std::ostream& out, const RunSummary& summary) {
  std::vector<std::string> header{"Agent"};
  for (std::size_t i = 0; i < summary.drift_episodes.size(); ++i) {
    header.push_back("Drift " + std::to_string(i + 1) + " (ep " +
                     std::to_string(summary.drift_episodes[i]) + ")");
  }
  header.push_back("Total Steps");

  auto agent_row = [&](const AgentSummary& a) {
    std::vector<std::string> row{a.agent};
    for (const auto& d : a.drifts) {
      const int total = d.converged_trials + d.failed_trials;
      // Dash when convergence failed in at least half the trials.
      if (!d.mean_episodes || d.converged_trials * 2 < total)
        row.push_back("--");
      else
        row.push_back(format_mean_spread(*d.mean_episodes, d.spread_pct));
    }
    row.push_back(format_mean_spread(a.mean_total_steps, a.total_steps_spread_pct));
    return row;
  };
  const std::vector<std::vector<std::string>> rows{header, agent_row(summary.baseline),
                                                   agent_row(summary.morphin)};

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      out << std::left << std::setw(static_cast<int>(widths[c]) + 3) << rows[r][c];
    out << '\n';
    if (r == 0) out << std::string(std::accumulate(widths.begin(), widths.end(), std::size_t{0}) +
                                   3 * (widths.size() - 1), '-')
                    << '\n';
  }
  if (summary.total_steps_test) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "Welch t-test on total steps: t=%.3f, df=%.1f, p=%.3g\n",
                  summary.total_steps_test->t, summary.total_steps_test->df,
                  summary.total_steps_test->p_value);
    out << buf;
  }
  if (summary.efficiency_ratio) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Efficiency ratio (baseline/morphin): %.2fx\n",
                  *summary.efficiency_ratio);
    out << buf;
  }
}

void write_run_outputs(const std::filesystem::path& out_dir, const ExperimentSpec& spec,
                       const ExperimentResult& result, const RunOutputOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "series", ec);
  if (ec)
    throw std::ios_base::failure("cannot create output directory '" + out_dir.string() +
                                 "': " + ec.message());

  {
    auto out = open_output(out_dir / "summary.json");
    out << summary_to_json(spec, result.summary, iso8601_utc_now()).dump(2) << '\n';
  }
  {
    auto out = open_output(out_dir / "trials.csv");
    write_trials_csv(out, spec, result.morphin, result.baseline);
  }
  for (int trial = 0; trial < spec.trials; ++trial) {
    for (const auto* kind : {"morphin", "baseline"}) {
      const auto& records = std::string(kind) == "morphin" ? result.morphin : result.baseline;
      auto out = open_output(out_dir / "series" /
                             (std::string(kind) + "_" + std::to_string(trial) + ".csv"));
      write_series_csv(out, records[static_cast<std::size_t>(trial)]);
    }
  }
  if (options.qtable_dump) {
    for (const AgentKind kind : {AgentKind::morphin, AgentKind::baseline}) {
      const TrialRecord record = run_trial(spec, kind, 0, /*capture_qtable=*/true);
      auto out = open_output(out_dir / ("qtable_" + to_string(kind) + ".csv"));
      record.final_q->write_csv(out);
    }
  }
  if (options.step_trace) {
    for (const AgentKind kind : {AgentKind::morphin, AgentKind::baseline}) {
      auto out = open_output(out_dir / ("steps_" + to_string(kind) + "_0.csv"));
      out << "step,episode,state,action,reward,q_value,epsilon,alpha,td_error,explored\n";
      long global_step = 0;
      char buf[256];
      run_trial(spec, kind, 0, false,
                [&](long episode, long /*step*/, const StepOutcome& o, double q_value) {
                  std::snprintf(buf, sizeof(buf), "%ld,%ld,%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n",
                                global_step++, episode, o.transition.state, o.transition.action,
                                o.transition.reward, q_value, o.epsilon_used, o.alpha_used,
                                o.td_error, o.explored ? 1 : 0);
                  out << buf;
                });
    }
  }
  if (options.detector_trace && !result.morphin.empty()) {
    auto out = open_output(out_dir / "detector_trace_morphin_0.csv");
    write_detector_trace(out, spec.morphin.ph,
                         rebuild_detector_trace(spec.morphin.ph, result.morphin.front()));
  }
}

}  // namespace morphin
