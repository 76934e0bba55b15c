#ifndef MORPHIN_REPORT_HPP
#define MORPHIN_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "morphin/harness.hpp"

namespace morphin {

// summary.json payload: results plus provenance (spec echo, seed, tool
// version, timestamp). Everything except "generated_at" is a pure function
// of the spec.
nlohmann::json summary_to_json(const ExperimentSpec& spec, const RunSummary& summary,
                               const std::string& generated_at);
nlohmann::json run_summary_to_json(const RunSummary& summary);

std::string iso8601_utc_now();

// trials.csv: one row per (trial, agent) with total steps and per-drift
// convergence episodes ("--" = failed to converge).
void write_trials_csv(std::ostream& out, const ExperimentSpec& spec,
                      std::span<const TrialRecord> morphin_records,
                      std::span<const TrialRecord> baseline_records);

// series/<agent>_<trial>.csv: per-episode reward, steps, epsilon, drift flag.
void write_series_csv(std::ostream& out, const TrialRecord& record);

// Text table over both agents, one drift column per scheduled drift.
void print_summary_table(std::ostream& out, const RunSummary& summary);

struct RunOutputOptions {
  bool qtable_dump = false;    // final Q-table of trial 0, per agent
  bool detector_trace = false;  // per-episode detector trace, morphin trial 0
  bool step_trace = false;      // per-step trace of trial 0, per agent
};

// Writes summary.json, trials.csv and the per-trial series files into
// out_dir. Filesystem failures surface as std::ios_base::failure.
void write_run_outputs(const std::filesystem::path& out_dir, const ExperimentSpec& spec,
                       const ExperimentResult& result, const RunOutputOptions& options = {});

}  // namespace morphin

#endif  // MORPHIN_REPORT_HPP
