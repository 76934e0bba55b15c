// morphin command line: runs the drift-adaptation experiments, validates
// configs, and exposes the Page-Hinkley detector for offline tuning.
//
// Exit codes: 0 success, 2 config/input error, 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "morphin/config_io.hpp"
#include "morphin/report.hpp"
#include "morphin/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct RunOptions {
  std::string config;
  std::string out_dir = "morphin_out";
  std::vector<std::string> overrides;
  std::optional<int> trials;
  std::optional<long> episodes;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallelism;
  bool qtable_dump = false;
  bool detector_trace = false;
  bool step_trace = false;
};

morphin::ExperimentSpec build_spec(const std::string& config,
                                   const std::vector<std::string>& overrides,
                                   std::optional<int> trials, std::optional<long> episodes,
                                   std::optional<std::uint64_t> seed) {
  morphin::ExperimentSpec spec = morphin::resolve_spec(config);
  nlohmann::json j = morphin::spec_to_json(spec);
  for (const auto& assignment : overrides) morphin::apply_override(j, assignment);
  if (trials) j["trials"] = *trials;
  if (episodes) j["episodes"] = *episodes;
  if (seed) j["base_seed"] = *seed;
  return morphin::spec_from_json(j);
}

int cmd_run(const RunOptions& opt) {
  const morphin::ExperimentSpec spec =
      build_spec(opt.config, opt.overrides, opt.trials, opt.episodes, opt.seed);
  const int parallelism =
      opt.parallelism.value_or(std::max(1u, std::thread::hardware_concurrency()));

  std::cerr << "running " << morphin::to_string(spec.scenario) << ": " << spec.trials
            << " trials x " << spec.episodes << " episodes, seed " << spec.base_seed << ", "
            << parallelism << " worker(s)\n";
  const morphin::ExperimentResult result = morphin::run_experiment(spec, parallelism);

  morphin::RunOutputOptions out_options;
  out_options.qtable_dump = opt.qtable_dump;
  out_options.detector_trace = opt.detector_trace;
  out_options.step_trace = opt.step_trace;
  morphin::write_run_outputs(opt.out_dir, spec, result, out_options);

  morphin::print_summary_table(std::cout, result.summary);
  std::cout << "outputs written to " << opt.out_dir << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& config) {
  const morphin::ExperimentSpec spec = morphin::resolve_spec(config);
  std::cout << "OK: " << morphin::to_string(spec.scenario) << ", " << spec.trials << " trials x "
            << spec.episodes << " episodes\n";
  return kExitOk;
}

struct PhTraceOptions {
  std::string input;
  std::string out;
  std::string column = "0";
  morphin::PageHinkleyConfig config;  // defaults delta=0.5 H=300 two_sided
  std::string direction = "two_sided";
};

// Reads one numeric column from a CSV. The column is selected by 0-based
// index or by header name; a non-numeric first row is treated as a header.
std::vector<double> read_csv_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open input file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::optional<std::size_t> column_index;
  bool first_line = true;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!column_index) {
      // Resolve the column from the first data row (or header row).
      bool numeric_column = true;
      try {
        column_index = static_cast<std::size_t>(std::stoul(column));
      } catch (const std::exception&) {
        numeric_column = false;
      }
      if (!numeric_column) {
        const auto it = std::find(fields.begin(), fields.end(), column);
        if (it == fields.end())
          throw morphin::ConfigError("column '" + column + "' not found in header of '" + path +
                                     "'");
        column_index = static_cast<std::size_t>(it - fields.begin());
        first_line = false;
        continue;  // consumed the header row
      }
    }
    if (*column_index >= fields.size())
      throw morphin::ConfigError("line " + std::to_string(line_number) + " of '" + path +
                                 "' has no column " + std::to_string(*column_index));
    try {
      values.push_back(std::stod(fields[*column_index]));
    } catch (const std::exception&) {
      if (first_line) {  // header row
        first_line = false;
        continue;
      }
      throw morphin::ConfigError("line " + std::to_string(line_number) + " of '" + path +
                                 "': '" + fields[*column_index] + "' is not a number");
    }
    first_line = false;
  }
  if (values.empty()) throw morphin::ConfigError("no numeric values found in '" + path + "'");
  return values;
}

int cmd_ph_trace(const PhTraceOptions& opt) {
  morphin::PageHinkleyConfig config = opt.config;
  config.direction = morphin::drift_direction_from_string(opt.direction);
  config.validate();
  const std::vector<double> values = read_csv_column(opt.input, opt.column);

  morphin::PageHinkleyDetector detector(config);
  std::vector<morphin::DetectorTraceRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool drift = detector.update(values[i]);
    const auto& s = detector.state();
    rows.push_back(morphin::DetectorTraceRow{static_cast<long>(i), values[i], s.running_mean,
                                             s.cum_dec, s.cum_inc, drift});
    if (drift) detector.reset();
  }

  if (opt.out.empty()) {
    morphin::write_detector_trace(std::cout, config, rows);
  } else {
    std::ofstream out(opt.out);
    if (!out) throw std::ios_base::failure("cannot write '" + opt.out + "'");
    morphin::write_detector_trace(out, config, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphin: self-adaptive Q-learning under concept drift"};
  app.set_version_flag("--version", MORPHIN_VERSION);
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "run an experiment (both agents) and write outputs");
  run->add_option("--config", run_opt.config,
                  "canned config name (e.g. gridworld_goals_desk) or path to a JSON spec")
      ->required();
  run->add_option("--out", run_opt.out_dir, "output directory (default morphin_out)");
  run->add_option("--trials", run_opt.trials, "override trial count");
  run->add_option("--episodes", run_opt.episodes, "override episode count");
  run->add_option("--seed", run_opt.seed, "override base seed");
  run->add_option("--parallelism", run_opt.parallelism, "worker thread count");
  run->add_option("--set", run_opt.overrides, "spec override key=value (repeatable)");
  run->add_flag("--qtable-dump", run_opt.qtable_dump, "export final Q-tables of trial 0");
  run->add_flag("--detector-trace", run_opt.detector_trace,
                "export the detector trace of morphin trial 0");
  run->add_flag("--step-trace", run_opt.step_trace, "export per-step traces of trial 0");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate-config", "parse and validate a config, then exit");
  validate->add_option("--config", validate_config, "canned config name or path")->required();

  PhTraceOptions ph_opt;
  auto* ph = app.add_subcommand("ph-trace",
                                "run the Page-Hinkley detector over a CSV column of values");
  ph->add_option("--input", ph_opt.input, "input CSV file")->required();
  ph->add_option("--column", ph_opt.column, "column index or header name (default 0)");
  ph->add_option("--out", ph_opt.out, "trace CSV output path (default stdout)");
  ph->add_option("--delta", ph_opt.config.delta, "sensitivity delta (default 0.5)");
  ph->add_option("--threshold", ph_opt.config.threshold_h, "alarm threshold H (default 300)");
  ph->add_option("--min-samples", ph_opt.config.min_samples, "warm-up sample count (default 30)");
  ph->add_option("--direction", ph_opt.direction,
                 "decrease_only | increase_only | two_sided (default two_sided)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (validate->parsed()) return cmd_validate(validate_config);
    if (ph->parsed()) return cmd_ph_trace(ph_opt);
  } catch (const morphin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
