#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minimax/config.hpp"
#include "minimax/solver.hpp"

namespace minimax {

// MINIMAX_GDA_LOG: quiet | info (default) | debug; messages go to the error
// stream and never into result files
enum class LogLevel { Quiet, Info, Debug };
LogLevel log_level_from_env();

struct SweepOutcome {
  std::vector<std::uint64_t> seeds;
  std::vector<RunResult> results;  // seed order, independent of worker count
  std::vector<std::string> csv_paths;
  bool any_diverged = false;
};

// one run per seed (worker pool when sweep.jobs > 1); writes
// trace_<algo>_seed<seed>.csv per seed, summary.csv, and the resolved config.
// Results are byte-identical for any worker count.
SweepOutcome run_sweep(const ExperimentConfig& cfg, std::ostream& err);

// summary.csv body: one row per trace column with mean and standard error of
// the final logged row across seeds
std::string summary_csv(const std::vector<RunResult>& results);

struct CompareOutcome {
  std::vector<Algorithm> algos;
  std::vector<std::int64_t> iters;  // per algo after budget matching
  std::vector<double> slopes;       // per algo, NaN when not fittable
  bool any_diverged = false;
};

// seed sweep per algorithm with a shared oracle budget when oracle_budget is
// set (the 4q-per-step estimator gets half the iterations of the 2q ones);
// writes per-run traces, compare.csv (checkpointed running-average metric vs
// cumulative oracle calls) and compare_summary.csv
CompareOutcome compare_algorithms(const ExperimentConfig& cfg, const std::vector<Algorithm>& algos,
                                  bool oracle_budget, std::ostream& err);

std::string render_validation(const ValidationReport& rep, const ConditionCheck& batch_regime);

// copy of the config with the solver constants replaced by the suggestion for
// the configured algorithm and schedule k
ExperimentConfig suggested_config(const ExperimentConfig& cfg);

// full command-line interface; returns the process exit code:
// 0 success, 1 config error, 2 numerical abort or I/O failure
int cli_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace minimax
