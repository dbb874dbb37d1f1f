#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minimax/adapt.hpp"
#include "minimax/estimators.hpp"
#include "minimax/problems.hpp"

namespace minimax {

enum class Algorithm { AdaGda, VrAdaGda, Sgda };
enum class ScheduleKind { PolyHalf, PolyThird, ConstantEta };
enum class OutputRule { FinalIterate, UniformRandomIterate };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);
const char* to_string(ScheduleKind k);
ScheduleKind schedule_from_string(const std::string& s);
const char* to_string(OutputRule r);
OutputRule output_rule_from_string(const std::string& s);

// eta_t = k/(m+t)^{1/2} or k/(m+t)^{1/3}, or a constant; poly schedules need
// m large enough that eta_0 <= 1
struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::PolyHalf;
  double k = 1.0;
  double m = 1.0;
  double eta = 0.9;  // ConstantEta only
};

double eta_schedule(const ScheduleSpec& sched, std::int64_t t);

struct SolverConfig {
  Algorithm algo = Algorithm::AdaGda;
  double gamma = 0.01;   // x prox scale; 0 freezes the x block
  double lambda = 0.1;   // y prox scale; 0 freezes the y block
  ScheduleSpec schedule;
  double c1 = 1.0;       // alpha_{t+1} = c1*eta_t (AdaGDA) or c1*eta_t^2 (VR)
  double c2 = 1.0;
  std::size_t q = 1;
  std::int64_t iters = 1000;  // T
  AdaptConfig adapt_x, adapt_y;
  OutputRule output_rule = OutputRule::FinalIterate;
  std::int64_t log_stride = 0;       // 0: auto, max(1, T/1000)
  double divergence_guard = 1e12;
};

// one logged snapshot; t is 1-based, row t is the state entering iteration t
// and the terminal row carries t = T+1. Missing diagnostics are NaN and the
// CSV writer emits them as empty fields. Wall time is informational and
// excluded from the determinism contract.
struct TraceRow {
  std::int64_t t = 0;
  double eta = 0.0;
  double alpha = 0.0;  // coefficient that formed the current v_t (1.0 at init)
  double beta = 0.0;
  double grad_map_norm = 0.0;
  double grad_f_norm = 0.0;
  double y_gap = 0.0;
  double v_err = 0.0;
  double w_err = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  double b_t = 0.0;
  std::uint64_t oracle_calls = 0;
  double wall_seconds = 0.0;
};

enum class RunStatus { Completed, Diverged };

struct RunResult {
  RunStatus status = RunStatus::Completed;
  std::int64_t diverged_at = 0;
  std::vector<TraceRow> trace;
  Vector final_x, final_y;
  Vector output_x, output_y;  // selected by the output rule
  std::int64_t output_t = 0;
  std::uint64_t oracle_calls = 0;
  // running average of the gradient-mapping norm sampled on the geometric
  // checkpoint grid, the input to rate fitting
  std::vector<std::int64_t> checkpoint_ts;
  std::vector<double> checkpoint_avg;
};

RunResult run(const StochasticMinimaxProblem& problem, const SolverConfig& config,
              std::uint64_t seed);

// geometric grid 10^{j/4} (rounded, deduplicated) intersected with
// [max(1, T/100), T]
std::vector<std::int64_t> slope_checkpoints(std::int64_t t_total);

// least-squares slope of log(value) vs log(t); fewer than 4 points is a
// contract violation
double fit_rate_slope(const std::vector<std::int64_t>& ts, const std::vector<double>& values);

// ----- theorem-condition validator -----

struct ProblemConstants {
  double mu = 1.0;
  double l_f = 1.0;
  double b = 1.0;      // lower bound of the y-metric scalar
  double b_hat = 1.0;  // upper bound of the y-metric scalar
  double rho = 1.0;    // x-metric spectral floor
};

struct ConditionCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  std::string relation;  // "<=" or ">="
};

struct ValidationReport {
  bool pass = false;
  std::vector<ConditionCheck> checks;
};

// evaluates the step-size conditions of the convergence theorems for the
// configured algorithm; advisory, never throws on failed conditions
ValidationReport validate_config(const SolverConfig& config, const ProblemConstants& pc);

// large-batch regime check q = kappa^nu <= 16/(81 L_f mu); optional mode
ConditionCheck check_batch_regime(std::size_t q, const ProblemConstants& pc);

struct SuggestedSchedule {
  double c1 = 0.0, c2 = 0.0, m = 0.0, lambda = 0.0, gamma = 0.0;
};

// tightest compliant constants for given k (and q for the variance-reduced
// rule): c1, c2, m at their lower bounds, lambda and gamma at their upper
// bounds; the result always validates
SuggestedSchedule suggest_schedule(Algorithm algo, double k, std::size_t q,
                                   const ProblemConstants& pc);

}  // namespace minimax
