#include "minimax/harness.hpp"

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "minimax/csv.hpp"
#include "minimax/errors.hpp"

namespace minimax {

LogLevel log_level_from_env() {
  const char* v = std::getenv("MINIMAX_GDA_LOG");
  if (v == nullptr) return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet") return LogLevel::Quiet;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Info;  // unknown values keep the default rather than abort
}

namespace {

struct Logger {
  LogLevel level;
  std::ostream& err;
  void info(const std::string& msg) const {
    if (level != LogLevel::Quiet) err << "[minimax] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level == LogLevel::Debug) err << "[minimax] " << msg << "\n";
  }
};

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out.exceptions(std::ios::failbit | std::ios::badbit);
  out << content;
}

std::string trace_path(const std::string& dir, Algorithm algo, std::uint64_t seed) {
  return dir + "/trace_" + to_string(algo) + "_seed" + std::to_string(seed) + ".csv";
}

// pooled per-seed runs; the result vector is indexed by seed position so the
// outcome is independent of scheduling
std::vector<RunResult> sweep_runs(const StochasticMinimaxProblem& problem,
                                  const SolverConfig& solver,
                                  const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  std::vector<RunResult> results(seeds.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, seeds.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) results[i] = run(problem, solver, seeds[i]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1))
          results[i] = run(problem, solver, seeds[i]);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return results;
}

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stderr(const std::vector<double>& xs, double mean) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

using ColumnGetter = double (*)(const TraceRow&);
constexpr std::array<std::pair<const char*, ColumnGetter>, 13> kSummaryColumns{{
    {"t", [](const TraceRow& r) { return static_cast<double>(r.t); }},
    {"eta", [](const TraceRow& r) { return r.eta; }},
    {"alpha", [](const TraceRow& r) { return r.alpha; }},
    {"beta", [](const TraceRow& r) { return r.beta; }},
    {"grad_map_norm", [](const TraceRow& r) { return r.grad_map_norm; }},
    {"grad_F_norm", [](const TraceRow& r) { return r.grad_f_norm; }},
    {"y_gap", [](const TraceRow& r) { return r.y_gap; }},
    {"v_err", [](const TraceRow& r) { return r.v_err; }},
    {"w_err", [](const TraceRow& r) { return r.w_err; }},
    {"a_min", [](const TraceRow& r) { return r.a_min; }},
    {"a_max", [](const TraceRow& r) { return r.a_max; }},
    {"b_t", [](const TraceRow& r) { return r.b_t; }},
    {"oracle_calls", [](const TraceRow& r) { return static_cast<double>(r.oracle_calls); }},
}};

}  // namespace

std::string summary_csv(const std::vector<RunResult>& results) {
  MM_CHECK(!results.empty(), "summary needs at least one run");
  std::ostringstream os;
  os << "column,mean,stderr\n";
  for (const auto& [name, get] : kSummaryColumns) {
    std::vector<double> xs;
    xs.reserve(results.size());
    for (const auto& r : results) {
      MM_CHECK(!r.trace.empty(), "run produced an empty trace");
      xs.push_back(get(r.trace.back()));
    }
    const double mean = sample_mean(xs);
    os << name << "," << format_double(mean) << "," << format_double(sample_stderr(xs, mean))
       << "\n";
  }
  return os.str();
}

SweepOutcome run_sweep(const ExperimentConfig& cfg, std::ostream& err) {
  const Logger log{log_level_from_env(), err};
  const auto problem = make_problem_from(cfg.problem);
  std::filesystem::create_directories(cfg.output.dir);
  write_text_file(cfg.output.dir + "/config_resolved.toml", serialize_config(cfg));

  log.info("sweep: " + std::string(to_string(cfg.solver.algo)) + " on " + problem->family() +
           ", " + std::to_string(cfg.sweep.seeds.size()) + " seed(s), jobs=" +
           std::to_string(cfg.sweep.jobs));
  SweepOutcome out;
  out.seeds = cfg.sweep.seeds;
  out.results = sweep_runs(*problem, cfg.solver, cfg.sweep.seeds, cfg.sweep.jobs);
  for (std::size_t i = 0; i < out.seeds.size(); ++i) {
    const auto& res = out.results[i];
    const auto path = trace_path(cfg.output.dir, cfg.solver.algo, out.seeds[i]);
    write_trace_csv_file(path, res.trace);
    out.csv_paths.push_back(path);
    if (res.status == RunStatus::Diverged) {
      out.any_diverged = true;
      log.info("seed " + std::to_string(out.seeds[i]) + " diverged at t=" +
               std::to_string(res.diverged_at));
    } else {
      log.debug("seed " + std::to_string(out.seeds[i]) + " done, " +
                std::to_string(res.trace.size()) + " rows");
    }
  }
  write_text_file(cfg.output.dir + "/summary.csv", summary_csv(out.results));
  return out;
}

CompareOutcome compare_algorithms(const ExperimentConfig& cfg, const std::vector<Algorithm>& algos,
                                  bool oracle_budget, std::ostream& err) {
  const Logger log{log_level_from_env(), err};
  if (algos.empty()) throw ConfigError("compare needs at least one algorithm");
  const auto problem = make_problem_from(cfg.problem);
  std::filesystem::create_directories(cfg.output.dir);
  write_text_file(cfg.output.dir + "/config_resolved.toml", serialize_config(cfg));

  const std::int64_t base_iters = cfg.solver.iters;
  CompareOutcome out;
  out.algos = algos;

  std::ostringstream curve, summary;
  curve << "algo,t,oracle_calls,metric_mean,metric_se\n";
  summary << "algo,iters,slope,final_metric_mean,final_metric_se\n";

  for (const auto algo : algos) {
    SolverConfig solver = cfg.solver;
    solver.algo = algo;
    // the variance-reduced step costs 4q oracle calls instead of 2q, so a
    // shared budget halves its iteration count
    if (oracle_budget && algo == Algorithm::VrAdaGda) solver.iters = base_iters / 2;
    if (algo != Algorithm::Sgda) {
      const auto pc = constants_for(*problem, solver);
      const auto s = suggest_schedule(algo, solver.schedule.k, solver.q, pc);
      solver.schedule.kind =
          algo == Algorithm::VrAdaGda ? ScheduleKind::PolyThird : ScheduleKind::PolyHalf;
      solver.schedule.m = s.m;
      solver.c1 = s.c1;
      solver.c2 = s.c2;
      solver.lambda = s.lambda;
      solver.gamma = s.gamma;
      log.debug(std::string(to_string(algo)) + ": m=" + format_double(s.m) +
                " c1=" + format_double(s.c1) + " c2=" + format_double(s.c2) +
                " lambda=" + format_double(s.lambda) + " gamma=" + format_double(s.gamma));
    }
    out.iters.push_back(solver.iters);
    log.info("compare: " + std::string(to_string(algo)) + " for " +
             std::to_string(solver.iters) + " iterations");

    const auto results = sweep_runs(*problem, solver, cfg.sweep.seeds, cfg.sweep.jobs);
    for (std::size_t i = 0; i < cfg.sweep.seeds.size(); ++i) {
      write_trace_csv_file(trace_path(cfg.output.dir, algo, cfg.sweep.seeds[i]),
                           results[i].trace);
      if (results[i].status == RunStatus::Diverged) out.any_diverged = true;
    }

    const auto& ts = results.front().checkpoint_ts;
    std::vector<double> means, ses;
    for (std::size_t c = 0; c < ts.size(); ++c) {
      std::vector<double> xs;
      for (const auto& r : results) {
        MM_CHECK(r.checkpoint_ts == ts, "checkpoint grids differ across seeds");
        xs.push_back(r.checkpoint_avg[c]);
      }
      const double mean = sample_mean(xs);
      means.push_back(mean);
      ses.push_back(sample_stderr(xs, mean));
      const auto t = static_cast<std::uint64_t>(ts[c]);
      const auto q = static_cast<std::uint64_t>(solver.q);
      const std::uint64_t calls =
          algo == Algorithm::VrAdaGda ? 2 * q + 4 * q * (t - 1) : 2 * q * t;
      curve << to_string(algo) << "," << ts[c] << "," << calls << "," << format_double(mean)
            << "," << format_double(ses[c]) << "\n";
    }

    double slope = std::numeric_limits<double>::quiet_NaN();
    if (ts.size() >= 4) slope = fit_rate_slope(ts, means);
    out.slopes.push_back(slope);
    summary << to_string(algo) << "," << solver.iters << "," << format_double(slope) << ","
            << format_double(means.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : means.back())
            << ","
            << format_double(ses.empty() ? std::numeric_limits<double>::quiet_NaN() : ses.back())
            << "\n";
  }

  write_text_file(cfg.output.dir + "/compare.csv", curve.str());
  write_text_file(cfg.output.dir + "/compare_summary.csv", summary.str());
  return out;
}

std::string render_validation(const ValidationReport& rep, const ConditionCheck& batch_regime) {
  std::ostringstream os;
  if (rep.checks.empty()) os << "no step-size conditions apply to this algorithm\n";
  for (const auto& c : rep.checks) {
    os << (c.ok ? "      ok  " : "VIOLATED  ") << c.name << ": " << format_double(c.lhs) << " "
       << c.relation << " " << format_double(c.rhs) << "\n";
  }
  os << "    note  " << batch_regime.name << " (advisory): " << format_double(batch_regime.lhs)
     << " " << batch_regime.relation << " " << format_double(batch_regime.rhs) << " is "
     << (batch_regime.ok ? "satisfied" : "not satisfied") << "\n";
  os << "overall: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

ExperimentConfig suggested_config(const ExperimentConfig& cfg) {
  const auto problem = make_problem_from(cfg.problem);
  const auto pc = constants_for(*problem, cfg.solver);
  const auto s = suggest_schedule(cfg.solver.algo, cfg.solver.schedule.k, cfg.solver.q, pc);
  ExperimentConfig out = cfg;
  out.solver.schedule.kind =
      cfg.solver.algo == Algorithm::VrAdaGda ? ScheduleKind::PolyThird : ScheduleKind::PolyHalf;
  out.solver.schedule.m = s.m;
  out.solver.c1 = s.c1;
  out.solver.c2 = s.c2;
  out.solver.lambda = s.lambda;
  out.solver.gamma = s.gamma;
  return out;
}

namespace {

std::vector<std::uint64_t> parse_seeds_arg(const std::string& arg) {
  const auto parse_one = [&](const std::string& cell) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw ConfigError("--seeds: expected an integer, got '" + cell + "'");
    return v;
  };
  std::vector<std::uint64_t> seeds;
  if (arg.find(',') == std::string::npos) {
    const auto n = parse_one(arg);
    if (n == 0) throw ConfigError("--seeds: seed count must be positive");
    for (std::uint64_t s = 0; s < n; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(arg);
  std::string cell;
  while (std::getline(ss, cell, ','))
    if (!cell.empty()) seeds.push_back(parse_one(cell));
  if (seeds.empty()) throw ConfigError("--seeds: empty seed list");
  return seeds;
}

std::vector<Algorithm> parse_algos_arg(std::string arg) {
  for (auto& ch : arg)
    if (ch == '-') ch = '_';  // accept the hyphenated spelling
  std::vector<Algorithm> algos;
  std::stringstream ss(arg);
  std::string cell;
  while (std::getline(ss, cell, ','))
    if (!cell.empty()) algos.push_back(algorithm_from_string(cell));
  if (algos.empty()) throw ConfigError("--algos: empty algorithm list");
  return algos;
}

}  // namespace

int cli_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stochastic minimax optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir, seeds_arg, budget_mode = "iter";
  std::string algos_arg = "adagda,vr_adagda";
  std::int64_t jobs = 0, stride = -1;
  bool strict = false;

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")->required();
  };
  const auto add_sweep_flags = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seeds", seeds_arg,
                    "seed count N (runs 0..N-1) or explicit comma list like 3,5,9");
    sub->add_option("--jobs", jobs, "worker threads for the seed sweep")
        ->check(CLI::PositiveNumber);
    sub->add_option("--stride", stride, "trace logging stride (0 = auto)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* cmd_run = app.add_subcommand("run", "execute a seed sweep and write trajectory CSVs");
  add_config(cmd_run);
  add_sweep_flags(cmd_run);

  auto* cmd_validate =
      app.add_subcommand("validate", "report the step-size conditions for the config");
  add_config(cmd_validate);
  cmd_validate->add_flag("--strict", strict, "exit nonzero when a condition is violated");

  auto* cmd_compare =
      app.add_subcommand("compare", "run several algorithms under a shared budget");
  add_config(cmd_compare);
  add_sweep_flags(cmd_compare);
  cmd_compare->add_option("--algos", algos_arg, "comma list: adagda, vr-adagda, sgda");
  cmd_compare->add_option("--budget-mode", budget_mode, "match iterations or oracle calls")
      ->check(CLI::IsMember({"iter", "oracle"}));

  auto* cmd_suggest = app.add_subcommand(
      "suggest-config", "print the config with theorem-compliant solver constants");
  add_config(cmd_suggest);
  cmd_suggest->add_option("--out", out_dir, "also write config_suggested.toml to this directory");

  std::vector<const char*> argv;
  argv.push_back("minimax_gda");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg = parse_config_file(config_path);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (!seeds_arg.empty()) cfg.sweep.seeds = parse_seeds_arg(seeds_arg);
    if (jobs > 0) cfg.sweep.jobs = static_cast<std::size_t>(jobs);
    if (stride >= 0) cfg.solver.log_stride = stride;

    if (cmd_run->parsed()) {
      const auto res = run_sweep(cfg, err);
      out << "wrote " << res.csv_paths.size() << " trace file(s), summary.csv and the resolved "
          << "config to " << cfg.output.dir << "\n";
      if (res.any_diverged) {
        err << "numerical abort: at least one run diverged\n";
        return 2;
      }
      return 0;
    }
    if (cmd_validate->parsed()) {
      const auto problem = make_problem_from(cfg.problem);
      const auto pc = constants_for(*problem, cfg.solver);
      const auto rep = validate_config(cfg.solver, pc);
      out << render_validation(rep, check_batch_regime(cfg.solver.q, pc));
      return strict && !rep.pass ? 1 : 0;
    }
    if (cmd_compare->parsed()) {
      const auto res =
          compare_algorithms(cfg, parse_algos_arg(algos_arg), budget_mode == "oracle", err);
      out << "wrote compare.csv, compare_summary.csv and per-run traces to " << cfg.output.dir
          << "\n";
      if (res.any_diverged) {
        err << "numerical abort: at least one run diverged\n";
        return 2;
      }
      return 0;
    }
    // suggest-config
    const auto suggested = suggested_config(cfg);
    const auto text = serialize_config(suggested);
    out << text;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_text_file(out_dir + "/config_suggested.toml", text);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedCapability& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical abort: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace minimax
