#include "minimax/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "minimax/errors.hpp"

namespace minimax {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::AdaGda: return "adagda";
    case Algorithm::VrAdaGda: return "vr_adagda";
    case Algorithm::Sgda: return "sgda";
  }
  throw ContractViolation("unknown algorithm");
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "adagda") return Algorithm::AdaGda;
  if (s == "vr_adagda") return Algorithm::VrAdaGda;
  if (s == "sgda") return Algorithm::Sgda;
  throw ConfigError("unknown algorithm: " + s);
}

const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::PolyHalf: return "poly_half";
    case ScheduleKind::PolyThird: return "poly_third";
    case ScheduleKind::ConstantEta: return "constant";
  }
  throw ContractViolation("unknown schedule kind");
}

ScheduleKind schedule_from_string(const std::string& s) {
  if (s == "poly_half") return ScheduleKind::PolyHalf;
  if (s == "poly_third") return ScheduleKind::PolyThird;
  if (s == "constant") return ScheduleKind::ConstantEta;
  throw ConfigError("unknown schedule: " + s);
}

const char* to_string(OutputRule r) {
  switch (r) {
    case OutputRule::FinalIterate: return "final";
    case OutputRule::UniformRandomIterate: return "uniform_random";
  }
  throw ContractViolation("unknown output rule");
}

OutputRule output_rule_from_string(const std::string& s) {
  if (s == "final") return OutputRule::FinalIterate;
  if (s == "uniform_random") return OutputRule::UniformRandomIterate;
  throw ConfigError("unknown output rule: " + s);
}

namespace {

void validate_schedule(const ScheduleSpec& sched) {
  if (sched.kind == ScheduleKind::ConstantEta) {
    if (!(sched.eta > 0.0 && sched.eta <= 1.0))
      throw ConfigError("constant step must lie in (0,1]");
    return;
  }
  if (!(sched.k > 0.0)) throw ConfigError("schedule k must be positive");
  if (!(sched.m >= 1.0)) throw ConfigError("schedule m must be at least 1");
  const double eta0 = sched.kind == ScheduleKind::PolyHalf ? sched.k / std::sqrt(sched.m)
                                                           : sched.k / std::cbrt(sched.m);
  if (!(eta0 <= 1.0)) throw ConfigError("schedule implies eta_0 > 1; raise m");
}

}  // namespace

double eta_schedule(const ScheduleSpec& sched, std::int64_t t) {
  MM_CHECK(t >= 0, "schedule index must be nonnegative");
  switch (sched.kind) {
    case ScheduleKind::PolyHalf:
      return sched.k / std::sqrt(sched.m + static_cast<double>(t));
    case ScheduleKind::PolyThird:
      return sched.k / std::cbrt(sched.m + static_cast<double>(t));
    case ScheduleKind::ConstantEta:
      return sched.eta;
  }
  throw ContractViolation("unknown schedule kind");
}

std::vector<std::int64_t> slope_checkpoints(std::int64_t t_total) {
  std::vector<std::int64_t> out;
  if (t_total < 1) return out;
  const std::int64_t lo = std::max<std::int64_t>(1, t_total / 100);
  for (int j = 0;; ++j) {
    const auto v = static_cast<std::int64_t>(std::llround(std::pow(10.0, j / 4.0)));
    if (v > t_total) break;
    if (v >= lo && (out.empty() || out.back() != v)) out.push_back(v);
  }
  if (out.empty() || out.back() != t_total) out.push_back(t_total);
  return out;
}

double fit_rate_slope(const std::vector<std::int64_t>& ts, const std::vector<double>& values) {
  MM_CHECK(ts.size() == values.size(), "mismatched slope inputs");
  MM_CHECK(ts.size() >= 4, "rate fit needs at least 4 checkpoints");
  const std::size_t n = ts.size();
  Vector lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    MM_CHECK(ts[i] >= 1, "checkpoint indices must be positive");
    MM_CHECK(values[i] > 0.0, "rate fit needs positive values");
    lx[i] = std::log(static_cast<double>(ts[i]));
    ly[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  MM_CHECK(den > 0.0, "rate fit needs distinct checkpoints");
  return num / den;
}

namespace {

Vector interpolate(const Vector& from, const Vector& to, double eta) {
  Vector out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) out[i] = from[i] + eta * (to[i] - from[i]);
  return out;
}

// the y-side scalar reported in traces: the emitted scalar for scalar-form
// metrics, the smallest diagonal entry otherwise
double metric_scalar(const Metric& m, std::size_t dim) {
  return m.kind == MetricKind::Diagonal ? m.lambda_min(dim) : m.entry(0);
}

struct Diag {
  double grad_map = std::numeric_limits<double>::quiet_NaN();
  double grad_f = std::numeric_limits<double>::quiet_NaN();
  double y_gap = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

RunResult run(const StochasticMinimaxProblem& problem, const SolverConfig& cfg,
              std::uint64_t seed) {
  if (cfg.iters < 0) throw ConfigError("iteration count must be nonnegative");
  if (cfg.q < 1) throw ConfigError("batch size must be at least 1");
  if (cfg.gamma < 0.0 || cfg.lambda < 0.0)
    throw ConfigError("step scales must be nonnegative (0 freezes the block)");
  if (cfg.divergence_guard <= 0.0) throw ConfigError("divergence guard must be positive");
  validate_schedule(cfg.schedule);
  const bool vr = cfg.algo == Algorithm::VrAdaGda;
  const bool sgda = cfg.algo == Algorithm::Sgda;
  if (!sgda && (cfg.c1 <= 0.0 || cfg.c2 <= 0.0))
    throw ConfigError("momentum coefficients must be positive");

  const auto t_start = std::chrono::steady_clock::now();
  const auto wall_now = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  const std::int64_t t_total = cfg.iters;
  const std::int64_t stride =
      cfg.log_stride > 0 ? cfg.log_stride : std::max<std::int64_t>(1, t_total / 1000);
  const auto& ps = problem.spec();
  const bool closed = problem.has_closed_form();

  RngStream rng_batch(seed, 0);
  RngStream rng_out(seed, 1);

  Vector x = problem.initial_x();
  Vector y = problem.initial_y();

  auto batch = problem.draw_batch(rng_batch, cfg.q);
  Vector gx_last, gy_last;
  problem.grad_batch(x, y, batch, gx_last, gy_last);
  std::uint64_t calls = 2 * static_cast<std::uint64_t>(cfg.q);

  EstimatorState est =
      init_estimator(vr ? EstimatorKind::VarianceReduced : EstimatorKind::Momentum, gx_last,
                     gy_last);
  AdaptState adapt_x(sgda ? AdaptConfig{AdaptRule::Constant} : cfg.adapt_x, ps.d1);
  AdaptState adapt_y(sgda ? AdaptConfig{AdaptRule::Constant} : cfg.adapt_y, ps.d2);

  // coefficient used per iteration: alpha_{t+1} = c1*eta_t (or c1*eta_t^2)
  const auto mix_coeffs = [&](double eta) -> std::pair<double, double> {
    if (sgda) return {1.0, 1.0};
    const double a = vr ? cfg.c1 * eta * eta : cfg.c1 * eta;
    const double b = vr ? cfg.c2 * eta * eta : cfg.c2 * eta;
    if (!(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0))
      throw ConfigError("schedule produces a mixing weight outside (0,1]");
    return {a, b};
  };
  mix_coeffs(eta_schedule(cfg.schedule, 1));  // fail fast: eta is nonincreasing

  RunResult res;
  res.output_x = x;
  res.output_y = y;
  res.output_t = 1;
  std::int64_t zeta = 0;
  if (cfg.output_rule == OutputRule::UniformRandomIterate && t_total >= 1)
    zeta = 1 + static_cast<std::int64_t>(rng_out.next_index(static_cast<std::uint64_t>(t_total)));

  const auto checkpoints = slope_checkpoints(t_total);
  std::size_t cp_next = 0;
  double gm_running_sum = 0.0;

  double alpha_formed = 1.0, beta_formed = 1.0;  // the weights that built current v_t / w_t

  const auto diagnostics = [&](const Metric& a_metric) -> Diag {
    Diag d;
    if (!closed) return d;
    const Vector gf = problem.grad_F_exact(x);
    d.grad_f = norm2(gf);
    d.y_gap = norm2(vsub(y, problem.y_star(x)));
    if (cfg.gamma > 0.0)
      d.grad_map = norm2(gradient_mapping(ps.x_set, x, gf, a_metric, cfg.gamma));
    return d;
  };

  const auto emit_row = [&](std::int64_t t, double eta, const Metric& am, const Metric& bm,
                            const Diag& d) {
    MM_CHECK(ps.x_set.contains(x), "x iterate left the feasible set");
    MM_CHECK(ps.y_set.contains(y), "y iterate left the feasible set");
    TraceRow row;
    row.t = t;
    row.eta = eta;
    row.alpha = alpha_formed;
    row.beta = beta_formed;
    row.grad_map_norm = d.grad_map;
    row.grad_f_norm = d.grad_f;
    row.y_gap = d.y_gap;
    const auto [ve2, we2] = estimator_error(problem, est, x, y);
    row.v_err = std::sqrt(ve2);
    row.w_err = std::sqrt(we2);
    row.a_min = am.lambda_min(ps.d1);
    row.a_max = am.lambda_max(ps.d1);
    row.b_t = metric_scalar(bm, ps.d2);
    row.oracle_calls = calls;
    row.wall_seconds = wall_now();
    res.trace.push_back(std::move(row));
  };

  for (std::int64_t t = 1; t <= t_total; ++t) {
    const Metric a_metric = adapt_x.update(gx_last, est.v);
    const Metric b_metric = adapt_y.update(gy_last, est.w);
    const double eta = eta_schedule(cfg.schedule, t);

    if (t == zeta) {
      res.output_x = x;
      res.output_y = y;
      res.output_t = t;
    }

    Diag d;
    bool have_diag = false;
    if (closed && cfg.gamma > 0.0) {
      d = diagnostics(a_metric);
      have_diag = true;
      gm_running_sum += d.grad_map;
      if (cp_next < checkpoints.size() && t == checkpoints[cp_next]) {
        res.checkpoint_ts.push_back(t);
        res.checkpoint_avg.push_back(gm_running_sum / static_cast<double>(t));
        ++cp_next;
      }
    }
    if (t == 1 || t % stride == 0) {
      if (!have_diag) d = diagnostics(a_metric);
      emit_row(t, eta, a_metric, b_metric, d);
    }

    const Vector x_tilde =
        cfg.gamma > 0.0 ? generalized_project(ps.x_set, x, est.v, a_metric, cfg.gamma) : x;
    const Vector y_tilde =
        cfg.lambda > 0.0
            ? generalized_project(ps.y_set, y, scaled(est.w, -1.0), b_metric, cfg.lambda)
            : y;
    Vector x_new = interpolate(x, x_tilde, eta);
    Vector y_new = interpolate(y, y_tilde, eta);

    if (!all_finite(x_new) || !all_finite(y_new) || norm2(x_new) > cfg.divergence_guard ||
        norm2(y_new) > cfg.divergence_guard) {
      res.status = RunStatus::Diverged;
      res.diverged_at = t;
      break;  // x, y still hold the last finite state
    }

    const auto [alpha, beta] = mix_coeffs(eta);
    batch = problem.draw_batch(rng_batch, cfg.q);
    Vector gnx, gny;
    problem.grad_batch(x_new, y_new, batch, gnx, gny);
    if (vr) {
      Vector gox, goy;
      problem.grad_batch(x, y, batch, gox, goy);
      calls += 4 * static_cast<std::uint64_t>(cfg.q);
      storm_update(est, gnx, gny, gox, goy, alpha, beta);
    } else {
      calls += 2 * static_cast<std::uint64_t>(cfg.q);
      momentum_update(est, gnx, gny, alpha, beta);
    }
    gx_last = std::move(gnx);
    gy_last = std::move(gny);
    x = std::move(x_new);
    y = std::move(y_new);
    alpha_formed = alpha;
    beta_formed = beta;
  }

  if (res.status == RunStatus::Completed) {
    // terminal snapshot: the metric iteration T+1 would generate, so every
    // row is self-consistent
    const Metric a_metric = adapt_x.update(gx_last, est.v);
    const Metric b_metric = adapt_y.update(gy_last, est.w);
    const std::int64_t t_term = t_total + 1;
    emit_row(t_term, eta_schedule(cfg.schedule, t_term), a_metric, b_metric,
             diagnostics(a_metric));
    if (cfg.output_rule == OutputRule::FinalIterate || t_total < 1) {
      res.output_x = x;
      res.output_y = y;
      res.output_t = t_term;
    }
  } else if (cfg.output_rule == OutputRule::FinalIterate || res.output_t > res.diverged_at) {
    // keep the last finite state; a random draw past the abort never happened
    res.output_x = x;
    res.output_y = y;
    res.output_t = res.diverged_at;
  }

  res.final_x = std::move(x);
  res.final_y = std::move(y);
  res.oracle_calls = calls;
  return res;
}

}  // namespace minimax
