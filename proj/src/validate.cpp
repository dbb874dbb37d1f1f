#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/solver.hpp"

namespace minimax {

namespace {

void check_constants(const ProblemConstants& pc) {
  MM_CHECK(pc.mu > 0.0 && pc.l_f > 0.0 && pc.b > 0.0 && pc.b_hat >= pc.b && pc.rho > 0.0,
           "problem constants must be positive with b_hat >= b");
}

ConditionCheck make_check(std::string name, double lhs, const char* rel, double rhs) {
  ConditionCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = rel;
  c.ok = rel[0] == '<' ? lhs <= rhs : lhs >= rhs;
  return c;
}

// upper bounds on the step scales under the half-power schedule
double lambda_cap_half(const ProblemConstants& pc) {
  const double mu = pc.mu, lf = pc.l_f;
  const double first =
      405.0 * pc.b * lf * lf * std::pow(mu, 1.5) / (8.0 * std::sqrt(50.0 * lf * lf + 9.0 * mu * mu));
  return std::min(first, pc.b / (6.0 * lf));
}

double gamma_cap_half(const ProblemConstants& pc, double lambda, double m, double k) {
  const double mu = pc.mu, lf = pc.l_f;
  const double kappa = lf / mu;
  const double big_l = lf * (1.0 + kappa);
  const double inner = 400.0 * lf * lf * lambda * lambda + 24.0 * mu * mu * lambda * lambda +
                       16875.0 * pc.b_hat * pc.b_hat * kappa * kappa * lf * lf * mu * mu;
  const double first = 15.0 * std::sqrt(2.0) * lambda * mu * mu * pc.rho / (2.0 * std::sqrt(inner));
  const double second = std::sqrt(m) * pc.rho / (4.0 * big_l * k);
  return std::min(first, second);
}

double lambda_cap_third(const ProblemConstants& pc, std::size_t q) {
  const double first = 27.0 * pc.mu * pc.b * static_cast<double>(q) / 32.0;
  return std::min(first, pc.b / (6.0 * pc.l_f));
}

double gamma_cap_third(const ProblemConstants& pc, double lambda, double m, double k,
                       std::size_t q) {
  const double mu = pc.mu, lf = pc.l_f;
  const double kappa = lf / mu;
  const double big_l = lf * (1.0 + kappa);
  const double qd = static_cast<double>(q);
  const double inner =
      32.0 * lambda * lambda + 150.0 * qd * kappa * kappa * pc.b_hat * pc.b_hat;
  const double first = pc.rho * lambda * mu * std::sqrt(qd) / (lf * std::sqrt(inner));
  const double second = std::cbrt(m) * pc.rho / (2.0 * big_l * k);
  return std::min(first, second);
}

}  // namespace

ValidationReport validate_config(const SolverConfig& cfg, const ProblemConstants& pc) {
  check_constants(pc);
  ValidationReport rep;
  if (cfg.algo == Algorithm::Sgda) {
    rep.pass = true;  // no schedule theorem covers the plain baseline
    return rep;
  }
  const double k = cfg.schedule.k, m = cfg.schedule.m;
  const double mu = pc.mu, lf = pc.l_f;
  auto& checks = rep.checks;

  if (cfg.algo == Algorithm::AdaGda) {
    checks.push_back(make_check("schedule_kind",
                                cfg.schedule.kind == ScheduleKind::PolyHalf ? 1.0 : 0.0, ">=",
                                1.0));
    const double c1_lo = 9.0 * mu * mu / 4.0;
    const double c2_lo = 75.0 * lf * lf / 2.0;
    const double upper = std::sqrt(m) / k;
    checks.push_back(make_check("m_lower", m, ">=",
                                std::max({k * k, cfg.c1 * k * cfg.c1 * k, cfg.c2 * k * cfg.c2 * k})));
    checks.push_back(make_check("c1_lower", cfg.c1, ">=", c1_lo));
    checks.push_back(make_check("c1_upper", cfg.c1, "<=", upper));
    checks.push_back(make_check("c2_lower", cfg.c2, ">=", c2_lo));
    checks.push_back(make_check("c2_upper", cfg.c2, "<=", upper));
    checks.push_back(make_check("lambda_upper", cfg.lambda, "<=", lambda_cap_half(pc)));
    checks.push_back(
        make_check("gamma_upper", cfg.gamma, "<=", gamma_cap_half(pc, cfg.lambda, m, k)));
  } else {
    checks.push_back(make_check("schedule_kind",
                                cfg.schedule.kind == ScheduleKind::PolyThird ? 1.0 : 0.0, ">=",
                                1.0));
    const double k3 = k * k * k;
    const double c1_lo = 2.0 / (3.0 * k3) + 9.0 * mu * mu / 4.0;
    const double c2_lo = 2.0 / (3.0 * k3) + 75.0 * lf * lf / 2.0;
    const double m_lo = std::max({k3, std::pow(cfg.c1 * k, 3.0), std::pow(cfg.c2 * k, 3.0)});
    checks.push_back(make_check("c1_lower", cfg.c1, ">=", c1_lo));
    checks.push_back(make_check("c2_lower", cfg.c2, ">=", c2_lo));
    checks.push_back(make_check("m_lower", m, ">=", m_lo));
    checks.push_back(make_check("lambda_upper", cfg.lambda, "<=", lambda_cap_third(pc, cfg.q)));
    checks.push_back(make_check("gamma_upper", cfg.gamma, "<=",
                                gamma_cap_third(pc, cfg.lambda, m, k, cfg.q)));
  }
  rep.pass = true;
  for (const auto& c : checks) rep.pass = rep.pass && c.ok;
  return rep;
}

ConditionCheck check_batch_regime(std::size_t q, const ProblemConstants& pc) {
  check_constants(pc);
  return make_check("batch_regime", static_cast<double>(q), "<=",
                    16.0 / (81.0 * pc.l_f * pc.mu));
}

SuggestedSchedule suggest_schedule(Algorithm algo, double k, std::size_t q,
                                   const ProblemConstants& pc) {
  check_constants(pc);
  MM_CHECK(k > 0.0, "schedule k must be positive");
  MM_CHECK(q >= 1, "batch size must be at least 1");
  const double mu = pc.mu, lf = pc.l_f;
  SuggestedSchedule s;
  if (algo == Algorithm::AdaGda) {
    s.c1 = 9.0 * mu * mu / 4.0;
    s.c2 = 75.0 * lf * lf / 2.0;
    s.m = std::max({k * k, s.c1 * k * s.c1 * k, s.c2 * k * s.c2 * k});
    s.lambda = lambda_cap_half(pc);
    s.gamma = gamma_cap_half(pc, s.lambda, s.m, k);
  } else if (algo == Algorithm::VrAdaGda) {
    const double k3 = k * k * k;
    s.c1 = 2.0 / (3.0 * k3) + 9.0 * mu * mu / 4.0;
    s.c2 = 2.0 / (3.0 * k3) + 75.0 * lf * lf / 2.0;
    s.m = std::max({k3, std::pow(s.c1 * k, 3.0), std::pow(s.c2 * k, 3.0)});
    s.lambda = lambda_cap_third(pc, q);
    s.gamma = gamma_cap_third(pc, s.lambda, s.m, k, q);
  } else {
    throw UnsupportedCapability("no schedule theorem for the plain baseline");
  }
  return s;
}

}  // namespace minimax
