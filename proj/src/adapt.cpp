#include "minimax/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minimax/errors.hpp"

namespace minimax {

const char* to_string(AdaptRule r) {
  switch (r) {
    case AdaptRule::AdamDiag: return "adam_diag";
    case AdaptRule::AdamGlobal: return "adam_global";
    case AdaptRule::AdaBeliefDiag: return "adabelief_diag";
    case AdaptRule::AdaBeliefGlobal: return "adabelief_global";
    case AdaptRule::Constant: return "constant";
  }
  throw ContractViolation("unknown adapt rule");
}

AdaptRule adapt_rule_from_string(const std::string& s) {
  if (s == "adam_diag") return AdaptRule::AdamDiag;
  if (s == "adam_global") return AdaptRule::AdamGlobal;
  if (s == "adabelief_diag") return AdaptRule::AdaBeliefDiag;
  if (s == "adabelief_global") return AdaptRule::AdaBeliefGlobal;
  if (s == "constant") return AdaptRule::Constant;
  throw ConfigError("unknown adapt rule: " + s);
}

AdaptState::AdaptState(const AdaptConfig& cfg, std::size_t dim) : cfg_(cfg), dim_(dim) {
  MM_CHECK(dim_ > 0, "adapt dimension must be positive");
  MM_CHECK(cfg_.varrho > 0.0 && cfg_.varrho < 1.0, "mixing weight must lie in (0,1)");
  MM_CHECK(cfg_.rho > 0.0, "metric offset must be positive");
  MM_CHECK(cfg_.b0 >= 0.0, "initial global statistic must be nonnegative");
  MM_CHECK(cfg_.b_floor > 0.0, "global floor must be positive");
  MM_CHECK(cfg_.b_cap >= cfg_.b_floor, "global cap must dominate the floor");
  MM_CHECK(cfg_.a_cap == 0.0 || cfg_.a_cap >= cfg_.rho, "diagonal cap below the offset");
  second_moment_ = zeros(dim_);
  b_ = cfg_.b0;
}

Metric AdaptState::update(const Vector& g, const Vector& estimator) {
  switch (cfg_.rule) {
    case AdaptRule::AdamDiag: return update_adam_diag(g);
    case AdaptRule::AdamGlobal: return update_global_norm(g);
    case AdaptRule::AdaBeliefDiag:
    case AdaptRule::AdaBeliefGlobal: return update_adabelief(g, estimator);
    case AdaptRule::Constant:
      check_dim(g, dim_, "adapt gradient");
      check_finite(g, "adapt gradient");
      ++t_;
      return Metric::identity(std::min(1.0, cfg_.rho));
  }
  throw ContractViolation("unknown adapt rule");
}

Metric AdaptState::update_adam_diag(const Vector& g) {
  MM_CHECK(cfg_.rule == AdaptRule::AdamDiag, "rule mismatch: not adam_diag");
  check_dim(g, dim_, "adapt gradient");
  check_finite(g, "adapt gradient");
  for (std::size_t i = 0; i < dim_; ++i)
    second_moment_[i] = cfg_.varrho * second_moment_[i] + (1.0 - cfg_.varrho) * g[i] * g[i];
  ++t_;
  return emit_diag();
}

Metric AdaptState::update_global_norm(const Vector& g) {
  MM_CHECK(cfg_.rule == AdaptRule::AdamGlobal, "rule mismatch: not adam_global");
  check_dim(g, dim_, "adapt gradient");
  check_finite(g, "adapt gradient");
  b_ = cfg_.varrho * b_ + (1.0 - cfg_.varrho) * norm2(g);
  ++t_;
  return emit_global();
}

Metric AdaptState::update_adabelief(const Vector& g, const Vector& estimator) {
  MM_CHECK(cfg_.rule == AdaptRule::AdaBeliefDiag || cfg_.rule == AdaptRule::AdaBeliefGlobal,
           "rule mismatch: not an adabelief rule");
  check_dim(g, dim_, "adapt gradient");
  check_dim(estimator, dim_, "adapt estimator");
  check_finite(g, "adapt gradient");
  check_finite(estimator, "adapt estimator");
  if (cfg_.rule == AdaptRule::AdaBeliefDiag) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const double r = g[i] - estimator[i];
      second_moment_[i] = cfg_.varrho * second_moment_[i] + (1.0 - cfg_.varrho) * r * r;
    }
    ++t_;
    return emit_diag();
  }
  Vector r = vsub(g, estimator);
  b_ = cfg_.varrho * b_ + (1.0 - cfg_.varrho) * norm2(r);
  ++t_;
  return emit_global();
}

Metric AdaptState::emit_diag() {
  Vector d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    double a = std::sqrt(second_moment_[i]) + cfg_.rho;
    if (cfg_.a_cap > 0.0) a = std::min(a, cfg_.a_cap);
    d[i] = a;
  }
  return Metric::diagonal(d, cfg_.rho);
}

Metric AdaptState::emit_global() {
  const double clamped = std::clamp(b_, cfg_.b_floor, cfg_.b_cap);
  return Metric::scalar_metric(clamped + cfg_.rho, cfg_.rho);
}

double AdaptState::emitted_floor() const {
  switch (cfg_.rule) {
    case AdaptRule::Constant: return 1.0;
    case AdaptRule::AdamGlobal:
    case AdaptRule::AdaBeliefGlobal: return cfg_.b_floor + cfg_.rho;
    default: return cfg_.rho;
  }
}

double AdaptState::emitted_cap() const {
  switch (cfg_.rule) {
    case AdaptRule::Constant: return 1.0;
    case AdaptRule::AdamGlobal:
    case AdaptRule::AdaBeliefGlobal: return cfg_.b_cap + cfg_.rho;
    // diagonal rules are unclamped unless a_cap is set; the schedule
    // validator then works from the configured global cap as the assumed
    // operating range
    default: return cfg_.a_cap > 0.0 ? cfg_.a_cap : cfg_.b_cap + cfg_.rho;
  }
}

}  // namespace minimax
