#pragma once

#include <cstdint>

#include "minimax/geometry.hpp"
#include "minimax/vec.hpp"

namespace minimax {

// Adam: second moment of the raw batch gradient, diagonal or global-norm form.
// AdaBelief: same recursions driven by the residual (gradient - estimator).
// Constant: fixed identity metric, which turns the adaptive solver into plain
// momentum SGDA.
enum class AdaptRule { AdamDiag, AdamGlobal, AdaBeliefDiag, AdaBeliefGlobal, Constant };

struct AdaptConfig {
  AdaptRule rule = AdaptRule::AdamDiag;
  double varrho = 0.1;   // mixing weight of the running statistic
  double rho = 1e-3;     // additive offset; also the emitted spectral floor
  double b0 = 1e-3;      // initial value of the global statistic
  double b_floor = 1e-3; // clamp range for the global statistic; the emitted
  double b_cap = 3.0;    // scalar is clamp(b_t) + rho
  double a_cap = 0.0;    // optional upper clamp on diagonal entries, 0 = off
};

const char* to_string(AdaptRule r);
AdaptRule adapt_rule_from_string(const std::string& s);

// Single-owner per solver run; one update per iteration, fed the same batch
// gradient the estimator update consumes.
class AdaptState {
 public:
  AdaptState(const AdaptConfig& cfg, std::size_t dim);

  // dispatch on the configured rule; `estimator` is only read by the
  // AdaBelief rules (pass the current v_t / w_t)
  Metric update(const Vector& g, const Vector& estimator);

  Metric update_adam_diag(const Vector& g);
  Metric update_global_norm(const Vector& g);
  Metric update_adabelief(const Vector& g, const Vector& estimator);

  const AdaptConfig& config() const { return cfg_; }
  std::int64_t step_count() const { return t_; }

  // bounds of the emitted scalar under a global rule; these are the constants
  // the schedule validator consumes (b = floor + rho, b_hat = cap + rho). The
  // Constant rule emits the exact identity, so both bounds are 1.
  double emitted_floor() const;
  double emitted_cap() const;

 private:
  Metric emit_diag();
  Metric emit_global();

  AdaptConfig cfg_;
  std::size_t dim_;
  Vector second_moment_;  // diag rules
  double b_;              // global rules
  std::int64_t t_ = 0;
};

}  // namespace minimax
