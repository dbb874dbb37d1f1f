#include "minimax/estimators.hpp"

#include "minimax/errors.hpp"

namespace minimax {

namespace {

void check_weight(double a, const char* name) {
  MM_CHECK(a > 0.0 && a <= 1.0, name);
}

}  // namespace

EstimatorState init_estimator(EstimatorKind kind, const Vector& gx, const Vector& gy) {
  check_finite(gx, "initial x gradient");
  check_finite(gy, "initial y gradient");
  EstimatorState st;
  st.kind = kind;
  st.v = gx;
  st.w = gy;
  return st;
}

void momentum_update(EstimatorState& st, const Vector& gx_new, const Vector& gy_new,
                     double alpha, double beta) {
  MM_CHECK(st.kind == EstimatorKind::Momentum, "state was built for another estimator");
  check_weight(alpha, "momentum weight alpha must lie in (0,1]");
  check_weight(beta, "momentum weight beta must lie in (0,1]");
  check_dim(gx_new, st.v.size(), "gx");
  check_dim(gy_new, st.w.size(), "gy");
  check_finite(gx_new, "gx");
  check_finite(gy_new, "gy");
  for (std::size_t i = 0; i < st.v.size(); ++i)
    st.v[i] = alpha * gx_new[i] + (1.0 - alpha) * st.v[i];
  for (std::size_t i = 0; i < st.w.size(); ++i)
    st.w[i] = beta * gy_new[i] + (1.0 - beta) * st.w[i];
}

double storm_combine(double v_old, double g_new, double g_old, double alpha) {
  return g_new + (1.0 - alpha) * (v_old - g_old);
}

double storm_combine_mixed(double v_old, double g_new, double g_old, double alpha) {
  return alpha * g_new + (1.0 - alpha) * (v_old + g_new - g_old);
}

void storm_update(EstimatorState& st, const Vector& gx_new, const Vector& gy_new,
                  const Vector& gx_old, const Vector& gy_old, double alpha, double beta) {
  MM_CHECK(st.kind == EstimatorKind::VarianceReduced, "state was built for another estimator");
  check_weight(alpha, "correction weight alpha must lie in (0,1]");
  check_weight(beta, "correction weight beta must lie in (0,1]");
  check_dim(gx_new, st.v.size(), "gx_new");
  check_dim(gx_old, st.v.size(), "gx_old");
  check_dim(gy_new, st.w.size(), "gy_new");
  check_dim(gy_old, st.w.size(), "gy_old");
  check_finite(gx_new, "gx_new");
  check_finite(gx_old, "gx_old");
  check_finite(gy_new, "gy_new");
  check_finite(gy_old, "gy_old");
  for (std::size_t i = 0; i < st.v.size(); ++i)
    st.v[i] = storm_combine(st.v[i], gx_new[i], gx_old[i], alpha);
  for (std::size_t i = 0; i < st.w.size(); ++i)
    st.w[i] = storm_combine(st.w[i], gy_new[i], gy_old[i], beta);
}

std::pair<double, double> estimator_error(const StochasticMinimaxProblem& prob,
                                          const EstimatorState& st, const Vector& x,
                                          const Vector& y) {
  const Vector gx = prob.grad_x_exact(x, y);
  const Vector gy = prob.grad_y_exact(x, y);
  check_dim(st.v, gx.size(), "v");
  check_dim(st.w, gy.size(), "w");
  return {norm2_sq(vsub(st.v, gx)), norm2_sq(vsub(st.w, gy))};
}

}  // namespace minimax
