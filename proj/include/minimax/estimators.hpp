#pragma once

#include <utility>

#include "minimax/problems.hpp"
#include "minimax/vec.hpp"

namespace minimax {

enum class EstimatorKind { Momentum, VarianceReduced };

// running gradient estimates for both blocks; the variance-reduced form also
// needs the previous iterate re-evaluated on the fresh batch, which the
// caller supplies (same batch, two points, enforced by the API shape)
struct EstimatorState {
  EstimatorKind kind = EstimatorKind::Momentum;
  Vector v;  // x-block estimate
  Vector w;  // y-block estimate
};

// both estimators start from a plain batch gradient
EstimatorState init_estimator(EstimatorKind kind, const Vector& gx, const Vector& gy);

// v <- a*g + (1-a)*v, elementwise, both blocks; a = alpha for v, beta for w
void momentum_update(EstimatorState& st, const Vector& gx_new, const Vector& gy_new,
                     double alpha, double beta);

// v <- gx_new + (1-a)(v - gx_old) where both gradients come from the same
// batch evaluated at the new and old point respectively
void storm_update(EstimatorState& st, const Vector& gx_new, const Vector& gy_new,
                  const Vector& gx_old, const Vector& gy_old, double alpha, double beta);

// single-coordinate combine in the recursive form and in the algebraically
// equivalent mixed form; exposed so their agreement can be checked directly
double storm_combine(double v_old, double g_new, double g_old, double alpha);
double storm_combine_mixed(double v_old, double g_new, double g_old, double alpha);

// squared deviations (|v - grad_x|^2, |w - grad_y|^2) at (x, y)
std::pair<double, double> estimator_error(const StochasticMinimaxProblem& prob,
                                          const EstimatorState& st, const Vector& x,
                                          const Vector& y);

}  // namespace minimax
