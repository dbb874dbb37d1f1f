#include "minimax/problems.hpp"

#include "minimax/errors.hpp"

namespace minimax {

void StochasticMinimaxProblem::check_point(const Vector& x, const Vector& y) const {
  check_dim(x, spec_.d1, "x");
  check_dim(y, spec_.d2, "y");
  check_finite(x, "x");
  check_finite(y, "y");
}

double StochasticMinimaxProblem::value(const Vector& x, const Vector& y) const {
  check_point(x, y);
  return value_impl(x, y);
}

Vector StochasticMinimaxProblem::grad_x_exact(const Vector& x, const Vector& y) const {
  check_point(x, y);
  Vector gx, gy;
  grad_impl(x, y, gx, gy);
  return gx;
}

Vector StochasticMinimaxProblem::grad_y_exact(const Vector& x, const Vector& y) const {
  check_point(x, y);
  Vector gx, gy;
  grad_impl(x, y, gx, gy);
  return gy;
}

void StochasticMinimaxProblem::grad_batch(const Vector& x, const Vector& y,
                                          const MiniBatch& batch, Vector& gx, Vector& gy) const {
  check_point(x, y);
  MM_CHECK(batch.size >= 1, "empty mini-batch");
  grad_batch_impl(x, y, batch, gx, gy);
}

Vector StochasticMinimaxProblem::y_star(const Vector&) const {
  throw UnsupportedCapability(std::string(family()) + ": no closed-form inner maximizer");
}

Vector StochasticMinimaxProblem::grad_F_exact(const Vector&) const {
  throw UnsupportedCapability(std::string(family()) + ": no closed-form primal gradient");
}

double StochasticMinimaxProblem::primal_value(const Vector& x) const {
  return value(x, y_star(x));
}

Vector StochasticMinimaxProblem::initial_x() const {
  return project(spec_.x_set, zeros(spec_.d1));
}

Vector StochasticMinimaxProblem::initial_y() const {
  return project(spec_.y_set, zeros(spec_.d2));
}

}  // namespace minimax
