#pragma once

#include <cstddef>

#include "minimax/vec.hpp"

namespace minimax {

enum class SetKind { Unconstrained, Box, Ball, Simplex };

// Nonempty closed convex set. Box/Ball/Simplex are compact; Unconstrained is
// the whole space (allowed by the gradient-norm flavor of the stationarity
// metric).
struct ConstraintSet {
  SetKind kind = SetKind::Unconstrained;
  std::size_t dim = 0;
  Vector lower, upper;  // Box
  Vector center;        // Ball
  double radius = 0.0;  // Ball

  static ConstraintSet unconstrained(std::size_t d);
  static ConstraintSet box(Vector lo, Vector hi);
  static ConstraintSet ball(Vector c, double r);
  static ConstraintSet simplex(std::size_t d);

  bool contains(const Vector& x, double tol = 1e-9) const;
};

enum class MetricKind { Identity, Scalar, Diagonal };

// Positive-definite diagonal-form metric A with a declared spectral floor:
// lambda_min(A) >= rho_floor > 0 is checked at construction, so downstream
// code may rely on it.
struct Metric {
  MetricKind kind = MetricKind::Identity;
  double scalar = 1.0;  // Scalar
  Vector diag;          // Diagonal
  double rho_floor = 1.0;

  static Metric identity(double rho = 1.0);
  static Metric scalar_metric(double b, double rho);
  static Metric diagonal(Vector d, double rho);

  // entry i of A (valid for any i under Identity/Scalar)
  double entry(std::size_t i) const {
    return kind == MetricKind::Diagonal ? diag[i]
                                        : (kind == MetricKind::Scalar ? scalar : 1.0);
  }
  double lambda_min(std::size_t d) const;
  double lambda_max(std::size_t d) const;
};

// Euclidean projection onto the set
Vector project(const ConstraintSet& set, const Vector& v);

// unique minimizer over the set of <v, x> + (1/(2*gamma)) (x-x_t)' A (x-x_t);
// with the identity metric and gamma=1 this is project(set, x_t - v)
Vector generalized_project(const ConstraintSet& set, const Vector& x_t,
                           const Vector& v, const Metric& metric, double gamma);

// (1/2) (x - x_t)' A (x - x_t)
double bregman_distance(const Metric& metric, const Vector& x, const Vector& x_t);

// (x_t - generalized_project(set, x_t, g, metric, gamma)) / gamma
Vector gradient_mapping(const ConstraintSet& set, const Vector& x_t,
                        const Vector& g, const Metric& metric, double gamma);

}  // namespace minimax
