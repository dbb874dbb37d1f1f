#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/problems.hpp"

namespace minimax {

namespace {

// largest |eigenvalue| of the joint gradient Jacobian [[P, Q], [Q', -mu I]]
double joint_lipschitz(const Matrix& p, const Matrix& q, double mu) {
  const std::size_t d1 = p.rows, d2 = q.cols;
  Matrix j(d1 + d2, d1 + d2);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t k = 0; k < d1; ++k) j.at(i, k) = p.at(i, k);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t k = 0; k < d2; ++k) {
      j.at(i, d1 + k) = q.at(i, k);
      j.at(d1 + k, i) = q.at(i, k);
    }
  for (std::size_t k = 0; k < d2; ++k) j.at(d1 + k, d1 + k) = -mu;
  const Vector ev = sym_eigenvalues(j);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace

QuadraticMinimax::QuadraticMinimax(Matrix p, Matrix q, double mu, double sigma,
                                   ConstraintSet x_set, ConstraintSet y_set)
    : p_(std::move(p)), q_(std::move(q)), mu_param_(mu) {
  MM_CHECK(mu > 0.0, "concavity modulus must be positive");
  MM_CHECK(sigma >= 0.0, "noise level must be nonnegative");
  MM_CHECK(p_.rows == p_.cols, "P must be square");
  MM_CHECK(q_.rows == p_.rows, "Q row count must match P");
  for (std::size_t i = 0; i < p_.rows; ++i)
    for (std::size_t k = i + 1; k < p_.cols; ++k)
      MM_CHECK(std::abs(p_.at(i, k) - p_.at(k, i)) <= 1e-12, "P must be symmetric");
  MM_CHECK(x_set.dim == p_.rows, "x constraint set dimension mismatch");
  MM_CHECK(y_set.dim == q_.cols, "y constraint set dimension mismatch");

  spec_.d1 = p_.rows;
  spec_.d2 = q_.cols;
  spec_.mu = mu;
  spec_.sigma = sigma;
  spec_.l_f = joint_lipschitz(p_, q_, mu);
  spec_.x_set = std::move(x_set);
  spec_.y_set = std::move(y_set);

  // P + QQ'/mu drives the primal gradient
  Matrix qqt = matmul(q_, transpose(q_));
  primal_hessian_ = p_;
  for (std::size_t i = 0; i < spec_.d1; ++i)
    for (std::size_t k = 0; k < spec_.d1; ++k)
      primal_hessian_.at(i, k) += qqt.at(i, k) / mu;
}

QuadraticMinimax QuadraticMinimax::make(std::size_t d1, std::size_t d2, double mu, double sigma,
                                        std::uint64_t data_seed, bool psd, double x_radius,
                                        double init_scale) {
  MM_CHECK(d1 >= 1 && d2 >= 1, "dimensions must be positive");
  RngStream gen(data_seed, 1000);
  Matrix g(d1, d1);
  for (auto& e : g.a) e = gen.normal();
  Matrix p(d1, d1);
  if (psd) {
    Matrix s = matmul(transpose(g), g);
    const Vector ev = sym_eigenvalues(s);
    const double top = ev.back();
    MM_CHECK(top > 0.0, "degenerate synthetic curvature draw");
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t k = 0; k < d1; ++k)
        p.at(i, k) = 0.5 * (i == k ? 1.0 : 0.0) + 0.5 * s.at(i, k) / top;
  } else {
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t k = 0; k < d1; ++k) p.at(i, k) = 0.5 * (g.at(i, k) + g.at(k, i));
    const double nrm = spectral_norm(p);
    MM_CHECK(nrm > 0.0, "degenerate synthetic curvature draw");
    for (auto& e : p.a) e /= nrm;
  }
  Matrix q(d1, d2);
  for (auto& e : q.a) e = gen.normal();
  const double qn = spectral_norm(q);
  MM_CHECK(qn > 0.0, "degenerate synthetic coupling draw");
  for (auto& e : q.a) e /= qn;

  ConstraintSet xs = x_radius > 0.0 ? ConstraintSet::ball(zeros(d1), x_radius)
                                    : ConstraintSet::unconstrained(d1);
  QuadraticMinimax prob(std::move(p), std::move(q), mu, sigma, std::move(xs),
                        ConstraintSet::unconstrained(d2));
  prob.init_scale_ = init_scale;
  return prob;
}

double QuadraticMinimax::value_impl(const Vector& x, const Vector& y) const {
  const Vector px = matvec(p_, x);
  const Vector qy = matvec(q_, y);
  return 0.5 * dot(x, px) + dot(x, qy) - 0.5 * mu_param_ * norm2_sq(y);
}

void QuadraticMinimax::grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  gx = matvec(p_, x);
  axpy(1.0, matvec(q_, y), gx);
  gy = mat_t_vec(q_, x);
  axpy(-mu_param_, y, gy);
}

MiniBatch QuadraticMinimax::draw_batch(RngStream& rng, std::size_t q) const {
  MM_CHECK(q >= 1, "batch size must be positive");
  MiniBatch b;
  b.size = q;
  draw_normals(rng, q * (spec_.d1 + spec_.d2), b.draws);
  return b;
}

void QuadraticMinimax::grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch,
                                       Vector& gx, Vector& gy) const {
  MM_CHECK(batch.draws.size() == batch.size * (spec_.d1 + spec_.d2),
           "batch payload does not match this family");
  grad_impl(x, y, gx, gy);
  Vector sx = zeros(spec_.d1), sy = zeros(spec_.d2);
  for (std::size_t s = 0; s < batch.size; ++s) {
    const std::size_t off = s * (spec_.d1 + spec_.d2);
    for (std::size_t i = 0; i < spec_.d1; ++i) sx[i] += batch.draws[off + i];
    for (std::size_t j = 0; j < spec_.d2; ++j) sy[j] += batch.draws[off + spec_.d1 + j];
  }
  // per-coordinate noise variance sigma^2/d per sample, so the per-sample
  // joint noise on each side has second moment sigma^2
  const double cx = spec_.sigma / std::sqrt(static_cast<double>(spec_.d1));
  const double cy = spec_.sigma / std::sqrt(static_cast<double>(spec_.d2));
  const double inv_q = 1.0 / static_cast<double>(batch.size);
  for (std::size_t i = 0; i < spec_.d1; ++i) gx[i] += cx * (sx[i] * inv_q);
  for (std::size_t j = 0; j < spec_.d2; ++j) gy[j] += cy * (sy[j] * inv_q);
}

Vector QuadraticMinimax::y_star(const Vector& x) const {
  check_dim(x, spec_.d1, "x");
  check_finite(x, "x");
  return scaled(mat_t_vec(q_, x), 1.0 / mu_param_);
}

Vector QuadraticMinimax::grad_F_exact(const Vector& x) const {
  check_dim(x, spec_.d1, "x");
  check_finite(x, "x");
  return matvec(primal_hessian_, x);
}

Vector QuadraticMinimax::initial_x() const {
  const double c = init_scale_ / std::sqrt(static_cast<double>(spec_.d1));
  return project(spec_.x_set, Vector(spec_.d1, c));
}

Vector QuadraticMinimax::initial_y() const { return zeros(spec_.d2); }

}  // namespace minimax
