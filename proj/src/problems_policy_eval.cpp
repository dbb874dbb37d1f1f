#include <algorithm>
#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/problems.hpp"

namespace minimax {

namespace {

Vector matrix_row(const Matrix& m, std::size_t r) {
  Vector out(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) out[c] = m.at(r, c);
  return out;
}

// stationary distribution of the policy-averaged chain: null vector of
// (P' - I) with the normalization row appended
Vector stationary_of(const Matrix& p_pi) {
  const std::size_t s = p_pi.rows;
  Matrix m(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < s; ++k)
      m.at(i, k) = p_pi.at(k, i) - (i == k ? 1.0 : 0.0);
  for (std::size_t k = 0; k < s; ++k) m.at(s - 1, k) = 1.0;
  Vector rhs = zeros(s);
  rhs[s - 1] = 1.0;
  Vector d = solve_linear(m, rhs);
  for (double di : d)
    MM_CHECK(di > 1e-12, "chain is not irreducible: stationary mass vanishes on a state");
  return d;
}

}  // namespace

PolicyEvalMSPBE::PolicyEvalMSPBE(Matrix kernel, Matrix reward, Matrix policy, Matrix features,
                                 double tau)
    : states_(policy.rows),
      actions_(policy.cols),
      feat_dim_(features.cols),
      tau_(tau),
      features_(std::move(features)) {
  MM_CHECK(tau_ > 0.0 && tau_ < 1.0, "discount must lie in (0,1)");
  MM_CHECK(states_ >= 2 && actions_ >= 1, "need at least two states and one action");
  MM_CHECK(kernel.rows == states_ * actions_ && kernel.cols == states_,
           "kernel must be (states*actions) x states");
  MM_CHECK(reward.rows == kernel.rows && reward.cols == kernel.cols,
           "reward table must match the kernel shape");
  MM_CHECK(features_.rows == states_ && feat_dim_ >= 1, "feature table must be states x d");
  for (std::size_t s = 0; s < states_; ++s) {
    double rowsum = 0.0;
    for (std::size_t a = 0; a < actions_; ++a) {
      MM_CHECK(policy.at(s, a) >= 0.0, "policy probabilities must be nonnegative");
      rowsum += policy.at(s, a);
    }
    MM_CHECK(std::abs(rowsum - 1.0) <= 1e-9, "policy rows must sum to one");
  }
  for (std::size_t r = 0; r < kernel.rows; ++r) {
    double rowsum = 0.0;
    for (std::size_t c = 0; c < states_; ++c) {
      MM_CHECK(kernel.at(r, c) >= 0.0, "kernel probabilities must be nonnegative");
      rowsum += kernel.at(r, c);
    }
    MM_CHECK(std::abs(rowsum - 1.0) <= 1e-9, "kernel rows must sum to one");
  }

  Matrix p_pi(states_, states_);
  for (std::size_t s = 0; s < states_; ++s)
    for (std::size_t s2 = 0; s2 < states_; ++s2) {
      double p = 0.0;
      for (std::size_t a = 0; a < actions_; ++a)
        p += policy.at(s, a) * kernel.at(s * actions_ + a, s2);
      p_pi.at(s, s2) = p;
    }
  stationary_ = stationary_of(p_pi);

  // enumerate every (s, a, s') atom with positive mass
  for (std::size_t s = 0; s < states_; ++s)
    for (std::size_t a = 0; a < actions_; ++a)
      for (std::size_t s2 = 0; s2 < states_; ++s2) {
        const double p = stationary_[s] * policy.at(s, a) * kernel.at(s * actions_ + a, s2);
        if (p <= 0.0) continue;
        atom_s_.push_back(s);
        atom_a_.push_back(a);
        atom_s2_.push_back(s2);
        atom_prob_.push_back(p);
        atom_reward_.push_back(reward.at(s * actions_ + a, s2));
      }
  MM_CHECK(!atom_prob_.empty(), "no transition has positive probability");
  atom_cdf_.resize(atom_prob_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < atom_prob_.size(); ++i) {
    run += atom_prob_[i];
    atom_cdf_[i] = run;
  }
  MM_CHECK(std::abs(run - 1.0) <= 1e-9, "atom probabilities must sum to one");
  atom_cdf_.back() = 1.0;

  h_ = Matrix(feat_dim_, feat_dim_);
  a_mat_ = Matrix(feat_dim_, feat_dim_);
  b_vec_ = zeros(feat_dim_);
  for (std::size_t s = 0; s < states_; ++s) {
    const Vector phi = matrix_row(features_, s);
    for (std::size_t i = 0; i < feat_dim_; ++i)
      for (std::size_t k = 0; k < feat_dim_; ++k)
        h_.at(i, k) += stationary_[s] * phi[i] * phi[k];
  }
  double l_cross = 0.0, l_diag = 0.0;
  for (std::size_t t = 0; t < atom_prob_.size(); ++t) {
    const Vector phi = matrix_row(features_, atom_s_[t]);
    const Vector phi2 = matrix_row(features_, atom_s2_[t]);
    Vector psi(feat_dim_);
    for (std::size_t i = 0; i < feat_dim_; ++i) psi[i] = tau_ * phi2[i] - phi[i];
    for (std::size_t i = 0; i < feat_dim_; ++i) {
      b_vec_[i] += atom_prob_[t] * atom_reward_[t] * phi[i];
      for (std::size_t k = 0; k < feat_dim_; ++k)
        a_mat_.at(i, k) += atom_prob_[t] * phi[i] * psi[k];
    }
    l_cross = std::max(l_cross, norm2(phi) * norm2(psi));
    l_diag = std::max(l_diag, norm2_sq(phi));
  }

  const Vector ev = sym_eigenvalues(h_);
  MM_CHECK(ev.front() > 1e-10, "feature second-moment matrix is singular");

  spec_.d1 = feat_dim_;
  spec_.d2 = feat_dim_;
  spec_.mu = ev.front();
  spec_.l_f = l_cross + l_diag;
  spec_.x_set = ConstraintSet::unconstrained(feat_dim_);
  spec_.y_set = ConstraintSet::unconstrained(feat_dim_);

  // per-sample variance at theta = 0, omega = 0: the x side vanishes there
  // and the y side reduces to r*phi around its mean
  double var_y = 0.0;
  for (std::size_t t = 0; t < atom_prob_.size(); ++t) {
    const Vector phi = matrix_row(features_, atom_s_[t]);
    Vector dev = scaled(phi, atom_reward_[t]);
    axpy(-1.0, b_vec_, dev);
    var_y += atom_prob_[t] * norm2_sq(dev);
  }
  spec_.sigma = std::sqrt(var_y);
}

PolicyEvalMSPBE PolicyEvalMSPBE::make_synthetic(std::size_t states, std::size_t actions,
                                                std::size_t feat_dim, double tau,
                                                std::uint64_t data_seed) {
  MM_CHECK(feat_dim <= states, "feature dimension above state count cannot be full rank");
  RngStream gen(data_seed, 3000);
  Matrix kernel(states * actions, states);
  for (std::size_t r = 0; r < kernel.rows; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < states; ++c) {
      kernel.at(r, c) = 0.1 + gen.uniform01();  // smoothing keeps the chain irreducible
      sum += kernel.at(r, c);
    }
    for (std::size_t c = 0; c < states; ++c) kernel.at(r, c) /= sum;
  }
  Matrix policy(states, actions);
  for (std::size_t s = 0; s < states; ++s) {
    double sum = 0.0;
    for (std::size_t a = 0; a < actions; ++a) {
      policy.at(s, a) = 0.1 + gen.uniform01();
      sum += policy.at(s, a);
    }
    for (std::size_t a = 0; a < actions; ++a) policy.at(s, a) /= sum;
  }
  Matrix reward(states * actions, states);
  for (auto& e : reward.a) e = 2.0 * gen.uniform01() - 1.0;
  Matrix features(states, feat_dim);
  for (auto& e : features.a) e = 2.0 * gen.uniform01() - 1.0;
  return PolicyEvalMSPBE(std::move(kernel), std::move(reward), std::move(policy),
                         std::move(features), tau);
}

void PolicyEvalMSPBE::atom_grad(std::size_t atom, const Vector& theta, const Vector& omega,
                                Vector& gx, Vector& gy) const {
  MM_CHECK(atom < atom_prob_.size(), "atom index out of range");
  const Vector phi = matrix_row(features_, atom_s_[atom]);
  const Vector phi2 = matrix_row(features_, atom_s2_[atom]);
  Vector psi(feat_dim_);
  for (std::size_t i = 0; i < feat_dim_; ++i) psi[i] = tau_ * phi2[i] - phi[i];
  const double delta = atom_reward_[atom] + dot(psi, theta);
  const double proj = dot(phi, omega);
  gx = scaled(psi, proj);
  gy = scaled(phi, delta - proj);
}

double PolicyEvalMSPBE::value_impl(const Vector& x, const Vector& y) const {
  Vector ed = b_vec_;
  axpy(1.0, matvec(a_mat_, x), ed);
  return dot(ed, y) - 0.5 * dot(y, matvec(h_, y));
}

void PolicyEvalMSPBE::grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const {
  gx = mat_t_vec(a_mat_, y);
  gy = b_vec_;
  axpy(1.0, matvec(a_mat_, x), gy);
  axpy(-1.0, matvec(h_, y), gy);
}

MiniBatch PolicyEvalMSPBE::draw_batch(RngStream& rng, std::size_t q) const {
  MM_CHECK(q >= 1, "batch size must be positive");
  MiniBatch b;
  b.size = q;
  b.indices.reserve(q);
  for (std::size_t s = 0; s < q; ++s) {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(atom_cdf_.begin(), atom_cdf_.end(), u);
    b.indices.push_back(static_cast<std::size_t>(it - atom_cdf_.begin()));
  }
  return b;
}

void PolicyEvalMSPBE::grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch,
                                      Vector& gx, Vector& gy) const {
  MM_CHECK(batch.indices.size() == batch.size, "batch payload does not match this family");
  gx = zeros(feat_dim_);
  gy = zeros(feat_dim_);
  Vector ax(feat_dim_), ay(feat_dim_);
  for (std::size_t s = 0; s < batch.size; ++s) {
    atom_grad(batch.indices[s], x, y, ax, ay);
    axpy(1.0, ax, gx);
    axpy(1.0, ay, gy);
  }
  const double inv_q = 1.0 / static_cast<double>(batch.size);
  for (auto& v : gx) v *= inv_q;
  for (auto& v : gy) v *= inv_q;
}

Vector PolicyEvalMSPBE::y_star(const Vector& x) const {
  check_dim(x, feat_dim_, "x");
  check_finite(x, "x");
  Vector ed = b_vec_;
  axpy(1.0, matvec(a_mat_, x), ed);
  return solve_linear(h_, ed);
}

Vector PolicyEvalMSPBE::grad_F_exact(const Vector& x) const {
  return mat_t_vec(a_mat_, y_star(x));
}

Vector PolicyEvalMSPBE::initial_x() const { return zeros(feat_dim_); }
Vector PolicyEvalMSPBE::initial_y() const { return zeros(feat_dim_); }

}  // namespace minimax
