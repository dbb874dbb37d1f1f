#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "minimax/geometry.hpp"
#include "minimax/mat.hpp"
#include "minimax/rng.hpp"
#include "minimax/vec.hpp"

namespace minimax {

// Declared analytic constants of an instance. mu and l_f are exact or safe
// upper bounds for the joint gradient map (the smoothness invariant is tested
// against the joint map, not per block); sigma bounds the per-sample gradient
// noise at the instance's reference point.
struct ProblemSpec {
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  double mu = 0.0;
  double l_f = 0.0;
  double sigma = 0.0;
  ConstraintSet x_set;
  ConstraintSet y_set;
};

// Minimization in x against a mu-strongly-concave maximization in y, with
// stochastic gradients delivered through explicit mini-batches so that a
// batch can be replayed against several points (required by the
// variance-reduced estimator).
class StochasticMinimaxProblem {
 public:
  virtual ~StochasticMinimaxProblem() = default;

  const ProblemSpec& spec() const { return spec_; }
  virtual const char* family() const = 0;

  double value(const Vector& x, const Vector& y) const;
  Vector grad_x_exact(const Vector& x, const Vector& y) const;
  Vector grad_y_exact(const Vector& x, const Vector& y) const;

  virtual MiniBatch draw_batch(RngStream& rng, std::size_t q) const = 0;
  // batch mean of the per-sample joint gradient at (x, y)
  void grad_batch(const Vector& x, const Vector& y, const MiniBatch& batch, Vector& gx,
                  Vector& gy) const;

  // families with an inner maximizer in closed form expose the primal
  // diagnostics; the rest report only what they can compute
  virtual bool has_closed_form() const { return false; }
  virtual Vector y_star(const Vector& x) const;
  virtual Vector grad_F_exact(const Vector& x) const;
  double primal_value(const Vector& x) const;  // F(x) = value(x, y_star(x))

  virtual Vector initial_x() const;
  virtual Vector initial_y() const;

 protected:
  virtual double value_impl(const Vector& x, const Vector& y) const = 0;
  virtual void grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const = 0;
  virtual void grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch,
                               Vector& gx, Vector& gy) const = 0;
  void check_point(const Vector& x, const Vector& y) const;

  ProblemSpec spec_;
};

// f(x,y) = (1/2) x'Px + x'Qy - (mu/2)|y|^2 with additive Gaussian gradient
// noise. Everything about F is in closed form, which makes this the
// convergence-rate workhorse.
class QuadraticMinimax final : public StochasticMinimaxProblem {
 public:
  QuadraticMinimax(Matrix p, Matrix q, double mu, double sigma, ConstraintSet x_set,
                   ConstraintSet y_set);

  // deterministic synthetic instance: symmetric P with spectrum in
  // [0.5, 1] (or sign-indefinite with |P| = 1 when psd is false), |Q| = 1
  static QuadraticMinimax make(std::size_t d1, std::size_t d2, double mu, double sigma,
                               std::uint64_t data_seed, bool psd = true,
                               double x_radius = 10.0, double init_scale = 0.5);

  const char* family() const override { return "quadratic"; }
  bool has_closed_form() const override { return true; }
  Vector y_star(const Vector& x) const override;
  Vector grad_F_exact(const Vector& x) const override;
  MiniBatch draw_batch(RngStream& rng, std::size_t q) const override;
  Vector initial_x() const override;
  Vector initial_y() const override;

  const Matrix& p_matrix() const { return p_; }
  const Matrix& q_matrix() const { return q_; }

 protected:
  double value_impl(const Vector& x, const Vector& y) const override;
  void grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  void grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch, Vector& gx,
                       Vector& gy) const override;

 private:
  Matrix p_, q_;
  Matrix primal_hessian_;  // P + QQ'/mu
  double mu_param_;
  double init_scale_ = 0.5;
};

struct GroupDataset {
  Matrix features;          // one sample per row, bias handled by the model
  std::vector<int> labels;  // +1 / -1
};

// min over weights w of the worst reweighted logistic loss across groups:
// f(w,u) = sum_i u_i L_i(w) - varrho |u - 1/n|^2, u on the simplex. A batch
// draws one sample index per group, so each side's batch gradient is
// unbiased for any u.
class RobustWeightedLoss final : public StochasticMinimaxProblem {
 public:
  RobustWeightedLoss(std::vector<GroupDataset> groups, double varrho_reg);

  // three planted 2-d groups; the last one is smaller-margin and rotated so
  // the uniform average and the worst group disagree
  static RobustWeightedLoss make_synthetic(std::size_t per_group, double varrho_reg,
                                           std::uint64_t data_seed);
  // header "group_id,label,feature_1..feature_k"; labels 0/1 or -1/+1
  static RobustWeightedLoss from_csv(const std::string& path, double varrho_reg);

  const char* family() const override { return "robust_weighted_loss"; }
  bool has_closed_form() const override { return true; }
  Vector y_star(const Vector& x) const override;
  Vector grad_F_exact(const Vector& x) const override;
  MiniBatch draw_batch(RngStream& rng, std::size_t q) const override;
  Vector initial_x() const override;
  Vector initial_y() const override;

  std::size_t group_count() const { return groups_.size(); }
  Vector group_losses(const Vector& w) const;
  Vector group_loss_grad(std::size_t group, const Vector& w) const;

 protected:
  double value_impl(const Vector& x, const Vector& y) const override;
  void grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  void grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch, Vector& gx,
                       Vector& gy) const override;

 private:
  // one logistic sample: loss and gradient in w (weights then bias)
  double sample_loss(std::size_t group, std::size_t row, const Vector& w) const;
  void sample_grad(std::size_t group, std::size_t row, const Vector& w, Vector& out) const;

  std::vector<GroupDataset> groups_;
  double varrho_reg_;
};

// Policy evaluation with linear features: theta parametrizes the value
// estimate, omega the auxiliary maximizer; F(theta) is the projected Bellman
// error. The chain is small enough to enumerate, so exact expectations come
// from the stationary distribution rather than sampling.
class PolicyEvalMSPBE final : public StochasticMinimaxProblem {
 public:
  PolicyEvalMSPBE(Matrix kernel, Matrix reward, Matrix policy, Matrix features, double tau);

  static PolicyEvalMSPBE make_synthetic(std::size_t states, std::size_t actions,
                                        std::size_t feat_dim, double tau,
                                        std::uint64_t data_seed);

  const char* family() const override { return "policy_eval_mspbe"; }
  bool has_closed_form() const override { return true; }
  Vector y_star(const Vector& x) const override;
  Vector grad_F_exact(const Vector& x) const override;
  MiniBatch draw_batch(RngStream& rng, std::size_t q) const override;
  Vector initial_x() const override;
  Vector initial_y() const override;

  // enumeration hooks for the expectation oracle in tests
  std::size_t atom_count() const { return atom_prob_.size(); }
  double atom_prob(std::size_t atom) const { return atom_prob_[atom]; }
  void atom_grad(std::size_t atom, const Vector& theta, const Vector& omega, Vector& gx,
                 Vector& gy) const;
  const Vector& stationary() const { return stationary_; }

 protected:
  double value_impl(const Vector& x, const Vector& y) const override;
  void grad_impl(const Vector& x, const Vector& y, Vector& gx, Vector& gy) const override;
  void grad_batch_impl(const Vector& x, const Vector& y, const MiniBatch& batch, Vector& gx,
                       Vector& gy) const override;

 private:
  std::size_t states_, actions_, feat_dim_;
  double tau_;
  Matrix features_;                 // states x feat_dim
  std::vector<std::size_t> atom_s_, atom_a_, atom_s2_;
  Vector atom_prob_, atom_cdf_, atom_reward_;
  Vector stationary_;
  Matrix h_;       // E[phi phi'], the concavity metric
  Matrix a_mat_;   // E[phi psi'], psi = tau phi' - phi
  Vector b_vec_;   // E[r phi]
};

// problem construction from harness config keys; defined with the config
// module but declared here to keep the dependency one-way
struct ProblemConfig;
std::unique_ptr<StochasticMinimaxProblem> make_problem(const ProblemConfig& cfg);

}  // namespace minimax
