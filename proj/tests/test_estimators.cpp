#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/estimators.hpp"
#include "minimax/problems.hpp"

using namespace minimax;

namespace {

QuadraticMinimax noisy_quadratic(double sigma) {
  return QuadraticMinimax::make(10, 8, 1.0, sigma, 42, true, 0.0);
}

}  // namespace

TEST_CASE("momentum with alpha = 1 copies the fresh gradient") {
  auto st = init_estimator(EstimatorKind::Momentum, {5.0, -3.0}, {1.0});
  momentum_update(st, {0.25, 0.75}, {-2.0}, 1.0, 1.0);
  CHECK(st.v[0] == 0.25);
  CHECK(st.v[1] == 0.75);
  CHECK(st.w[0] == -2.0);
}

TEST_CASE("momentum halfway mix") {
  auto st = init_estimator(EstimatorKind::Momentum, {2.0, 0.0}, {4.0});
  momentum_update(st, {0.0, 2.0}, {0.0}, 0.5, 0.25);
  CHECK(st.v[0] == 1.0);
  CHECK(st.v[1] == 1.0);
  CHECK(st.w[0] == 3.0);
}

TEST_CASE("a matching gradient is a fixed point") {
  const Vector g = {0.1, -7.3, 2.0};
  auto st = init_estimator(EstimatorKind::Momentum, g, g);
  momentum_update(st, g, g, 0.5, 0.5);  // dyadic weight: exactly stationary
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(st.v[i] == g[i]);
    CHECK(st.w[i] == g[i]);
  }
  momentum_update(st, g, g, 0.3, 0.7);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(st.v[i] == doctest::Approx(g[i]).epsilon(1e-15));
    CHECK(st.w[i] == doctest::Approx(g[i]).epsilon(1e-15));
  }
}

TEST_CASE("variance-reduced update with alpha = 1 reduces to the fresh gradient") {
  auto st = init_estimator(EstimatorKind::VarianceReduced, {9.0}, {9.0});
  storm_update(st, {1.5}, {-1.5}, {100.0}, {100.0}, 1.0, 1.0);
  CHECK(st.v[0] == 1.5);
  CHECK(st.w[0] == -1.5);
}

TEST_CASE("recursive and mixed correction forms agree") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = 10.0 * rng.normal();
    const double gn = 10.0 * rng.normal();
    const double go = 10.0 * rng.normal();
    const double a = rng.uniform01() * 0.999 + 0.001;
    const double lhs = storm_combine(v, gn, go, a);
    const double rhs = storm_combine_mixed(v, gn, go, a);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("doubling every gradient input doubles both estimates exactly") {
  RngStream rng(8, 0);
  Vector v0(4), gn(4), go(4);
  for (auto& e : v0) e = rng.normal();
  for (auto& e : gn) e = rng.normal();
  for (auto& e : go) e = rng.normal();

  auto a1 = init_estimator(EstimatorKind::Momentum, v0, v0);
  auto a2 = init_estimator(EstimatorKind::Momentum, scaled(v0, 2.0), scaled(v0, 2.0));
  momentum_update(a1, gn, gn, 0.3, 0.3);
  momentum_update(a2, scaled(gn, 2.0), scaled(gn, 2.0), 0.3, 0.3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a2.v[i] == 2.0 * a1.v[i]);

  auto s1 = init_estimator(EstimatorKind::VarianceReduced, v0, v0);
  auto s2 = init_estimator(EstimatorKind::VarianceReduced, scaled(v0, 2.0), scaled(v0, 2.0));
  storm_update(s1, gn, gn, go, go, 0.3, 0.3);
  storm_update(s2, scaled(gn, 2.0), scaled(gn, 2.0), scaled(go, 2.0), scaled(go, 2.0), 0.3, 0.3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s2.v[i] == 2.0 * s1.v[i]);
}

TEST_CASE("noise-free correction tracks a moving gradient almost exactly") {
  const auto prob = noisy_quadratic(0.0);
  RngStream rng(11, 0);
  Vector x = prob.initial_x(), y = prob.initial_y();
  auto batch = prob.draw_batch(rng, 3);
  Vector gx, gy;
  prob.grad_batch(x, y, batch, gx, gy);
  auto st = init_estimator(EstimatorKind::VarianceReduced, gx, gy);
  Vector gxo, gyo;
  for (int t = 0; t < 1000; ++t) {
    Vector xn = x, yn = y;
    for (std::size_t i = 0; i < xn.size(); ++i) xn[i] += 0.01 * std::sin(0.1 * t + double(i));
    for (std::size_t i = 0; i < yn.size(); ++i) yn[i] -= 0.01 * std::cos(0.1 * t + double(i));
    batch = prob.draw_batch(rng, 3);
    prob.grad_batch(xn, yn, batch, gx, gy);
    prob.grad_batch(x, y, batch, gxo, gyo);
    storm_update(st, gx, gy, gxo, gyo, 0.05, 0.05);
    x = xn;
    y = yn;
  }
  const auto [ex, ey] = estimator_error(prob, st, x, y);
  CHECK(ex <= 1e-10);
  CHECK(ey <= 1e-10);
}

TEST_CASE("estimator error is exactly zero for a noise-free initial batch") {
  const auto prob = noisy_quadratic(0.0);
  RngStream rng(3, 0);
  const Vector x = prob.initial_x(), y = prob.initial_y();
  const auto batch = prob.draw_batch(rng, 5);
  Vector gx, gy;
  prob.grad_batch(x, y, batch, gx, gy);
  const auto st = init_estimator(EstimatorKind::Momentum, gx, gy);
  const auto [ex, ey] = estimator_error(prob, st, x, y);
  CHECK(ex == 0.0);
  CHECK(ey == 0.0);
}

TEST_CASE("initial batch deviation matches sigma^2/q within Monte Carlo error") {
  const double sigma = 1.0;
  const std::size_t q = 16;
  const auto prob = noisy_quadratic(sigma);
  const Vector x = prob.initial_x(), y = prob.initial_y();
  const int trials = 2000;
  double mean = 0.0, mean_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(1000 + trial, 0);
    const auto batch = prob.draw_batch(rng, q);
    Vector gx, gy;
    prob.grad_batch(x, y, batch, gx, gy);
    const auto st = init_estimator(EstimatorKind::Momentum, gx, gy);
    const auto [ex, ey] = estimator_error(prob, st, x, y);
    (void)ey;
    mean += ex;
    mean_sq += ex * ex;
  }
  mean /= trials;
  mean_sq /= trials;
  const double expect = sigma * sigma / static_cast<double>(q);
  const double se = std::sqrt(std::max(0.0, mean_sq - mean * mean) / trials);
  CHECK(std::abs(mean - expect) <= 3.0 * se + 1e-12);
}

TEST_CASE("one momentum step contracts the deviation as predicted") {
  const double sigma = 1.0, alpha = 0.4;
  const std::size_t q = 10;
  const auto prob = noisy_quadratic(sigma);
  const Vector x = prob.initial_x(), y = prob.initial_y();
  const int trials = 1500;
  double e0_mean = 0.0, e1_mean = 0.0, e1_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(9000 + trial, 0);
    Vector gx, gy;
    prob.grad_batch(x, y, prob.draw_batch(rng, q), gx, gy);
    auto st = init_estimator(EstimatorKind::Momentum, gx, gy);
    const auto [e0, w0] = estimator_error(prob, st, x, y);
    (void)w0;
    prob.grad_batch(x, y, prob.draw_batch(rng, q), gx, gy);
    momentum_update(st, gx, gy, alpha, alpha);
    const auto [e1, w1] = estimator_error(prob, st, x, y);
    (void)w1;
    e0_mean += e0;
    e1_mean += e1;
    e1_sq += e1 * e1;
  }
  e0_mean /= trials;
  e1_mean /= trials;
  e1_sq /= trials;
  const double se = std::sqrt(std::max(0.0, e1_sq - e1_mean * e1_mean) / trials);
  const double bound = (1.0 - alpha) * e0_mean + alpha * alpha * sigma * sigma / q;
  CHECK(e1_mean <= bound + 3.0 * se);
}

TEST_CASE("variance reduction beats momentum on a slow trajectory") {
  const double sigma = 1.0;
  const std::size_t q = 4;
  const auto prob = noisy_quadratic(sigma);
  const int seeds = 100, steps = 500;
  double mse_mom = 0.0, mse_vr = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    RngStream rng_m(500 + seed, 0), rng_v(500 + seed, 0);
    Vector x = prob.initial_x(), y = prob.initial_y();
    Vector gx, gy, gxo, gyo;
    prob.grad_batch(x, y, prob.draw_batch(rng_m, q), gx, gy);
    auto mom = init_estimator(EstimatorKind::Momentum, gx, gy);
    prob.grad_batch(x, y, prob.draw_batch(rng_v, q), gx, gy);
    auto vr = init_estimator(EstimatorKind::VarianceReduced, gx, gy);
    for (int t = 1; t <= steps; ++t) {
      Vector xn = x, yn = y;
      for (std::size_t i = 0; i < xn.size(); ++i) xn[i] += 0.002 * std::sin(0.05 * t + double(i));
      for (std::size_t i = 0; i < yn.size(); ++i) yn[i] += 0.002 * std::cos(0.05 * t + double(i));
      const double alpha = 1.0 / std::pow(1.0 + t, 2.0 / 3.0);
      prob.grad_batch(xn, yn, prob.draw_batch(rng_m, q), gx, gy);
      momentum_update(mom, gx, gy, alpha, alpha);
      const auto bv = prob.draw_batch(rng_v, q);
      prob.grad_batch(xn, yn, bv, gx, gy);
      prob.grad_batch(x, y, bv, gxo, gyo);
      storm_update(vr, gx, gy, gxo, gyo, alpha, alpha);
      x = xn;
      y = yn;
    }
    const auto [mx, my] = estimator_error(prob, mom, x, y);
    const auto [vx, vy] = estimator_error(prob, vr, x, y);
    mse_mom += mx + my;
    mse_vr += vx + vy;
  }
  CHECK(mse_vr / seeds <= mse_mom / seeds);
}

TEST_CASE("weights outside (0,1] and mismatched states are rejected") {
  auto mom = init_estimator(EstimatorKind::Momentum, {1.0}, {1.0});
  CHECK_THROWS_AS(momentum_update(mom, {1.0}, {1.0}, 0.0, 0.5), ContractViolation);
  CHECK_THROWS_AS(momentum_update(mom, {1.0}, {1.0}, 0.5, 1.5), ContractViolation);
  CHECK_THROWS_AS(momentum_update(mom, {1.0, 2.0}, {1.0}, 0.5, 0.5), ContractViolation);
  CHECK_THROWS_AS(storm_update(mom, {1.0}, {1.0}, {1.0}, {1.0}, 0.5, 0.5), ContractViolation);

  auto vr = init_estimator(EstimatorKind::VarianceReduced, {1.0}, {1.0});
  CHECK_THROWS_AS(momentum_update(vr, {1.0}, {1.0}, 0.5, 0.5), ContractViolation);
  CHECK_THROWS_AS(storm_update(vr, {1.0}, {1.0}, {1.0}, {1.0}, -0.1, 0.5), ContractViolation);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(init_estimator(EstimatorKind::Momentum, {nan}, {1.0}), ContractViolation);
}
