#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minimax/adapt.hpp"
#include "minimax/errors.hpp"
#include "minimax/rng.hpp"

using namespace minimax;

namespace {

AdaptConfig cfg_of(AdaptRule rule, double varrho, double rho) {
  AdaptConfig c;
  c.rule = rule;
  c.varrho = varrho;
  c.rho = rho;
  return c;
}

}  // namespace

TEST_CASE("adam diagonal single step from zero state") {
  AdaptState st(cfg_of(AdaptRule::AdamDiag, 0.5, 0.001), 2);
  const Metric m = st.update_adam_diag({3.0, 4.0});
  REQUIRE(m.kind == MetricKind::Diagonal);
  // second moment (4.5, 8) after one step
  CHECK(m.diag[0] == doctest::Approx(std::sqrt(4.5) + 0.001).epsilon(1e-12));
  CHECK(m.diag[1] == doctest::Approx(std::sqrt(8.0) + 0.001).epsilon(1e-12));
  CHECK(st.step_count() == 1);
}

TEST_CASE("adam diagonal with zero gradients stays at the offset") {
  AdaptState st(cfg_of(AdaptRule::AdamDiag, 0.5, 0.001), 3);
  Metric m = Metric::identity();
  for (int t = 0; t < 50; ++t) m = st.update_adam_diag(zeros(3));
  for (double a : m.diag) CHECK(a == 0.001);
}

TEST_CASE("adam diagonal converges to |g| + rho under a constant gradient") {
  AdaptState st(cfg_of(AdaptRule::AdamDiag, 0.9, 0.001), 2);
  const Vector g = {0.7, -2.5};
  Metric m = Metric::identity();
  for (int t = 0; t < 200; ++t) m = st.update_adam_diag(g);
  CHECK(std::abs(m.diag[0] - (0.7 + 0.001)) < 1e-6);
  CHECK(std::abs(m.diag[1] - (2.5 + 0.001)) < 1e-6);
}

TEST_CASE("diagonal cap clamps entries from above") {
  AdaptConfig c = cfg_of(AdaptRule::AdamDiag, 0.5, 0.001);
  c.a_cap = 1.5;
  AdaptState st(c, 2);
  const Metric m = st.update_adam_diag({100.0, 0.0});
  CHECK(m.diag[0] == 1.5);
  CHECK(m.diag[1] == 0.001);
}

TEST_CASE("global norm rule matches the hand-computed scalar") {
  AdaptConfig c = cfg_of(AdaptRule::AdamGlobal, 0.5, 0.001);
  c.b0 = 1.0;
  AdaptState st(c, 2);
  const Metric m = st.update_global_norm({3.0, 4.0});
  REQUIRE(m.kind == MetricKind::Scalar);
  // b = 0.5*1 + 0.5*5 = 3, inside [floor, cap]
  CHECK(m.scalar == doctest::Approx(3.001).epsilon(1e-15));
}

TEST_CASE("global statistic is clamped at the cap and at the floor") {
  AdaptConfig c = cfg_of(AdaptRule::AdamGlobal, 0.5, 0.001);
  c.b0 = 1.0;
  AdaptState hi(c, 1);
  CHECK(hi.update_global_norm({1e6}).scalar == doctest::Approx(3.0 + 0.001).epsilon(1e-15));

  AdaptState lo(c, 1);
  Metric m = Metric::identity();
  for (int t = 0; t < 100; ++t) m = lo.update_global_norm({0.0});
  CHECK(m.scalar == doctest::Approx(0.001 + 0.001).epsilon(1e-15));
}

TEST_CASE("adabelief drives the statistic with the residual") {
  AdaptState st(cfg_of(AdaptRule::AdaBeliefDiag, 0.5, 0.001), 2);
  const Metric m = st.update_adabelief({1.0, 0.0}, {0.0, 1.0});
  CHECK(m.diag[0] == doctest::Approx(std::sqrt(0.5) + 0.001).epsilon(1e-12));
  CHECK(m.diag[1] == doctest::Approx(std::sqrt(0.5) + 0.001).epsilon(1e-12));

  // a perfect estimator leaves only the offset
  AdaptState quiet(cfg_of(AdaptRule::AdaBeliefDiag, 0.5, 0.001), 2);
  Metric q = Metric::identity();
  for (int t = 0; t < 60; ++t) q = quiet.update_adabelief({2.0, -3.0}, {2.0, -3.0});
  for (double a : q.diag) CHECK(a == 0.001);
}

TEST_CASE("adabelief global uses the residual norm") {
  AdaptConfig c = cfg_of(AdaptRule::AdaBeliefGlobal, 0.5, 0.01);
  c.b0 = 0.0;
  c.b_floor = 1e-4;
  AdaptState st(c, 2);
  const Metric m = st.update_adabelief({3.0, 4.0}, {0.0, 0.0});
  CHECK(m.scalar == doctest::Approx(2.5 + 0.01).epsilon(1e-15));
}

TEST_CASE("constant rule emits the exact identity") {
  AdaptState st(cfg_of(AdaptRule::Constant, 0.5, 0.5), 4);
  const Metric m = st.update(ones(4), zeros(4));
  CHECK(m.kind == MetricKind::Identity);
  CHECK(m.lambda_min(4) == 1.0);
  CHECK(st.emitted_floor() == 1.0);
  CHECK(st.emitted_cap() == 1.0);
}

TEST_CASE("dispatcher routes each rule") {
  const Vector g = {1.0, 2.0};
  const Vector est = {0.5, 0.5};
  for (AdaptRule r : {AdaptRule::AdamDiag, AdaptRule::AdamGlobal, AdaptRule::AdaBeliefDiag,
                      AdaptRule::AdaBeliefGlobal, AdaptRule::Constant}) {
    AdaptState st(cfg_of(r, 0.5, 0.01), 2);
    const Metric m = st.update(g, est);
    CHECK(m.lambda_min(2) >= 0.01);
    CHECK(st.step_count() == 1);
  }
}

TEST_CASE("every emitted metric respects the spectral floor") {
  RngStream rng(77, 0);
  for (AdaptRule r : {AdaptRule::AdamDiag, AdaptRule::AdamGlobal, AdaptRule::AdaBeliefDiag,
                      AdaptRule::AdaBeliefGlobal, AdaptRule::Constant}) {
    AdaptConfig c = cfg_of(r, 0.2, 0.05);
    c.b_floor = 0.02;
    AdaptState st(c, 3);
    for (int t = 0; t < 200; ++t) {
      Vector g(3), est(3);
      for (auto& gi : g) gi = 10.0 * rng.normal();
      for (auto& ei : est) ei = 10.0 * rng.normal();
      const Metric m = st.update(g, est);
      CHECK(m.lambda_min(3) >= (r == AdaptRule::Constant ? 1.0 : 0.05));
    }
  }
}

TEST_CASE("a larger gradient from the same state yields a larger metric") {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    AdaptState a(cfg_of(AdaptRule::AdamDiag, 0.3, 0.001), 4);
    AdaptState b(cfg_of(AdaptRule::AdamDiag, 0.3, 0.001), 4);
    Vector hist(4);
    for (int t = 0; t < 5; ++t) {
      for (auto& h : hist) h = rng.normal();
      a.update_adam_diag(hist);
      b.update_adam_diag(hist);
    }
    Vector g(4);
    for (auto& gi : g) gi = rng.normal();
    const Metric ma = a.update_adam_diag(g);
    const Metric mb = b.update_adam_diag(scaled(g, 3.0));
    for (std::size_t i = 0; i < 4; ++i) CHECK(mb.diag[i] >= ma.diag[i]);
  }
}

TEST_CASE("rule mismatch and malformed inputs are rejected") {
  AdaptState st(cfg_of(AdaptRule::AdamDiag, 0.5, 0.001), 2);
  CHECK_THROWS_AS(st.update_global_norm({1.0, 1.0}), ContractViolation);
  CHECK_THROWS_AS(st.update_adabelief({1.0, 1.0}, {0.0, 0.0}), ContractViolation);
  CHECK_THROWS_AS(st.update_adam_diag({1.0}), ContractViolation);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(st.update_adam_diag({inf, 0.0}), ContractViolation);

  CHECK_THROWS_AS(AdaptState(cfg_of(AdaptRule::AdamDiag, 0.0, 0.001), 2), ContractViolation);
  CHECK_THROWS_AS(AdaptState(cfg_of(AdaptRule::AdamDiag, 1.0, 0.001), 2), ContractViolation);
  CHECK_THROWS_AS(AdaptState(cfg_of(AdaptRule::AdamDiag, 0.5, 0.0), 2), ContractViolation);
  AdaptConfig bad = cfg_of(AdaptRule::AdamGlobal, 0.5, 0.001);
  bad.b_cap = 1e-4;  // below the floor
  CHECK_THROWS_AS(AdaptState(bad, 2), ContractViolation);
  AdaptConfig badcap = cfg_of(AdaptRule::AdamDiag, 0.5, 0.1);
  badcap.a_cap = 0.05;  // below the offset
  CHECK_THROWS_AS(AdaptState(badcap, 2), ContractViolation);
}

TEST_CASE("rule names round-trip") {
  for (AdaptRule r : {AdaptRule::AdamDiag, AdaptRule::AdamGlobal, AdaptRule::AdaBeliefDiag,
                      AdaptRule::AdaBeliefGlobal, AdaptRule::Constant})
    CHECK(adapt_rule_from_string(to_string(r)) == r);
  CHECK_THROWS_AS(adapt_rule_from_string("adagrad"), ConfigError);
}

TEST_CASE("global rules report the clamp range used by the schedule validator") {
  AdaptConfig c = cfg_of(AdaptRule::AdamGlobal, 0.5, 0.001);
  AdaptState st(c, 2);
  CHECK(st.emitted_floor() == doctest::Approx(0.001 + 0.001).epsilon(1e-15));
  CHECK(st.emitted_cap() == doctest::Approx(3.0 + 0.001).epsilon(1e-15));
}
