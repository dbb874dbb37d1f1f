#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/solver.hpp"

using namespace minimax;

namespace {

ProblemConstants unit_constants() { return ProblemConstants{1.0, 1.0, 1.0, 1.0, 1.0}; }

SolverConfig config_from(Algorithm algo, double k, std::size_t q, const SuggestedSchedule& s) {
  SolverConfig cfg;
  cfg.algo = algo;
  cfg.schedule.kind =
      algo == Algorithm::VrAdaGda ? ScheduleKind::PolyThird : ScheduleKind::PolyHalf;
  cfg.schedule.k = k;
  cfg.schedule.m = s.m;
  cfg.c1 = s.c1;
  cfg.c2 = s.c2;
  cfg.lambda = s.lambda;
  cfg.gamma = s.gamma;
  cfg.q = q;
  return cfg;
}

const ConditionCheck& find_check(const ValidationReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  REQUIRE(false);
  throw std::logic_error("unreachable");
}

}  // namespace

// expected values below were computed independently from the closed-form
// bounds and frozen; agreement is required to 1e-3 relative
TEST_CASE("suggested half-power constants match the frozen unit-scale values") {
  const auto s = suggest_schedule(Algorithm::AdaGda, 1.0, 1, unit_constants());
  CHECK(s.c1 == doctest::Approx(2.25).epsilon(1e-3));
  CHECK(s.c2 == doctest::Approx(37.5).epsilon(1e-3));
  CHECK(s.m == doctest::Approx(1406.25).epsilon(1e-3));
  CHECK(s.lambda == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
  CHECK(s.gamma == doctest::Approx(0.0136035).epsilon(1e-3));
}

TEST_CASE("suggested third-power constants match the frozen unit-scale values") {
  const auto s = suggest_schedule(Algorithm::VrAdaGda, 1.0, 1, unit_constants());
  CHECK(s.c1 == doctest::Approx(2.9166667).epsilon(1e-3));
  CHECK(s.c2 == doctest::Approx(38.1666667).epsilon(1e-3));
  CHECK(s.m == doctest::Approx(55597.1713).epsilon(1e-3));
  CHECK(s.lambda == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
  CHECK(s.gamma == doctest::Approx(0.0135681).epsilon(1e-3));
}

TEST_CASE("suggested constants at a second operating point match frozen values") {
  ProblemConstants pc{0.5, 2.0, 0.8, 2.5, 0.05};
  const auto s = suggest_schedule(Algorithm::AdaGda, 0.7, 4, pc);
  CHECK(s.c1 == doctest::Approx(0.5625).epsilon(1e-3));
  CHECK(s.c2 == doctest::Approx(150.0).epsilon(1e-3));
  CHECK(s.m == doctest::Approx(11025.0).epsilon(1e-3));
  CHECK(s.lambda == doctest::Approx(0.0666667).epsilon(1e-3));
  CHECK(s.gamma == doctest::Approx(6.80412e-06).epsilon(1e-3));
}

TEST_CASE("every suggestion validates against its own conditions") {
  for (double mu : {0.1, 0.5, 1.0})
    for (double lf : {1.0, 2.0, 10.0})
      for (double b : {0.5, 1.0})
        for (double bh : {1.0, 3.0})
          for (double rho : {0.01, 1.0})
            for (double k : {0.5, 1.0, 2.0})
              for (std::size_t q : {std::size_t{1}, std::size_t{16}}) {
                ProblemConstants pc{mu, lf, b, bh, rho};
                for (auto algo : {Algorithm::AdaGda, Algorithm::VrAdaGda}) {
                  const auto s = suggest_schedule(algo, k, q, pc);
                  const auto rep = validate_config(config_from(algo, k, q, s), pc);
                  CHECK(rep.pass);
                  for (const auto& c : rep.checks) CHECK(c.ok);
                }
              }
}

TEST_CASE("a violated inequality is reported by name") {
  const auto pc = unit_constants();
  const auto s = suggest_schedule(Algorithm::AdaGda, 1.0, 1, pc);
  auto cfg = config_from(Algorithm::AdaGda, 1.0, 1, s);
  cfg.c1 = 2.0;  // below the 9 mu^2 / 4 = 2.25 floor
  const auto rep = validate_config(cfg, pc);
  CHECK_FALSE(rep.pass);
  const auto& c = find_check(rep, "c1_lower");
  CHECK_FALSE(c.ok);
  CHECK(c.lhs == 2.0);
  CHECK(c.rhs == doctest::Approx(2.25));
  CHECK(c.relation == ">=");
  // every other condition still holds
  for (const auto& other : rep.checks)
    if (other.name != "c1_lower") CHECK(other.ok);
}

TEST_CASE("the schedule family itself is a checked condition") {
  const auto pc = unit_constants();
  const auto s = suggest_schedule(Algorithm::AdaGda, 1.0, 1, pc);
  auto cfg = config_from(Algorithm::AdaGda, 1.0, 1, s);
  cfg.schedule.kind = ScheduleKind::PolyThird;
  const auto rep = validate_config(cfg, pc);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(find_check(rep, "schedule_kind").ok);
}

TEST_CASE("oversized step scales fail their upper bounds") {
  const auto pc = unit_constants();
  const auto s = suggest_schedule(Algorithm::VrAdaGda, 1.0, 1, pc);
  auto cfg = config_from(Algorithm::VrAdaGda, 1.0, 1, s);
  cfg.lambda = 0.2;  // above 1/6
  cfg.gamma = 0.05;  // above 0.01357
  const auto rep = validate_config(cfg, pc);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(find_check(rep, "lambda_upper").ok);
  CHECK_FALSE(find_check(rep, "gamma_upper").ok);
}

TEST_CASE("the plain baseline has no conditions to check") {
  SolverConfig cfg;
  cfg.algo = Algorithm::Sgda;
  const auto rep = validate_config(cfg, unit_constants());
  CHECK(rep.pass);
  CHECK(rep.checks.empty());
  CHECK_THROWS_AS(suggest_schedule(Algorithm::Sgda, 1.0, 1, unit_constants()),
                  UnsupportedCapability);
}

TEST_CASE("large-batch regime check compares q against the curvature bound") {
  ProblemConstants pc{0.1, 0.1, 1.0, 1.0, 1.0};  // bound = 16 / (81 * 0.01) = 19.75
  CHECK(check_batch_regime(19, pc).ok);
  CHECK_FALSE(check_batch_regime(20, pc).ok);
  const auto c = check_batch_regime(1, unit_constants());
  CHECK_FALSE(c.ok);  // 1 > 16/81
  CHECK(c.rhs == doctest::Approx(16.0 / 81.0));
  CHECK(c.name == "batch_regime");
}

TEST_CASE("nonsensical problem constants are rejected") {
  ProblemConstants bad = unit_constants();
  bad.mu = 0.0;
  CHECK_THROWS_AS(validate_config(SolverConfig{}, bad), ContractViolation);
  bad = unit_constants();
  bad.b_hat = 0.5;  // below b
  CHECK_THROWS_AS(suggest_schedule(Algorithm::AdaGda, 1.0, 1, bad), ContractViolation);
  CHECK_THROWS_AS(suggest_schedule(Algorithm::AdaGda, 0.0, 1, unit_constants()),
                  ContractViolation);
  CHECK_THROWS_AS(suggest_schedule(Algorithm::AdaGda, 1.0, 0, unit_constants()),
                  ContractViolation);
}
