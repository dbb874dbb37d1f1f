#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "minimax/solver.hpp"

namespace minimax {

// every family's knobs live here; a family reads the keys it understands and
// the serializer always writes the full resolved set, which keeps the
// round-trip lossless
struct ProblemConfig {
  std::string family = "quadratic";
  std::uint64_t data_seed = 7;
  // quadratic
  std::size_t d1 = 10, d2 = 10;
  double mu = 1.0;
  double sigma = 0.1;
  bool psd = true;
  double x_radius = 10.0;
  double init_scale = 0.5;
  // robust weighted loss
  std::size_t per_group = 50;
  double varrho_reg = 0.5;
  std::string dataset;  // optional CSV; empty = synthetic groups
  // policy evaluation
  std::size_t states = 5, actions = 2, feat_dim = 3;
  double tau = 0.95;
};

struct SweepConfig {
  std::vector<std::uint64_t> seeds = {0};
  std::size_t jobs = 1;
};

struct OutputConfig {
  std::string dir = "results";
};

struct ExperimentConfig {
  std::string version = "1";
  ProblemConfig problem;
  SolverConfig solver;
  SweepConfig sweep;
  OutputConfig output;
};

// sectioned key = value text (a small TOML subset: [section], strings in
// double quotes, numbers, booleans, [1, 2, 3] integer arrays, # comments);
// unknown sections, unknown keys, or a wrong version are errors that list
// the offending names
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

std::string serialize_config(const ExperimentConfig& cfg);

std::unique_ptr<StochasticMinimaxProblem> make_problem_from(const ProblemConfig& cfg);

// constants the theorem validator consumes: mu and L_f from the instance,
// b/b_hat from the y-side metric's emitted clamp range, rho from the x-side
// metric floor
ProblemConstants constants_for(const StochasticMinimaxProblem& problem,
                               const SolverConfig& solver);

}  // namespace minimax
