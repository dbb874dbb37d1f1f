#include "minimax/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "minimax/csv.hpp"
#include "minimax/errors.hpp"

namespace minimax {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& where, const std::string& what,
                            const std::string& got) {
  throw ConfigError(where + ": expected " + what + ", got '" + got + "'");
}

std::string parse_string(const std::string& where, const std::string& v) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') bad_value(where, "a quoted string", v);
  const std::string inner = v.substr(1, v.size() - 2);
  if (inner.find('"') != std::string::npos) bad_value(where, "a quoted string", v);
  return inner;
}

double parse_double(const std::string& where, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(where, "a number", v);
  return out;
}

std::int64_t parse_int(const std::string& where, const std::string& v) {
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(where, "an integer", v);
  return out;
}

std::uint64_t parse_uint(const std::string& where, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    bad_value(where, "a nonnegative integer", v);
  return out;
}

bool parse_bool(const std::string& where, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(where, "true or false", v);
}

std::vector<std::uint64_t> parse_uint_array(const std::string& where, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    bad_value(where, "an integer array like [0, 1, 2]", v);
  std::vector<std::uint64_t> out;
  const std::string inner = trim(v.substr(1, v.size() - 2));
  if (inner.empty()) return out;
  std::stringstream ss(inner);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_uint(where, trim(cell)));
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  using Handler = std::function<void(const std::string& where, const std::string& value)>;
  std::map<std::string, Handler> handlers;
  const auto add = [&](const std::string& name, Handler h) { handlers[name] = std::move(h); };

  add("version", [&](const std::string& w, const std::string& v) {
    cfg.version = parse_string(w, v);
    if (cfg.version != "1")
      throw ConfigError("unsupported config version '" + cfg.version + "' (expected \"1\")");
  });

  auto& p = cfg.problem;
  add("problem.family", [&](const std::string& w, const std::string& v) {
    p.family = parse_string(w, v);
    if (p.family != "quadratic" && p.family != "robust_weighted_loss" &&
        p.family != "policy_eval_mspbe")
      throw ConfigError(w + ": unknown family '" + p.family + "'");
  });
  add("problem.data_seed",
      [&](const std::string& w, const std::string& v) { p.data_seed = parse_uint(w, v); });
  add("problem.d1", [&](const std::string& w, const std::string& v) {
    p.d1 = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.d2", [&](const std::string& w, const std::string& v) {
    p.d2 = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.mu", [&](const std::string& w, const std::string& v) { p.mu = parse_double(w, v); });
  add("problem.sigma",
      [&](const std::string& w, const std::string& v) { p.sigma = parse_double(w, v); });
  add("problem.psd", [&](const std::string& w, const std::string& v) { p.psd = parse_bool(w, v); });
  add("problem.x_radius",
      [&](const std::string& w, const std::string& v) { p.x_radius = parse_double(w, v); });
  add("problem.init_scale",
      [&](const std::string& w, const std::string& v) { p.init_scale = parse_double(w, v); });
  add("problem.per_group", [&](const std::string& w, const std::string& v) {
    p.per_group = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.varrho_reg",
      [&](const std::string& w, const std::string& v) { p.varrho_reg = parse_double(w, v); });
  add("problem.dataset",
      [&](const std::string& w, const std::string& v) { p.dataset = parse_string(w, v); });
  add("problem.states", [&](const std::string& w, const std::string& v) {
    p.states = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.actions", [&](const std::string& w, const std::string& v) {
    p.actions = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.feat_dim", [&](const std::string& w, const std::string& v) {
    p.feat_dim = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("problem.tau",
      [&](const std::string& w, const std::string& v) { p.tau = parse_double(w, v); });

  auto& s = cfg.solver;
  add("solver.algorithm", [&](const std::string& w, const std::string& v) {
    try {
      s.algo = algorithm_from_string(parse_string(w, v));
    } catch (const ConfigError& e) {
      throw ConfigError(w + ": " + e.what());
    }
  });
  add("solver.schedule", [&](const std::string& w, const std::string& v) {
    try {
      s.schedule.kind = schedule_from_string(parse_string(w, v));
    } catch (const ConfigError& e) {
      throw ConfigError(w + ": " + e.what());
    }
  });
  add("solver.k",
      [&](const std::string& w, const std::string& v) { s.schedule.k = parse_double(w, v); });
  add("solver.m",
      [&](const std::string& w, const std::string& v) { s.schedule.m = parse_double(w, v); });
  add("solver.eta",
      [&](const std::string& w, const std::string& v) { s.schedule.eta = parse_double(w, v); });
  add("solver.gamma",
      [&](const std::string& w, const std::string& v) { s.gamma = parse_double(w, v); });
  add("solver.lambda",
      [&](const std::string& w, const std::string& v) { s.lambda = parse_double(w, v); });
  add("solver.c1", [&](const std::string& w, const std::string& v) { s.c1 = parse_double(w, v); });
  add("solver.c2", [&](const std::string& w, const std::string& v) { s.c2 = parse_double(w, v); });
  add("solver.q", [&](const std::string& w, const std::string& v) {
    s.q = static_cast<std::size_t>(parse_uint(w, v));
  });
  add("solver.iters",
      [&](const std::string& w, const std::string& v) { s.iters = parse_int(w, v); });
  add("solver.output_rule", [&](const std::string& w, const std::string& v) {
    try {
      s.output_rule = output_rule_from_string(parse_string(w, v));
    } catch (const ConfigError& e) {
      throw ConfigError(w + ": " + e.what());
    }
  });
  add("solver.log_stride",
      [&](const std::string& w, const std::string& v) { s.log_stride = parse_int(w, v); });
  add("solver.divergence_guard", [&](const std::string& w, const std::string& v) {
    s.divergence_guard = parse_double(w, v);
  });

  const auto add_adapt = [&](const std::string& section, AdaptConfig& a) {
    add(section + ".rule", [&, section](const std::string& w, const std::string& v) {
      try {
        a.rule = adapt_rule_from_string(parse_string(w, v));
      } catch (const ConfigError& e) {
        throw ConfigError(w + ": " + e.what());
      }
    });
    add(section + ".varrho",
        [&](const std::string& w, const std::string& v) { a.varrho = parse_double(w, v); });
    add(section + ".rho",
        [&](const std::string& w, const std::string& v) { a.rho = parse_double(w, v); });
    add(section + ".b0",
        [&](const std::string& w, const std::string& v) { a.b0 = parse_double(w, v); });
    add(section + ".b_floor",
        [&](const std::string& w, const std::string& v) { a.b_floor = parse_double(w, v); });
    add(section + ".b_cap",
        [&](const std::string& w, const std::string& v) { a.b_cap = parse_double(w, v); });
    add(section + ".a_cap",
        [&](const std::string& w, const std::string& v) { a.a_cap = parse_double(w, v); });
  };
  add_adapt("adapt_x", s.adapt_x);
  add_adapt("adapt_y", s.adapt_y);

  add("sweep.seeds", [&](const std::string& w, const std::string& v) {
    cfg.sweep.seeds = parse_uint_array(w, v);
  });
  add("sweep.jobs", [&](const std::string& w, const std::string& v) {
    cfg.sweep.jobs = static_cast<std::size_t>(parse_uint(w, v));
    if (cfg.sweep.jobs < 1) throw ConfigError(w + ": jobs must be at least 1");
  });
  add("output.dir",
      [&](const std::string& w, const std::string& v) { cfg.output.dir = parse_string(w, v); });

  std::string line, section;
  std::size_t line_no = 0;
  std::vector<std::string> unknown;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "solver" && section != "adapt_x" &&
          section != "adapt_y" && section != "sweep" && section != "output")
        unknown.push_back("[" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = handlers.find(full);
    if (it == handlers.end()) {
      unknown.push_back(full);
      continue;
    }
    it->second(full, value);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config entries:";
    for (const auto& u : unknown) msg += " " + u;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_config(ss);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) { return format_double(v); };
  out << "version = \"" << cfg.version << "\"\n\n";

  const auto& p = cfg.problem;
  out << "[problem]\n";
  out << "family = \"" << p.family << "\"\n";
  out << "data_seed = " << p.data_seed << "\n";
  out << "d1 = " << p.d1 << "\n";
  out << "d2 = " << p.d2 << "\n";
  out << "mu = " << num(p.mu) << "\n";
  out << "sigma = " << num(p.sigma) << "\n";
  out << "psd = " << (p.psd ? "true" : "false") << "\n";
  out << "x_radius = " << num(p.x_radius) << "\n";
  out << "init_scale = " << num(p.init_scale) << "\n";
  out << "per_group = " << p.per_group << "\n";
  out << "varrho_reg = " << num(p.varrho_reg) << "\n";
  out << "dataset = \"" << p.dataset << "\"\n";
  out << "states = " << p.states << "\n";
  out << "actions = " << p.actions << "\n";
  out << "feat_dim = " << p.feat_dim << "\n";
  out << "tau = " << num(p.tau) << "\n\n";

  const auto& s = cfg.solver;
  out << "[solver]\n";
  out << "algorithm = \"" << to_string(s.algo) << "\"\n";
  out << "schedule = \"" << to_string(s.schedule.kind) << "\"\n";
  out << "k = " << num(s.schedule.k) << "\n";
  out << "m = " << num(s.schedule.m) << "\n";
  out << "eta = " << num(s.schedule.eta) << "\n";
  out << "gamma = " << num(s.gamma) << "\n";
  out << "lambda = " << num(s.lambda) << "\n";
  out << "c1 = " << num(s.c1) << "\n";
  out << "c2 = " << num(s.c2) << "\n";
  out << "q = " << s.q << "\n";
  out << "iters = " << s.iters << "\n";
  out << "output_rule = \"" << to_string(s.output_rule) << "\"\n";
  out << "log_stride = " << s.log_stride << "\n";
  out << "divergence_guard = " << num(s.divergence_guard) << "\n\n";

  const auto dump_adapt = [&](const char* name, const AdaptConfig& a) {
    out << "[" << name << "]\n";
    out << "rule = \"" << to_string(a.rule) << "\"\n";
    out << "varrho = " << num(a.varrho) << "\n";
    out << "rho = " << num(a.rho) << "\n";
    out << "b0 = " << num(a.b0) << "\n";
    out << "b_floor = " << num(a.b_floor) << "\n";
    out << "b_cap = " << num(a.b_cap) << "\n";
    out << "a_cap = " << num(a.a_cap) << "\n\n";
  };
  dump_adapt("adapt_x", s.adapt_x);
  dump_adapt("adapt_y", s.adapt_y);

  out << "[sweep]\n";
  out << "seeds = [";
  for (std::size_t i = 0; i < cfg.sweep.seeds.size(); ++i)
    out << (i ? ", " : "") << cfg.sweep.seeds[i];
  out << "]\n";
  out << "jobs = " << cfg.sweep.jobs << "\n\n";

  out << "[output]\n";
  out << "dir = \"" << cfg.output.dir << "\"\n";
  return out.str();
}

std::unique_ptr<StochasticMinimaxProblem> make_problem_from(const ProblemConfig& p) {
  if (p.family == "quadratic") {
    return std::make_unique<QuadraticMinimax>(QuadraticMinimax::make(
        p.d1, p.d2, p.mu, p.sigma, p.data_seed, p.psd, p.x_radius, p.init_scale));
  }
  if (p.family == "robust_weighted_loss") {
    if (!p.dataset.empty())
      return std::make_unique<RobustWeightedLoss>(
          RobustWeightedLoss::from_csv(p.dataset, p.varrho_reg));
    return std::make_unique<RobustWeightedLoss>(
        RobustWeightedLoss::make_synthetic(p.per_group, p.varrho_reg, p.data_seed));
  }
  if (p.family == "policy_eval_mspbe") {
    return std::make_unique<PolicyEvalMSPBE>(
        PolicyEvalMSPBE::make_synthetic(p.states, p.actions, p.feat_dim, p.tau, p.data_seed));
  }
  throw ConfigError("unknown problem family: " + p.family);
}

ProblemConstants constants_for(const StochasticMinimaxProblem& problem,
                               const SolverConfig& solver) {
  const auto& ps = problem.spec();
  // the plain baseline ignores the adapt sections and runs on identity metrics
  AdaptConfig cx = solver.adapt_x;
  AdaptConfig cy = solver.adapt_y;
  if (solver.algo == Algorithm::Sgda) {
    cx = AdaptConfig{};
    cy = AdaptConfig{};
    cx.rule = AdaptRule::Constant;
    cy.rule = AdaptRule::Constant;
  }
  const AdaptState ax(cx, ps.d1);
  const AdaptState ay(cy, ps.d2);
  ProblemConstants pc;
  pc.mu = ps.mu;
  pc.l_f = ps.l_f;
  pc.rho = ax.emitted_floor();
  pc.b = ay.emitted_floor();
  pc.b_hat = ay.emitted_cap();
  return pc;
}

}  // namespace minimax
