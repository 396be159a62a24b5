#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cascade/coefficients.hpp"
#include "cascade/initial_condition.hpp"
#include "cascade/solvers.hpp"

namespace cascade {

struct NumericOptions {
  double quad_tol = 1e-10;
  int gh_nodes = 64;
  int l_max = 16;
  std::uint64_t seed = 1;
  long mc_paths = 100000;
  long mc_steps = 200;
};

// Parsed problem configuration. Unknown keys are rejected; `resolved()`
// echoes the fully-defaulted configuration for output artifacts.
struct ProblemConfig {
  Variant variant = Variant::degenerate;
  int n = 1;
  std::string a_src = "1";
  std::string c_src = "1";
  double lambda_max = 1.0;
  InitialCondition ic{RadialPower{0.0}};
  NumericOptions options;

  CoefficientSpec coefficient_spec() const;
  SolveOptions solve_options() const;
  nlohmann::json resolved() const;

  static ProblemConfig from_json(const nlohmann::json& j);
  static ProblemConfig load(const std::string& path);  // IoError / ConfigError
};

}  // namespace cascade
