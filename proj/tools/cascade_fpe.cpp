// Command-line front end: solve / validate / moments over JSON problem
// configurations, CSV + JSON output with reproducible bytes.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cascade/config.hpp"
#include "cascade/io.hpp"
#include "cascade/kernels.hpp"
#include "cascade/oracle.hpp"
#include "cascade/parallel.hpp"
#include "cascade/rng.hpp"
#include "cascade/solvers.hpp"

using namespace cascade;
using nlohmann::json;

namespace {

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    const std::string cell = text.substr(start, comma - start);
    if (cell.empty()) throw ConfigError(what + ": empty entry in list '" + text + "'");
    out.push_back(parse_double(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

struct GridSpec {
  std::string text;
  std::vector<double> radii;
  std::vector<std::vector<double>> angle_lists;  // one per angle coordinate
};

GridSpec parse_grid(const std::string& text, int n) {
  GridSpec grid;
  grid.text = text;
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.empty() || parts[0] != "log")
    throw ConfigError("grid must have the form log:min,max,count[:angles...]");
  if (parts.size() < 2) throw ConfigError("grid is missing its radial block");
  auto radial = parse_number_list(parts[1], "grid radii");
  if (radial.size() != 3) throw ConfigError("grid radial block must be min,max,count");
  const double r_min = radial[0], r_max = radial[1];
  const int count = static_cast<int>(radial[2]);
  if (!(r_min > 0.0) || r_max < r_min || count < 1 || radial[2] != count)
    throw ConfigError("grid requires 0 < min <= max and an integer count >= 1");
  for (int i = 0; i < count; ++i) {
    grid.radii.push_back(count == 1 ? r_min
                                    : r_min * std::pow(r_max / r_min,
                                                       static_cast<double>(i) / (count - 1)));
  }

  const std::size_t angle_blocks = parts.size() - 2;
  if (angle_blocks > static_cast<std::size_t>(std::max(0, n - 1)))
    throw ConfigError("grid has more angle blocks than the problem has angles");
  for (int a = 0; a < n - 1; ++a) {
    if (a < static_cast<int>(angle_blocks))
      grid.angle_lists.push_back(parse_number_list(parts[2 + a], "grid angles"));
    else
      grid.angle_lists.push_back({1.0});  // fixed generic direction
  }
  return grid;
}

std::vector<std::vector<double>> grid_points(const GridSpec& grid, int n) {
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> index(grid.angle_lists.size(), 0);
  for (double r : grid.radii) {
    // odometer over the angle lists
    std::fill(index.begin(), index.end(), 0);
    while (true) {
      SphericalPoint p;
      p.radius = r;
      for (std::size_t a = 0; a < index.size(); ++a)
        p.angles.push_back(grid.angle_lists[a][index[a]]);
      points.push_back(n == 1 ? std::vector<double>{r} : p.to_cartesian());
      std::size_t a = 0;
      for (; a < index.size(); ++a) {
        if (++index[a] < grid.angle_lists[a].size()) break;
        index[a] = 0;
      }
      if (a == index.size()) break;
    }
  }
  return points;
}

json field_metadata(const SolutionField& field) {
  json meta;
  meta["gh_nodes"] = field.gh_nodes;
  meta["l_max_used"] = field.l_max_used;
  meta["tail_estimate"] = field.tail_estimate;
  meta["quad_tol"] = field.quad_tol;
  meta["beta0"] = field.beta0;
  meta["beta1"] = field.beta1;
  meta["gamma"] = field.gamma;
  json origin = json::array();
  for (std::size_t i = 0; i < field.at_origin.size(); ++i)
    if (field.at_origin[i]) origin.push_back(i);
  meta["origin_points"] = origin;
  return meta;
}

int cmd_solve(const std::string& config_path, const std::string& out_path,
              const std::string& lambdas_arg, const std::string& grid_arg, long long seed) {
  ProblemConfig config = ProblemConfig::load(config_path);
  if (seed >= 0) config.options.seed = static_cast<std::uint64_t>(seed);
  std::vector<double> lambdas = lambdas_arg.empty()
                                    ? std::vector<double>{config.lambda_max}
                                    : parse_number_list(lambdas_arg, "--lambdas");
  GridSpec grid = parse_grid(grid_arg, config.n);
  auto points = grid_points(grid, config.n);

  Solver solver(config.coefficient_spec(), config.ic, config.solve_options());
  SolutionField field = solver.evaluate_field(lambdas, points);

  json sidecar;
  sidecar["config"] = config.resolved();
  sidecar["grid"] = {{"spec", grid.text}, {"lambdas", lambdas}, {"points", points.size()}};
  sidecar["metadata"] = field_metadata(field);

  atomic_write(out_path, solution_csv(field, config.n));
  atomic_write(out_path + ".json", sidecar.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// validate

json run_coefficient_check(const ProblemConfig& config) {
  auto spec = config.coefficient_spec();
  IntegratedCoefficients coeffs(spec, config.options.quad_tol);
  auto map = map_coefficients(spec);
  const double l0 = 0.5 * config.lambda_max;
  const double h = 1e-3 * std::min(1.0, config.lambda_max);

  double worst_derivative = 0.0;
  worst_derivative = std::max(worst_derivative,
                              std::abs((coeffs.beta0(l0 + h) - coeffs.beta0(l0 - h)) / (2 * h) -
                                       map.b0(l0)) /
                                  (1.0 + std::abs(map.b0(l0))));
  worst_derivative = std::max(worst_derivative,
                              std::abs((coeffs.beta1(l0 + h) - coeffs.beta1(l0 - h)) / (2 * h) -
                                       map.b1(l0)) /
                                  (1.0 + std::abs(map.b1(l0))));
  worst_derivative = std::max(worst_derivative,
                              std::abs((coeffs.gamma(l0 + h) - coeffs.gamma(l0 - h)) / (2 * h) -
                                       map.c(l0)) /
                                  (1.0 + std::abs(map.c(l0))));

  auto segment = integrate_adaptive(map.b0, 0.3 * config.lambda_max, 0.9 * config.lambda_max,
                                    config.options.quad_tol);
  const double additivity = std::abs(coeffs.beta0(0.9 * config.lambda_max) -
                                     coeffs.beta0(0.3 * config.lambda_max) - segment.value);

  const bool pass = coeffs.beta0(0.0) == 0.0 && coeffs.beta1(0.0) == 0.0 &&
                    coeffs.gamma(0.0) == 0.0 && worst_derivative <= 1e-5 &&
                    additivity <= 2.0 * config.options.quad_tol + 1e-12;
  return json{{"name", "coefficient_integrals"},
              {"pass", pass},
              {"measured",
               {{"derivative_mismatch", worst_derivative}, {"additivity_gap", additivity}}}};
}

json run_kernel_check(const ProblemConfig& config) {
  auto rule = gauss_hermite(config.options.gh_nodes);
  double w = 0.0, odd = 0.0, u2 = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    w += rule.weights[i];
    odd += rule.weights[i] * rule.nodes[i];
    u2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double rule_gap = std::max({std::abs(w - sqrt_pi) / sqrt_pi, std::abs(odd) / sqrt_pi,
                                    std::abs(u2 - 0.5 * sqrt_pi) / sqrt_pi});

  auto f = [](double t) { return std::exp(0.8 * t) + 0.3 * t * t * t; };
  const double gamma = 0.4, shift = 0.7;
  auto reflected = [&](double t) { return f(2.0 * shift - t); };
  const double sym_gap = std::abs(gaussian_log_average(f, gamma, shift, rule) -
                                  gaussian_log_average(reflected, gamma, shift, rule));

  auto g = [](double t) { return std::exp(0.5 * t); };
  const double recovery_gap = std::abs(gaussian_log_average(g, 1e-12, 0.3, rule) - g(0.3)) /
                              std::abs(g(0.3));

  auto phi = [](std::span<const double> v) {
    double r2 = 0.0;
    for (double x : v) r2 += x * x;
    return std::pow(r2, 0.65) + v[0] * v[0];
  };
  const double beta = 0.6;
  auto kernel_then_dilate = dilate(
      [&](std::span<const double> v) { return gaussian_log_average(phi, gamma, 0.0, rule, v); },
      beta);
  auto dilated = dilate(phi, beta);
  const std::vector<double> probe = {0.8, -0.5};
  const double a_val = kernel_then_dilate(probe);
  const double b_val = gaussian_log_average(dilated, gamma, 0.0, rule, probe);
  const double commute_gap = std::abs(a_val - b_val) / (1.0 + std::abs(a_val));

  const bool pass =
      rule_gap <= 1e-13 && sym_gap <= 1e-13 && recovery_gap <= 1e-10 && commute_gap <= 1e-12;
  return json{{"name", "kernel_invariants"},
              {"pass", pass},
              {"measured",
               {{"rule_gap", rule_gap},
                {"symmetry_gap", sym_gap},
                {"recovery_gap", recovery_gap},
                {"factorization_gap", commute_gap}}}};
}

json run_mass_check(const ProblemConfig& config, const Solver& solver) {
  const int n = config.n;
  const auto& coeffs = solver.coeffs();
  double worst_mass = 0.0, worst_identity = 0.0;
  for (double frac : {0.25, 0.5, 1.0}) {
    const double lambda = frac * config.lambda_max;
    worst_mass = std::max(worst_mass, std::abs(radial_moment(solver, 0.0, lambda) - 1.0));
    const double b0 = coeffs.beta0(lambda), b1 = coeffs.beta1(lambda), g = coeffs.gamma(lambda);
    const double identity = config.variant == Variant::degenerate
                                ? b0 - n * b1 + n * n * g
                                : b0 - n * b1 - n * (n - 2) * g + n * n * g;
    worst_identity = std::max(worst_identity, std::abs(identity));
  }
  const bool pass = worst_mass <= 1e-8 && worst_identity <= 1e-10;
  return json{{"name", "mass_conservation"},
              {"pass", pass},
              {"measured",
               {{"max_mass_gap", worst_mass}, {"max_exponent_identity", worst_identity}}}};
}

json run_residual_check_suite(const ProblemConfig& config, const Solver& solver) {
  SplitMix64 rng(config.options.seed);
  std::vector<oracle::ResidualSample> samples;
  while (samples.size() < 5) {
    oracle::ResidualSample s;
    s.lambda = (0.3 + 0.4 * rng.uniform()) * config.lambda_max;
    s.v.resize(static_cast<std::size_t>(config.n));
    double r2 = 0.0;
    for (auto& x : s.v) {
      x = 2.0 * rng.uniform() - 1.0;
      r2 += x * x;
    }
    if (r2 < 0.25) continue;
    samples.push_back(std::move(s));
  }
  const double h0 = 2e-2 * std::min(1.0, 0.25 * config.lambda_max);
  auto P = [&](double lambda, std::span<const double> v) { return solver.value(lambda, v); };
  auto report = oracle::residual_check(P, config.coefficient_spec(), samples,
                                       std::vector<double>{h0, 0.5 * h0});
  const bool pass = report.order_estimate >= 1.7 || report.steps.back().max_abs <= 1e-12;
  return json{{"name", "residual"},
              {"pass", pass},
              {"measured",
               {{"order_estimate", report.order_estimate},
                {"max_residual", report.steps.back().max_abs}}}};
}

json run_mol_check(const ProblemConfig& config, const Solver& solver) {
  const LogNormalRadial* d = config.ic.as_log_normal();
  const double lambda_end = std::min(0.5 * config.lambda_max, 0.75);
  const auto& coeffs = solver.coeffs();
  double shift = coeffs.beta1(lambda_end);
  if (config.variant == Variant::isotropic) shift += (config.n - 2) * coeffs.gamma(lambda_end);
  const double sigma_eff = std::sqrt(d->sigma * d->sigma + 2.0 * coeffs.gamma(lambda_end));
  const double center = d->mu - shift;

  oracle::MoLOptions options;
  options.nx = 601;
  options.pad = 7.0;
  options.rk_tol = 1e-8;
  auto mol = oracle::mol_reference(config.coefficient_spec(), config.ic, lambda_end,
                                   center - 3.5 * sigma_eff, center + 3.5 * sigma_eff, options);

  double max_exact = 0.0, max_gap = 0.0;
  for (std::size_t i = 0; i < mol.x.size(); ++i) {
    std::vector<double> v(static_cast<std::size_t>(config.n), 0.0);
    v[0] = std::exp(mol.x[i]);
    const double exact = solver.value(lambda_end, v);
    max_exact = std::max(max_exact, std::abs(exact));
    max_gap = std::max(max_gap, std::abs(mol.values[i] - exact));
  }
  const double rel = max_gap / max_exact;
  const bool pass = rel <= 1e-4 && mol.boundary_influence <= 1e-6;
  return json{{"name", "mol_crosscheck"},
              {"pass", pass},
              {"measured",
               {{"max_relative_gap", rel},
                {"boundary_influence", mol.boundary_influence},
                {"lambda_end", lambda_end}}}};
}

json run_mc_check(const ProblemConfig& config, const Solver& solver) {
  const LogNormalRadial* d = config.ic.as_log_normal();
  const double lambda_end = std::min(0.5 * config.lambda_max, 0.75);
  oracle::MCOptions options;
  options.paths = config.options.mc_paths;
  options.steps = config.options.mc_steps;
  options.seed = config.options.seed;

  json measured = json::object();
  bool pass = true;
  for (double p : {1.0, 2.0}) {
    auto fp = [p](std::span<const double> v) {
      double r2 = 0.0;
      for (double x : v) r2 += x * x;
      return std::pow(std::sqrt(r2), p);
    };
    auto est = oracle::mc_simulate(config.coefficient_spec(), *d, fp,
                                   "abs_moment_" + format_double(p), lambda_end, options);
    const double exact = moment_factor(solver, p, lambda_end) * log_normal_radial_moment(*d, p);
    const double gap = std::abs(est.estimate - exact);
    measured["p" + format_double(p)] = {{"estimate", est.estimate},
                                        {"std_error", est.std_error},
                                        {"exact", exact},
                                        {"gap_sigmas", gap / est.std_error}};
    if (gap > 4.0 * est.std_error) pass = false;
  }
  return json{{"name", "mc_moments"}, {"pass", pass}, {"measured", measured}};
}

json run_degeneracy_check(const ProblemConfig& config) {
  bool pass = true;
  int checked = 0;
  if (config.n >= 2 && config.n <= 6) {
    for (int l = 0; l <= 6; ++l) {
      if (degeneracy(l, config.n) != oracle::harmonic_dimension(l, config.n)) pass = false;
      ++checked;
    }
  }
  return json{{"name", "degeneracy"}, {"pass", pass}, {"measured", {{"modes_checked", checked}}}};
}

int cmd_validate(const std::string& config_path, const std::string& out_path, long long seed) {
  ProblemConfig config = ProblemConfig::load(config_path);
  if (seed >= 0) config.options.seed = static_cast<std::uint64_t>(seed);
  Solver solver(config.coefficient_spec(), config.ic, config.solve_options());

  json checks = json::array();
  checks.push_back(run_coefficient_check(config));
  checks.push_back(run_kernel_check(config));
  checks.push_back(run_residual_check_suite(config, solver));
  checks.push_back(run_degeneracy_check(config));
  if (config.ic.as_log_normal()) {
    checks.push_back(run_mass_check(config, solver));
    checks.push_back(run_mol_check(config, solver));
    checks.push_back(run_mc_check(config, solver));
  }

  bool all_pass = true;
  for (const auto& c : checks)
    if (!c.at("pass").get<bool>()) all_pass = false;

  json report;
  report["config"] = config.resolved();
  report["checks"] = checks;
  report["pass"] = all_pass;
  atomic_write(out_path, report.dump(2) + "\n");
  if (!all_pass) {
    std::fprintf(stderr, "validation failed; see %s\n", out_path.c_str());
    return 2;
  }
  return 0;
}

int cmd_moments(const std::string& config_path, const std::string& out_path,
                const std::string& lambdas_arg, const std::string& powers_arg, long long seed) {
  ProblemConfig config = ProblemConfig::load(config_path);
  if (seed >= 0) config.options.seed = static_cast<std::uint64_t>(seed);
  if (!config.ic.as_log_normal())
    throw ConfigError(
        "moments requires log_normal_radial initial data (the integrable density class)");
  const LogNormalRadial* d = config.ic.as_log_normal();
  std::vector<double> lambdas = lambdas_arg.empty()
                                    ? std::vector<double>{config.lambda_max}
                                    : parse_number_list(lambdas_arg, "--lambdas");
  std::vector<double> powers = parse_number_list(powers_arg, "--powers");

  Solver solver(config.coefficient_spec(), config.ic, config.solve_options());
  std::vector<std::vector<double>> rows;
  for (double lambda : lambdas) {
    for (double p : powers) {
      const double quad = radial_moment(solver, p, lambda);
      const double analytic = moment_factor(solver, p, lambda) * log_normal_radial_moment(*d, p);
      const double rel_gap = std::abs(quad - analytic) / std::abs(analytic);
      rows.push_back({lambda, p, quad, analytic, rel_gap});
    }
  }
  atomic_write(out_path, make_csv({"lambda", "p", "quadrature", "analytic", "rel_gap"}, rows));

  json sidecar;
  sidecar["config"] = config.resolved();
  sidecar["lambdas"] = lambdas;
  sidecar["powers"] = powers;
  atomic_write(out_path + ".json", sidecar.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cascade_fpe: closed-form solutions of scale-evolution Fokker-Planck problems\n"
      "with linear drift and quadratic multiplicative diffusion (isotropic c v^2 I or\n"
      "rank-one c vv tensor), plus self-validation oracles."};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::string lambdas_arg;
  std::string grid_arg = "log:0.1,10,50";
  std::string powers_arg = "1,2";
  long long seed_override = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "problem configuration (JSON)")->required();
    cmd->add_option("--out", out_path, "output path (a .json sidecar is written next to it)")
        ->required();
    cmd->add_option("--seed", seed_override, "override options.seed from the config");
  };

  CLI::App* solve = app.add_subcommand("solve", "evaluate P(lambda, v) on a grid (CSV + JSON)");
  add_common(solve);
  solve->add_option("--lambdas", lambdas_arg, "comma list of lambda values (default: lambda_max)");
  solve->add_option("--grid", grid_arg, "log:min,max,count[:theta1,...[:theta2,...]]")
      ->capture_default_str();

  CLI::App* validate =
      app.add_subcommand("validate", "run the oracle suite appropriate to the config (JSON)");
  add_common(validate);

  CLI::App* moments =
      app.add_subcommand("moments", "radial moments: quadrature vs closed form (CSV + JSON)");
  add_common(moments);
  moments->add_option("--lambdas", lambdas_arg, "comma list of lambda values (default: lambda_max)");
  moments->add_option("--powers", powers_arg, "comma list of moment orders p")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_path, lambdas_arg, grid_arg, seed_override);
    if (validate->parsed()) return cmd_validate(config_path, out_path, seed_override);
    return cmd_moments(config_path, out_path, lambdas_arg, powers_arg, seed_override);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
