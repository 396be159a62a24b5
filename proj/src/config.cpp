#include "cascade/config.hpp"

#include <fstream>
#include <sstream>

namespace cascade {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

double get_number(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + context);
  if (!obj.at(key).is_number())
    throw ConfigError("key '" + std::string(key) + "' in " + context + " must be a number");
  return obj.at(key).get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + context);
  if (!obj.at(key).is_string())
    throw ConfigError("key '" + std::string(key) + "' in " + context + " must be a string");
  return obj.at(key).get<std::string>();
}

int get_int(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + context);
  if (!obj.at(key).is_number_integer())
    throw ConfigError("key '" + std::string(key) + "' in " + context + " must be an integer");
  return obj.at(key).get<int>();
}

Expression parse_radius_expression(const std::string& src) {
  static const std::vector<std::string> kRadius = {"v"};
  return Expression::parse(src, kRadius);
}

Expression parse_point_expression(const std::string& src, CoordsKind coords) {
  static const std::vector<std::string> kCartesian = {"v1", "v2", "v3"};
  static const std::vector<std::string> kSpherical = {"v", "theta", "phi"};
  return Expression::parse(src, coords == CoordsKind::cartesian ? kCartesian : kSpherical);
}

InitialCondition parse_initial_condition(const json& j) {
  if (!j.is_object()) throw ConfigError("initial_condition must be an object");
  const std::string type = get_string(j, "type", "initial_condition");
  if (type == "radial_power") {
    require_keys(j, {"type", "p"}, "initial_condition (radial_power)");
    return InitialCondition::radial_power(get_number(j, "p", "initial_condition"));
  }
  if (type == "harmonic_monomial") {
    require_keys(j, {"type", "p", "l", "k"}, "initial_condition (harmonic_monomial)");
    return InitialCondition::harmonic_monomial(get_number(j, "p", "initial_condition"),
                                               get_int(j, "l", "initial_condition"),
                                               get_int(j, "k", "initial_condition"));
  }
  if (type == "harmonic_series") {
    require_keys(j, {"type", "modes", "p_max"}, "initial_condition (harmonic_series)");
    if (!j.contains("modes") || !j.at("modes").is_array() || j.at("modes").empty())
      throw ConfigError("harmonic_series requires a non-empty 'modes' array");
    std::vector<SeriesMode> modes;
    for (const auto& mj : j.at("modes")) {
      require_keys(mj, {"l", "k", "radial"}, "harmonic_series mode");
      SeriesMode m{get_int(mj, "l", "harmonic_series mode"), get_int(mj, "k", "harmonic_series mode"),
                   parse_radius_expression(get_string(mj, "radial", "harmonic_series mode"))};
      modes.push_back(std::move(m));
    }
    const double p_max = j.contains("p_max") ? get_number(j, "p_max", "initial_condition") : 8.0;
    return InitialCondition::harmonic_series(std::move(modes), p_max);
  }
  if (type == "log_normal_radial") {
    require_keys(j, {"type", "mu", "sigma"}, "initial_condition (log_normal_radial)");
    return InitialCondition::log_normal_radial(get_number(j, "mu", "initial_condition"),
                                               get_number(j, "sigma", "initial_condition"));
  }
  if (type == "expression") {
    require_keys(j, {"type", "expr", "coords", "p_max"}, "initial_condition (expression)");
    const std::string coords_name =
        j.contains("coords") ? get_string(j, "coords", "initial_condition") : "cartesian";
    CoordsKind coords;
    if (coords_name == "cartesian")
      coords = CoordsKind::cartesian;
    else if (coords_name == "spherical")
      coords = CoordsKind::spherical;
    else
      throw ConfigError("initial_condition coords must be 'cartesian' or 'spherical'");
    const double p_max = j.contains("p_max") ? get_number(j, "p_max", "initial_condition") : 8.0;
    return InitialCondition::general_expression(
        parse_point_expression(get_string(j, "expr", "initial_condition"), coords), coords, p_max);
  }
  throw ConfigError("unknown initial_condition type '" + type + "'");
}

json initial_condition_json(const InitialCondition& ic) {
  json j;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          j["type"] = "radial_power";
          j["p"] = v.p;
        } else if constexpr (std::is_same_v<T, HarmonicMonomial>) {
          j["type"] = "harmonic_monomial";
          j["p"] = v.p;
          j["l"] = v.l;
          j["k"] = v.k;
        } else if constexpr (std::is_same_v<T, HarmonicSeries>) {
          j["type"] = "harmonic_series";
          j["p_max"] = v.p_max;
          json modes = json::array();
          for (const auto& m : v.modes)
            modes.push_back({{"l", m.l}, {"k", m.k}, {"radial", m.radial.source()}});
          j["modes"] = modes;
        } else if constexpr (std::is_same_v<T, LogNormalRadial>) {
          j["type"] = "log_normal_radial";
          j["mu"] = v.mu;
          j["sigma"] = v.sigma;
        } else {
          j["type"] = "expression";
          j["expr"] = v.expr.source();
          j["coords"] = v.coords == CoordsKind::cartesian ? "cartesian" : "spherical";
          j["p_max"] = v.p_max;
        }
      },
      ic.storage());
  return j;
}

}  // namespace

CoefficientSpec ProblemConfig::coefficient_spec() const {
  return CoefficientSpec{Expression::parse(a_src), Expression::parse(c_src), n, variant,
                         lambda_max};
}

SolveOptions ProblemConfig::solve_options() const {
  SolveOptions s;
  s.quad_tol = options.quad_tol;
  s.gh_nodes = options.gh_nodes;
  s.l_max = options.l_max;
  return s;
}

nlohmann::json ProblemConfig::resolved() const {
  json j;
  j["variant"] = variant_name(variant);
  j["n"] = n;
  j["a"] = a_src;
  j["c"] = c_src;
  j["lambda_max"] = lambda_max;
  j["initial_condition"] = initial_condition_json(ic);
  j["options"] = {{"quad_tol", options.quad_tol}, {"gh_nodes", options.gh_nodes},
                  {"l_max", options.l_max},       {"seed", options.seed},
                  {"mc_paths", options.mc_paths}, {"mc_steps", options.mc_steps}};
  return j;
}

ProblemConfig ProblemConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(j, {"variant", "n", "a", "c", "lambda_max", "initial_condition", "options"},
               "config");
  ProblemConfig cfg;
  cfg.variant = variant_from_name(get_string(j, "variant", "config"));
  cfg.n = get_int(j, "n", "config");
  cfg.a_src = get_string(j, "a", "config");
  cfg.c_src = get_string(j, "c", "config");
  cfg.lambda_max = get_number(j, "lambda_max", "config");
  if (!j.contains("initial_condition"))
    throw ConfigError("missing key 'initial_condition' in config");
  cfg.ic = parse_initial_condition(j.at("initial_condition"));

  if (j.contains("options")) {
    const json& o = j.at("options");
    require_keys(o, {"quad_tol", "gh_nodes", "l_max", "seed", "mc_paths", "mc_steps"},
                 "options");
    if (o.contains("quad_tol")) cfg.options.quad_tol = get_number(o, "quad_tol", "options");
    if (o.contains("gh_nodes")) cfg.options.gh_nodes = get_int(o, "gh_nodes", "options");
    if (o.contains("l_max")) cfg.options.l_max = get_int(o, "l_max", "options");
    if (o.contains("seed")) {
      if (!o.at("seed").is_number_integer() || o.at("seed").get<long long>() < 0)
        throw ConfigError("key 'seed' in options must be a non-negative integer");
      cfg.options.seed = o.at("seed").get<std::uint64_t>();
    }
    if (o.contains("mc_paths")) cfg.options.mc_paths = get_int(o, "mc_paths", "options");
    if (o.contains("mc_steps")) cfg.options.mc_steps = get_int(o, "mc_steps", "options");
  }

  if (!(cfg.options.quad_tol > 0.0)) throw ConfigError("options.quad_tol must be positive");
  if (cfg.options.gh_nodes < 2) throw ConfigError("options.gh_nodes must be >= 2");
  if (cfg.options.l_max < 1) throw ConfigError("options.l_max must be positive");
  if (cfg.options.mc_paths < 2) throw ConfigError("options.mc_paths must be >= 2");
  if (cfg.options.mc_steps < 1) throw ConfigError("options.mc_steps must be positive");

  // Full domain validation: positivity sampling, dimension/data compatibility.
  CoefficientSpec spec = cfg.coefficient_spec();
  spec.validate();
  cfg.ic.validate_for(cfg.n, cfg.variant);
  return cfg;
}

ProblemConfig ProblemConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace cascade
