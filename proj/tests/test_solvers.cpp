#include <cmath>
#include <numbers>
#include <random>

#include "cascade/io.hpp"
#include "cascade/kernels.hpp"
#include "cascade/solvers.hpp"
#include "doctest.h"

using namespace cascade;

namespace {

CoefficientSpec make_spec(const std::string& a, const std::string& c, int n, Variant variant,
                          double lambda_max = 2.0) {
  return CoefficientSpec{Expression::parse(a), Expression::parse(c), n, variant, lambda_max};
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("lambda = 0 returns the initial data exactly") {
  const std::vector<double> v2 = {0.7, -1.2};
  const std::vector<double> v3 = {0.4, 0.9, -0.3};

  Solver deg(make_spec("1", "0.5", 2, Variant::degenerate),
             InitialCondition::radial_power(1.5));
  CHECK(deg.value(0.0, v2) == std::pow(norm(v2), 1.5));

  Solver iso(make_spec("1 + 0.5*sin(lambda)", "0.2*exp(-lambda)", 3, Variant::isotropic),
             InitialCondition::log_normal_radial(0.0, 1.0));
  CHECK(iso.value(0.0, v3) == log_normal_radial_density(LogNormalRadial{0.0, 1.0}, norm(v3), 3));

  Solver mono(make_spec("1", "0.5", 3, Variant::isotropic),
              InitialCondition::harmonic_monomial(1.0, 1, 2));
  CHECK(mono.value(0.0, v3) == InitialCondition::harmonic_monomial(1.0, 1, 2)(v3));
}

TEST_CASE("degenerate power-law data evolves by the closed-form factor") {
  // b0 = n a + (n^2 + n) c, b1 = a + (2n + 1) c; factor e^{(b0 + p b1 + p^2 c) lambda}
  const double a = 1.0, c = 0.5, lambda = 0.3;
  for (int n : {1, 2, 3, 5}) {
    auto spec = make_spec("1", "0.5", n, Variant::degenerate);
    const double b0 = n * a + (n * n + n) * c;
    const double b1 = a + (2 * n + 1) * c;
    std::vector<double> v = {0.8, -0.6, 1.1, 0.4, -0.2};
    v.resize(static_cast<std::size_t>(n));
    Solver solver(spec, InitialCondition::radial_power(2.0));
    for (double p : {0.5, 1.0, 2.0}) {
      Solver s(spec, InitialCondition::radial_power(p));
      const double expected = std::exp((b0 + p * b1 + p * p * c) * lambda) * std::pow(norm(v), p);
      CHECK(s.value(lambda, v) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("isotropic radial power-law data evolves by the closed-form factor") {
  const double a = 1.0, c = 0.5, lambda = 0.3;
  for (int n : {1, 2, 3}) {
    auto spec = make_spec("1", "0.5", n, Variant::isotropic);
    const double b0 = n * (a + 2 * c);
    const double b1 = a + 4 * c;
    std::vector<double> v = {0.8, -0.6, 1.1};
    v.resize(static_cast<std::size_t>(n));
    for (double p : {0.5, 1.0, 2.0}) {
      Solver s(spec, InitialCondition::radial_power(p));
      const double mu = p * (p + n - 2);
      const double expected =
          std::exp((b0 + p * b1) * lambda + c * lambda * mu) * std::pow(norm(v), p);
      CHECK(s.value(lambda, v) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("zonal data in higher dimensions evolves diagonally") {
  // phi = |v|^2 cos(theta1) in n = 5 is proportional to the l = 1 zonal mode
  const int n = 5;
  auto spec = make_spec("1", "0.5", n, Variant::isotropic);
  static const std::vector<std::string> kSph = {"v", "theta", "phi"};
  InitialCondition ic = InitialCondition::general_expression(
      Expression::parse("v^2 * cos(theta)", kSph), CoordsKind::spherical, 2.0);
  Solver solver(spec, ic);

  const double lambda = 0.4;
  const double a = 1.0, c = 0.5, p = 2.0;
  const double beta0 = n * (a + 2 * c) * lambda;
  const double beta1 = (a + 4 * c) * lambda;
  const double gamma = c * lambda;
  const double lam_l = sphere_eigenvalue(1, n);
  const double factor = std::exp(beta0 + p * beta1 + gamma * (p * (p + n - 2) + lam_l));

  for (auto v : {std::vector<double>{1.2, 0.3, -0.2, 0.5, 0.1},
                 std::vector<double>{-0.4, 0.8, 0.3, -0.6, 0.9}}) {
    CHECK(solver.isotropic(0.0, v) == doctest::Approx(ic(v)).epsilon(1e-12));
    CHECK(solver.isotropic(lambda, v) == doctest::Approx(factor * ic(v)).epsilon(1e-10));
  }
  // non-zonal structure is rejected for n >= 4
  CHECK_THROWS_AS(Solver(spec, InitialCondition::harmonic_monomial(1.0, 1, 2)), ConfigError);
}

TEST_CASE("n = 2 circle modes evolve diagonally") {
  auto spec = make_spec("1", "0.5", 2, Variant::isotropic);
  const double lambda = 0.3, a = 1.0, c = 0.5;
  for (auto [p, l, k] : {std::tuple{1.0, 2, 1}, {0.5, 3, 2}}) {
    InitialCondition ic = InitialCondition::harmonic_monomial(p, l, k);
    Solver solver(spec, ic);
    const double beta0 = 2 * (a + 2 * c) * lambda;
    const double beta1 = (a + 4 * c) * lambda;
    const double gamma = c * lambda;
    const double factor =
        std::exp(beta0 + p * beta1 + gamma * (p * p + sphere_eigenvalue(l, 2)));
    const std::vector<double> v = {0.7, -1.1};
    CHECK(solver.isotropic(lambda, v) == doctest::Approx(factor * ic(v)).epsilon(1e-11));
  }
}

TEST_CASE("harmonic modes evolve diagonally") {
  // phi = |v|^p Y_{l,k}: P = e^{beta0 + p beta1 + gamma (p (p + n - 2) + lambda_l)} phi
  auto spec = make_spec("1", "0.5", 3, Variant::isotropic);
  const double lambda = 0.4;
  const double beta0 = 6.0 * lambda, beta1 = 3.0 * lambda, gamma = 0.5 * lambda;
  const std::vector<double> v = {0.5, -1.1, 0.8};

  for (auto [p, l, k] : {std::tuple{0.5, 2, 4}, {2.0, 1, 1}, {1.0, 3, 6}}) {
    InitialCondition ic = InitialCondition::harmonic_monomial(p, l, k);
    Solver s(spec, ic);
    const double lam_l = sphere_eigenvalue(l, 3);
    const double factor = std::exp(beta0 + p * beta1 + gamma * (p * (p + 1.0) + lam_l));
    CHECK(s.isotropic(lambda, v) == doctest::Approx(factor * ic(v)).epsilon(1e-11));
  }
}

TEST_CASE("angular decay exactly cancels radial growth for p = 1, l = 1, n = 3") {
  auto spec = make_spec("1", "0.5", 3, Variant::isotropic);
  InitialCondition ic = InitialCondition::harmonic_monomial(1.0, 1, 2);
  Solver s(spec, ic);
  const double lambda = 0.3;
  const double beta0 = 6.0 * lambda, beta1 = 3.0 * lambda;
  const std::vector<double> v = {0.4, 0.2, 1.3};
  CHECK(s.isotropic(lambda, v) ==
        doctest::Approx(std::exp(beta0 + beta1) * ic(v)).epsilon(1e-12));
}

TEST_CASE("the n = 3 specialization agrees with the general path") {
  auto spec = make_spec("1 + 0.5*sin(lambda)", "0.2*exp(-lambda)", 3, Variant::isotropic);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  std::uniform_real_distribution<double> lam(0.05, 1.9);

  InitialCondition radial = InitialCondition::log_normal_radial(0.2, 0.8);
  InitialCondition mono = InitialCondition::harmonic_monomial(0.5, 2, 4);
  for (const auto& ic : {radial, mono}) {
    Solver s(spec, ic);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> v = {coord(rng), coord(rng), coord(rng)};
      if (norm(v) < 0.1) continue;
      const double lambda = lam(rng);
      const double general = s.isotropic(lambda, v);
      const double special = s.isotropic_n3(lambda, v);
      CHECK(std::abs(general - special) <= 1e-12 * (1.0 + std::abs(general)));
    }
  }
}

TEST_CASE("solutions are linear in the initial data") {
  auto spec = make_spec("1", "0.5", 3, Variant::isotropic);
  std::vector<SeriesMode> modes;
  modes.push_back({1, 2, Expression::parse("2.5*v", std::vector<std::string>{"v"})});
  modes.push_back({2, 4, Expression::parse("v^2", std::vector<std::string>{"v"})});
  Solver combined(spec, InitialCondition::harmonic_series(modes, 3.0));
  Solver part1(spec, InitialCondition::harmonic_monomial(1.0, 1, 2));
  Solver part2(spec, InitialCondition::harmonic_monomial(2.0, 2, 4));

  const std::vector<double> v = {0.9, 0.3, -0.7};
  for (double lambda : {0.0, 0.25, 0.8}) {
    const double whole = combined.isotropic(lambda, v);
    const double sum = 2.5 * part1.isotropic(lambda, v) + part2.isotropic(lambda, v);
    CHECK(whole == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("kernel actions commute with dilation at realized values") {
  auto rule = gauss_hermite(64);
  auto phi = [](std::span<const double> v) {
    double r = norm(v);
    return std::pow(r, 1.3) + v[0] * v[0];
  };
  const double gamma = 0.35, beta = 0.6;
  auto kernel_first = dilate(
      [&](std::span<const double> v) { return gaussian_log_average(phi, gamma, 0.0, rule, v); },
      beta);
  auto dilated_phi = dilate(phi, beta);
  auto dilation_first = [&](std::span<const double> v) {
    return gaussian_log_average(dilated_phi, gamma, 0.0, rule, v);
  };
  for (auto v : {std::vector<double>{0.4, 1.0}, std::vector<double>{2.0, -0.3}}) {
    const double a = kernel_first(v);
    const double b = dilation_first(v);
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("initial condition is recovered at the O(gamma) rate") {
  auto spec = make_spec("1", "0.5", 2, Variant::degenerate);
  InitialCondition ic = InitialCondition::log_normal_radial(0.0, 1.0);
  Solver s(spec, ic);
  auto sup_gap = [&](double lambda) {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 1.8}) {
      const std::vector<double> v = {r, 0.4 * r};
      worst = std::max(worst, std::abs(s.value(lambda, v) - ic(v)));
    }
    return worst;
  };
  const double e1 = sup_gap(0.02);
  const double e2 = sup_gap(0.01);
  CHECK(e1 < 0.05);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.35));  // first order in gamma ~ lambda
}

TEST_CASE("mass-conservation exponent identities hold") {
  for (const auto& [a, c] :
       {std::pair{std::string("1"), std::string("0.25")},
        std::pair{std::string("1 + 0.5*sin(lambda)"), std::string("0.2*exp(-lambda)")}}) {
    for (int n : {1, 2, 3}) {
      IntegratedCoefficients deg(make_spec(a, c, n, Variant::degenerate), 1e-12);
      IntegratedCoefficients iso(make_spec(a, c, n, Variant::isotropic), 1e-12);
      for (double lambda : {0.3, 1.0, 1.9}) {
        const double lhs_deg =
            deg.beta0(lambda) - n * deg.beta1(lambda) + n * n * deg.gamma(lambda);
        CHECK(std::abs(lhs_deg) <= 1e-10);
        const double lhs_iso = iso.beta0(lambda) - n * iso.beta1(lambda) -
                               n * (n - 2) * iso.gamma(lambda) + n * n * iso.gamma(lambda);
        CHECK(std::abs(lhs_iso) <= 1e-10);
      }
    }
  }
}

TEST_CASE("total mass is conserved for the log-normal density") {
  InitialCondition ic = InitialCondition::log_normal_radial(0.0, 1.0);
  Solver deg1(make_spec("1", "0.25", 1, Variant::degenerate), ic);
  Solver iso3(make_spec("1", "0.25", 3, Variant::isotropic), ic);
  for (double lambda : {0.1, 0.5, 1.0}) {
    CHECK(std::abs(radial_moment(deg1, 0.0, lambda) - 1.0) <= 1e-8);
    CHECK(std::abs(radial_moment(iso3, 0.0, lambda) - 1.0) <= 1e-8);
  }
  // moment factors against the analytic log-normal moments
  for (double p : {1.0, 2.0}) {
    const double direct = radial_moment(deg1, p, 0.5);
    const double analytic =
        moment_factor(deg1, p, 0.5) * log_normal_radial_moment(LogNormalRadial{0.0, 1.0}, p);
    CHECK(direct == doctest::Approx(analytic).epsilon(1e-9));
  }
}

TEST_CASE("positivity is preserved for nonnegative data") {
  InitialCondition ic = InitialCondition::log_normal_radial(0.1, 0.9);
  for (auto variant : {Variant::degenerate, Variant::isotropic}) {
    Solver s(make_spec("1", "0.4", 2, variant), ic);
    for (double lambda : {0.2, 1.0})
      for (double r : {0.3, 1.0, 3.0}) {
        const std::vector<double> v = {r * 0.6, -r * 0.8};
        CHECK(s.value(lambda, v) >= 0.0);
      }
  }
}

TEST_CASE("expression data is projected onto the harmonic basis") {
  // g(v) = v1 = sqrt(4 pi / 3) r Y_1^1 in the conventional axes
  auto spec = make_spec("1", "0.5", 3, Variant::isotropic);
  static const std::vector<std::string> kCart = {"v1", "v2", "v3"};
  InitialCondition expr_ic = InitialCondition::general_expression(
      Expression::parse("v1", kCart), CoordsKind::cartesian, 1.0);
  InitialCondition mono_ic = InitialCondition::harmonic_monomial(1.0, 1, 3);  // m = +1
  Solver via_projection(spec, expr_ic);
  Solver via_modes(spec, mono_ic);
  const double coeff = std::sqrt(4.0 * std::numbers::pi / 3.0);
  for (double lambda : {0.0, 0.3, 0.9}) {
    for (auto v : {std::vector<double>{1.0, 0.2, -0.4}, std::vector<double>{-0.5, 1.4, 0.6}}) {
      const double a = via_projection.isotropic(lambda, v);
      const double b = coeff * via_modes.isotropic(lambda, v);
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
  }
  CHECK(via_projection.tail_estimate() <= 1e-10);
}

TEST_CASE("field evaluation matches scalar evaluation and is thread-invariant") {
  auto spec = make_spec("1", "0.5", 2, Variant::degenerate);
  InitialCondition ic = InitialCondition::log_normal_radial(0.0, 1.0);
  const std::vector<double> lambdas = {0.0, 0.4, 1.1};
  std::vector<std::vector<double>> points;
  for (double r : {0.4, 1.0, 2.2})
    for (double t : {0.3, 2.1}) points.push_back({r * std::cos(t), r * std::sin(t)});

  SolveOptions serial;
  serial.threads = 1;
  Solver s_serial(spec, ic, serial);
  SolutionField f_serial = s_serial.evaluate_field(lambdas, points);

  SolveOptions parallel;
  parallel.threads = 0;
  Solver s_parallel(spec, ic, parallel);
  SolutionField f_parallel = s_parallel.evaluate_field(lambdas, points);

  CHECK(f_serial.values == f_parallel.values);  // bitwise identical
  CHECK(f_serial.abs_err_est == f_parallel.abs_err_est);

  for (std::size_t li = 0; li < lambdas.size(); ++li)
    for (std::size_t pi = 0; pi < points.size(); ++pi)
      CHECK(f_serial.value(li, pi) == s_serial.value(lambdas[li], points[pi]));

  CHECK(f_serial.beta0.size() == lambdas.size());
  CHECK(f_serial.gamma[0] == 0.0);
  CHECK(f_serial.gh_nodes == 64);
}

TEST_CASE("empty point lists are a valid field") {
  auto spec = make_spec("1", "0.5", 2, Variant::degenerate);
  Solver s(spec, InitialCondition::radial_power(1.0));
  SolutionField field = s.evaluate_field(std::vector<double>{0.5}, {});
  CHECK(field.values.empty());
  CHECK(field.points.empty());
}

TEST_CASE("the origin is defined by continuity and flagged") {
  auto spec = make_spec("1", "0.5", 2, Variant::degenerate);
  Solver s(spec, InitialCondition::radial_power(0.0));  // phi == 1
  const std::vector<double> lambdas = {0.7};
  SolutionField field = s.evaluate_field(lambdas, {{0.0, 0.0}, {1.0, 0.0}});
  CHECK(field.at_origin[0] == 1);
  CHECK(field.at_origin[1] == 0);
  // P(lambda, 0) = e^{beta0} phi(0)
  CHECK(field.value(0, 0) == doctest::Approx(std::exp(field.beta0[0])).epsilon(1e-12));
}

TEST_CASE("per-point failures are aggregated with indices") {
  static const std::vector<std::string> kCart = {"v1", "v2", "v3"};
  auto spec = make_spec("1", "0.1", 1, Variant::degenerate);
  InitialCondition ic = InitialCondition::general_expression(
      Expression::parse("log(v1)", kCart), CoordsKind::cartesian, 2.0);
  Solver s(spec, ic);
  try {
    s.evaluate_field(std::vector<double>{0.2}, {{-1.0}});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("point_index 0") != std::string::npos);
  }
}

TEST_CASE("l_max below the top harmonic degree of the data is an error") {
  auto spec = make_spec("1", "0.5", 3, Variant::isotropic);
  SolveOptions opts;
  opts.l_max = 2;
  try {
    Solver(spec, InitialCondition::harmonic_monomial(1.0, 3, 4), opts);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tail") != std::string::npos);
  }
  CHECK_NOTHROW(Solver(spec, InitialCondition::harmonic_monomial(1.0, 2, 4), opts));
}

TEST_CASE("growth beyond the exponent budget is rejected") {
  auto spec = make_spec("1", "1", 2, Variant::degenerate, 4.0);
  CHECK_THROWS_AS(Solver(spec, InitialCondition::radial_power(80.0)), NumericError);
}

TEST_CASE("dimension and domain violations are reported") {
  auto spec = make_spec("1", "0.5", 2, Variant::degenerate);
  Solver s(spec, InitialCondition::radial_power(1.0));
  CHECK_THROWS_AS(s.value(0.5, std::vector<double>{1.0, 2.0, 3.0}), ConfigError);
  CHECK_THROWS_AS(s.value(5.0, std::vector<double>{1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(s.value(-0.1, std::vector<double>{1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(s.isotropic(0.5, std::vector<double>{1.0, 0.0}), ConfigError);

  Solver iso2(make_spec("1", "0.5", 2, Variant::isotropic), InitialCondition::radial_power(1.0));
  CHECK_THROWS_AS(iso2.degenerate(0.5, std::vector<double>{1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(iso2.isotropic_n3(0.5, std::vector<double>{1.0, 0.0}), ConfigError);

  // n = 1 isotropic requires even data
  CHECK_THROWS_AS(Solver(make_spec("1", "0.5", 1, Variant::isotropic),
                         InitialCondition::harmonic_monomial(1.0, 1, 1)),
                  ConfigError);
}
