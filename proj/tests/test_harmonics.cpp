#include <cmath>
#include <numbers>
#include <random>

#include "cascade/harmonics.hpp"
#include "cascade/oracle.hpp"
#include "doctest.h"

using namespace cascade;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sphere eigenvalues") {
  CHECK(sphere_eigenvalue(0, 2) == 0.0);
  CHECK(sphere_eigenvalue(0, 5) == 0.0);
  CHECK(sphere_eigenvalue(2, 3) == -6.0);
  CHECK(sphere_eigenvalue(1, 4) == -3.0);
  CHECK(sphere_eigenvalue(3, 2) == -9.0);
}

TEST_CASE("degeneracy formula") {
  for (int n = 2; n <= 6; ++n) CHECK(degeneracy(0, n) == 1);
  CHECK(degeneracy(3, 3) == 7);
  CHECK(degeneracy(2, 4) == 9);
  for (int l = 0; l <= 8; ++l) CHECK(degeneracy(l, 3) == 2 * l + 1);
  CHECK(degeneracy(1, 2) == 2);
  CHECK(degeneracy(5, 2) == 2);
}

TEST_CASE("degeneracy equals the brute-force harmonic dimension") {
  for (int n = 2; n <= 6; ++n)
    for (int l = 0; l <= 8; ++l) CHECK(degeneracy(l, n) == oracle::harmonic_dimension(l, n));
}

TEST_CASE("explicit n = 3 harmonics") {
  CHECK(eval_Y3(0, 0, 0.7, 1.3) == doctest::Approx(0.28209479177387814).epsilon(1e-12));
  CHECK(eval_Y3(1, 0, 0.0, 0.0) == doctest::Approx(0.4886025119029199).epsilon(1e-12));
  CHECK(eval_Y3(1, 0, kPi / 2, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(eval_Y3(1, 2, 0.0, 0.0), ConfigError);

  // orthogonality of Y_2^1 and Y_1^1 under the surface measure
  auto quad = sphere_quadrature(3, 10);
  double inner = 0.0;
  for (std::size_t i = 0; i < quad.points.size(); ++i) {
    const auto& u = quad.directions[i];
    const double theta = std::acos(u[2]);
    const double phi = std::atan2(u[1], u[0]);
    inner += quad.weights[i] * eval_Y3(2, 1, theta, phi) * eval_Y3(1, 1, theta, phi);
  }
  CHECK(std::abs(inner) <= 1e-12);
}

TEST_CASE("Gram matrix of Y_l^m is the identity up to l_max = 8") {
  const int l_max = 8;
  auto quad = sphere_quadrature(3, 2 * l_max + 2);
  std::vector<std::pair<int, int>> modes;
  for (int l = 0; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) modes.emplace_back(l, m);

  std::vector<std::vector<double>> vals(modes.size(),
                                        std::vector<double>(quad.points.size()));
  for (std::size_t a = 0; a < modes.size(); ++a) {
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
      const auto& u = quad.directions[i];
      vals[a][i] = eval_Y3(modes[a].first, modes[a].second,
                           std::acos(std::clamp(u[2], -1.0, 1.0)), std::atan2(u[1], u[0]));
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < modes.size(); ++a)
    for (std::size_t b = a; b < modes.size(); ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < quad.points.size(); ++i)
        g += quad.weights[i] * vals[a][i] * vals[b][i];
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("zonal harmonics are orthonormal for higher n") {
  for (int n : {2, 3, 4, 5, 6}) {
    auto quad = sphere_quadrature(n, 16);
    double worst = 0.0;
    for (int la = 0; la <= 6; ++la)
      for (int lb = la; lb <= 6; ++lb) {
        double g = 0.0;
        for (std::size_t i = 0; i < quad.points.size(); ++i) {
          // zonal angle about the first axis
          const double theta = std::acos(std::clamp(quad.directions[i][0], -1.0, 1.0));
          g += quad.weights[i] * zonal_harmonic(la, n, theta) * zonal_harmonic(lb, n, theta);
        }
        worst = std::max(worst, std::abs(g - (la == lb ? 1.0 : 0.0)));
      }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("zonal n = 3 harmonic equals Y_l^0") {
  for (int l : {0, 1, 2, 5}) {
    for (double theta : {0.2, 1.1, 2.6}) {
      CHECK(zonal_harmonic(l, 3, theta) ==
            doctest::Approx(eval_Y3(l, 0, theta, 0.4)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sphere quadrature weights sum to the surface area") {
  auto q3 = sphere_quadrature(3, 8);
  double w3 = 0.0;
  for (double w : q3.weights) w3 += w;
  CHECK(w3 == doctest::Approx(4.0 * kPi).epsilon(1e-12));

  auto q2 = sphere_quadrature(2, 8);
  double w2 = 0.0, cos2 = 0.0;
  for (std::size_t i = 0; i < q2.points.size(); ++i) {
    w2 += q2.weights[i];
    cos2 += q2.weights[i] * std::pow(std::cos(q2.points[i].angles[0]), 2);
  }
  CHECK(w2 == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(cos2 == doctest::Approx(kPi).epsilon(1e-12));  // integral of cos^2

  // zonal rules for n >= 4 against the closed-form area 2 pi^{n/2} / Gamma(n/2)
  for (int n : {4, 5, 6}) {
    auto qz = sphere_quadrature(n, 12);
    CHECK(qz.zonal_only);
    double w = 0.0;
    for (double x : qz.weights) w += x;
    CHECK(w == doctest::Approx(sphere_area(n)).epsilon(1e-12));
  }
  CHECK(sphere_area(5) == doctest::Approx(8.0 * kPi * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("sphere quadrature integrates polynomials exactly") {
  // n = 3: monomial moments of the unit sphere
  auto quad = sphere_quadrature(3, 6);
  double x4 = 0.0, x2y2 = 0.0, x3 = 0.0;
  for (std::size_t i = 0; i < quad.points.size(); ++i) {
    const auto& u = quad.directions[i];
    x4 += quad.weights[i] * u[0] * u[0] * u[0] * u[0];
    x2y2 += quad.weights[i] * u[0] * u[0] * u[1] * u[1];
    x3 += quad.weights[i] * u[0] * u[0] * u[0];
  }
  CHECK(x4 == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-13));
  CHECK(x2y2 == doctest::Approx(4.0 * kPi / 15.0).epsilon(1e-13));
  CHECK(std::abs(x3) <= 1e-13);

  // zonal n = 5: moments of cos(theta1) against the zonal surface measure
  auto zonal = sphere_quadrature(5, 8);
  double c2 = 0.0, c4 = 0.0;
  for (std::size_t i = 0; i < zonal.points.size(); ++i) {
    const double c = zonal.directions[i][0];
    c2 += zonal.weights[i] * c * c;
    c4 += zonal.weights[i] * c * c * c * c;
  }
  // area(S^4) = 8 pi^2 / 3; moments 1/5 and 3/35 of it
  CHECK(c2 == doctest::Approx(8.0 * kPi * kPi / 15.0).epsilon(1e-13));
  CHECK(c4 == doctest::Approx(8.0 * kPi * kPi / 35.0).epsilon(1e-13));
}

TEST_CASE("hyperspherical coordinates round trip") {
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  for (int n : {2, 3, 4, 5, 6}) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = normal(rng);
      auto sp = SphericalPoint::from_cartesian(v);
      for (double a : std::span(sp.angles).first(sp.angles.size() - 1)) {
        CHECK(a >= 0.0);
        CHECK(a <= kPi);
      }
      CHECK(sp.angles.back() >= 0.0);
      CHECK(sp.angles.back() < 2.0 * kPi);
      auto back = sp.to_cartesian();
      for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("projection recovers known expansions") {
  const std::vector<double> radii = {0.5, 1.0, 2.0};

  // constant: only the l = 0 coefficient survives
  auto constant = [](std::span<const double>) { return 2.5; };
  auto exp_const = project(constant, 3, 4, radii);
  for (const auto& term : exp_const.terms) {
    const double c = term.radial(1.0);
    if (term.mode.l == 0)
      CHECK(c == doctest::Approx(2.5 * std::sqrt(4.0 * kPi)).epsilon(1e-12));
    else
      CHECK(std::abs(c) <= 1e-12);
  }
  CHECK(exp_const.tail_estimate <= 1e-10);

  // g(v) = v3 is the single (l = 1, m = 0) mode with coefficient r sqrt(4 pi / 3)
  auto g3 = [](std::span<const double> v) { return v[2]; };
  auto exp_v3 = project(g3, 3, 3, radii);
  for (const auto& term : exp_v3.terms) {
    for (double r : radii) {
      const double c = term.radial(r);
      if (term.mode.l == 1 && term.mode.k == 2)  // k = m + l + 1, m = 0
        CHECK(c == doctest::Approx(r * std::sqrt(4.0 * kPi / 3.0)).epsilon(1e-11));
      else
        CHECK(std::abs(c) <= 1e-10);
    }
  }

  // projecting a basis function returns a unit coefficient
  auto y21 = [](std::span<const double> v) {
    double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return eval_Y3(2, 1, std::acos(v[2] / r), std::atan2(v[1], v[0]));
  };
  const std::vector<double> unit_radius = {1.0};
  auto exp_y = project(y21, 3, 4, unit_radius);
  for (const auto& term : exp_y.terms) {
    const double c = term.radial(1.0);
    if (term.mode.l == 2 && term.mode.k == 4)  // m = 1
      CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
    else
      CHECK(std::abs(c) <= 1e-10);
  }
  CHECK(exp_y.tail_estimate <= 1e-10);
}

TEST_CASE("projection rejects an insufficient explicit order") {
  auto g = [](std::span<const double>) { return 1.0; };
  const std::vector<double> r1 = {1.0};
  CHECK_THROWS_AS(project(g, 3, 8, r1, 10), ConfigError);
  CHECK_NOTHROW(project(g, 3, 4, r1, 10));
}

TEST_CASE("Parseval partial sum is bounded by the sphere norm") {
  auto g = [](std::span<const double> v) {
    return 1.0 + v[0] + 0.5 * v[1] * v[2] + 0.2 * v[2] * v[2] * v[2];
  };
  const double r = 1.3;
  const std::vector<double> radius = {r};
  auto expansion = project(g, 3, 5, radius);
  double sum2 = 0.0;
  for (const auto& term : expansion.terms) sum2 += std::pow(term.radial(r), 2);

  auto quad = sphere_quadrature(3, 14);
  double norm2 = 0.0;
  std::vector<double> w(3);
  for (std::size_t i = 0; i < quad.points.size(); ++i) {
    for (int d = 0; d < 3; ++d) w[d] = r * quad.directions[i][d];
    norm2 += quad.weights[i] * g(w) * g(w);
  }
  CHECK(sum2 <= norm2 + 1e-10);
}

TEST_CASE("angular finite differences reproduce the eigenvalue relation") {
  // (1/sin t) d/dt (sin t dY/dt) + (1/sin^2 t) d^2 Y/dphi^2 = lambda_l Y
  const double h = 1e-4;
  for (int l : {1, 2, 3}) {
    for (int m : {0, 1, -l}) {
      const double theta = 1.1, phi = 0.7;
      auto Y = [&](double t, double p) { return eval_Y3(l, m, t, p); };
      const double dtheta_p = (Y(theta + h, phi) - Y(theta - h, phi)) / (2.0 * h);
      const double lap_theta =
          (std::sin(theta + 0.5 * h) * (Y(theta + h, phi) - Y(theta, phi)) -
           std::sin(theta - 0.5 * h) * (Y(theta, phi) - Y(theta - h, phi))) /
          (h * h * std::sin(theta));
      (void)dtheta_p;
      const double lap_phi = (Y(theta, phi + h) - 2.0 * Y(theta, phi) + Y(theta, phi - h)) /
                             (h * h * std::sin(theta) * std::sin(theta));
      const double applied = lap_theta + lap_phi;
      const double expected = sphere_eigenvalue(l, 3) * Y(theta, phi);
      CHECK(std::abs(applied - expected) <= 1e-5 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("Cartesian Laplacian splits into radial and angular parts") {
  // smooth test function, n = 3
  auto f = [](std::span<const double> v) {
    return v[0] * v[0] * v[1] + 0.3 * v[2] + 0.1 * v[0] * v[1] * v[2];
  };
  const std::vector<double> v = {0.9, -0.4, 0.7};
  const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const double h = 1e-4;

  // full Cartesian FD Laplacian
  double lap = 0.0;
  std::vector<double> w = v;
  for (int i = 0; i < 3; ++i) {
    w[i] = v[i] + h;
    const double fp = f(w);
    w[i] = v[i] - h;
    const double fm = f(w);
    w[i] = v[i];
    lap += (fp - 2.0 * f(v) + fm) / (h * h);
  }

  // radial part d^2/dr^2 + (2/r) d/dr along the ray
  auto along = [&](double s) {
    std::vector<double> u = {v[0] * s / r, v[1] * s / r, v[2] * s / r};
    return f(u);
  };
  const double d2r = (along(r + h) - 2.0 * along(r) + along(r - h)) / (h * h);
  const double d1r = (along(r + h) - along(r - h)) / (2.0 * h);
  const double radial = d2r + 2.0 / r * d1r;

  // angular part via the lat-long operator at fixed radius
  const double theta = std::acos(v[2] / r), phi = std::atan2(v[1], v[0]);
  auto on_sphere = [&](double t, double p) {
    std::vector<double> u = {r * std::sin(t) * std::cos(p), r * std::sin(t) * std::sin(p),
                             r * std::cos(t)};
    return f(u);
  };
  const double lap_theta =
      (std::sin(theta + 0.5 * h) * (on_sphere(theta + h, phi) - on_sphere(theta, phi)) -
       std::sin(theta - 0.5 * h) * (on_sphere(theta, phi) - on_sphere(theta - h, phi))) /
      (h * h * std::sin(theta));
  const double lap_phi =
      (on_sphere(theta, phi + h) - 2.0 * on_sphere(theta, phi) + on_sphere(theta, phi - h)) /
      (h * h * std::sin(theta) * std::sin(theta));
  const double angular = lap_theta + lap_phi;

  CHECK(lap == doctest::Approx(radial + angular / (r * r)).epsilon(1e-5));
}

TEST_CASE("mode construction validates the index range") {
  CHECK_THROWS_AS(make_mode(2, 6, 3), ConfigError);  // d_{2,3} = 5
  CHECK_THROWS_AS(make_mode(1, 0, 3), ConfigError);
  auto mode = make_mode(2, 5, 3);
  CHECK(mode.eigenvalue == -6.0);
  CHECK(mode.degeneracy == 5);
  CHECK_THROWS_AS(eval_mode(make_mode(2, 2, 5), std::vector<double>{1, 0, 0, 0, 0}), ConfigError);
}
