#include "cascade/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "cascade/quadrature.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;

long long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // exact at every step
  return c;
}

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

// Orthonormalized associated Legendre normalized P_l^m(cos theta) without the
// Condon-Shortley phase, by the stable normalized recurrence.
double normalized_plm(int l, int m, double x) {
  const double s2 = std::max(0.0, 1.0 - x * x);
  const double s = std::sqrt(s2);
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int q = 1; q <= m; ++q) pmm *= std::sqrt((2.0 * q + 1.0) / (2.0 * q)) * s;
  if (l == m) return pmm;
  double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int q = m + 2; q <= l; ++q) {
    double a = std::sqrt((4.0 * q * q - 1.0) / (static_cast<double>(q) * q - static_cast<double>(m) * m));
    double b = std::sqrt((static_cast<double>(q - 1) * (q - 1) - static_cast<double>(m) * m) /
                         (4.0 * static_cast<double>(q - 1) * (q - 1) - 1.0));
    p = a * (x * pm1 - b * pmm);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

}  // namespace

double sphere_eigenvalue(int l, int n) {
  if (l < 0 || n < 2) throw ConfigError("sphere_eigenvalue requires l >= 0, n >= 2");
  long long lam = -static_cast<long long>(l) * (l + n - 2);
  return static_cast<double>(lam);
}

long long degeneracy(int l, int n) {
  if (l < 0 || n < 2) throw ConfigError("degeneracy requires l >= 0, n >= 2");
  return binomial(n + l - 1, l) - binomial(n + l - 3, l - 2);
}

double eval_Y3(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw ConfigError("eval_Y3 requires l >= 0 and |m| <= l");
  const double x = std::cos(theta);
  const int am = std::abs(m);
  const double p = normalized_plm(l, am, x);
  if (m == 0) return p;
  const double sqrt2 = std::numbers::sqrt2;
  return m > 0 ? sqrt2 * p * std::cos(am * phi) : sqrt2 * p * std::sin(am * phi);
}

double sphere_area(int n) {
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double zonal_harmonic(int l, int n, double theta1) {
  if (l < 0 || n < 2) throw ConfigError("zonal_harmonic requires l >= 0, n >= 2");
  if (n == 2) {
    if (l == 0) return 1.0 / std::sqrt(2.0 * kPi);
    return std::cos(l * theta1) / std::sqrt(kPi);
  }
  const double x = std::cos(theta1);
  const double alpha = 0.5 * (n - 2);
  // Gegenbauer three-term recurrence.
  double c0 = 1.0, c1 = 2.0 * alpha * x;
  double c = l == 0 ? c0 : c1;
  for (int q = 2; q <= l; ++q) {
    c = (2.0 * x * (q + alpha - 1.0) * c1 - (q + 2.0 * alpha - 2.0) * c0) / q;
    c0 = c1;
    c1 = c;
  }
  // L2 norm of C_l^alpha under (1-x^2)^{alpha-1/2} on [-1,1].
  double log_h = std::log(kPi) + (1.0 - 2.0 * alpha) * std::log(2.0) + std::lgamma(l + 2.0 * alpha) -
                 std::log(l + alpha) - 2.0 * std::lgamma(alpha) - std::lgamma(l + 1.0);
  double norm2 = sphere_area(n - 1) * std::exp(log_h);
  return c / std::sqrt(norm2);
}

std::vector<double> SphericalPoint::to_cartesian() const {
  const int n = static_cast<int>(angles.size()) + 1;
  std::vector<double> v(static_cast<std::size_t>(n));
  double sin_prod = radius;
  for (int i = 0; i < n - 1; ++i) {
    v[i] = sin_prod * std::cos(angles[i]);
    sin_prod *= std::sin(angles[i]);
  }
  v[n - 1] = sin_prod;
  return v;
}

SphericalPoint SphericalPoint::from_cartesian(std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  if (n < 2) throw ConfigError("from_cartesian requires n >= 2");
  SphericalPoint p;
  p.angles.resize(static_cast<std::size_t>(n - 1));
  double tail = 0.0;  // running sum of squares of trailing coordinates
  for (int i = n - 1; i >= 1; --i) {
    if (i == n - 1) {
      double phi = std::atan2(v[n - 1], v[n - 2]);
      if (phi < 0.0) phi += 2.0 * kPi;
      p.angles[i - 1] = phi;
      tail = v[n - 1] * v[n - 1] + v[n - 2] * v[n - 2];
    } else {
      p.angles[i - 1] = std::atan2(std::sqrt(tail), v[i - 1]);
      tail += v[i - 1] * v[i - 1];
    }
  }
  p.radius = std::sqrt(tail);
  return p;
}

HarmonicMode make_mode(int l, int k, int n) {
  if (l < 0 || n < 2) throw ConfigError("harmonic mode requires l >= 0, n >= 2");
  long long d = degeneracy(l, n);
  if (k < 1 || k > d)
    throw ConfigError("harmonic mode index k = " + std::to_string(k) + " outside [1, " +
                      std::to_string(d) + "] for l = " + std::to_string(l) +
                      ", n = " + std::to_string(n));
  return HarmonicMode{l, k, n, sphere_eigenvalue(l, n), d};
}

double eval_mode(const HarmonicMode& mode, std::span<const double> direction) {
  const int n = mode.n;
  if (static_cast<int>(direction.size()) != n)
    throw ConfigError("direction dimension does not match mode dimension");
  if (n == 2) {
    double theta = std::atan2(direction[1], direction[0]);
    if (mode.l == 0) return 1.0 / std::sqrt(2.0 * kPi);
    double arg = mode.l * theta;
    return (mode.k == 1 ? std::cos(arg) : std::sin(arg)) / std::sqrt(kPi);
  }
  if (n == 3) {
    double theta = std::acos(clamp1(direction[2]));
    double phi = std::atan2(direction[1], direction[0]);
    return eval_Y3(mode.l, mode.k - mode.l - 1, theta, phi);
  }
  if (mode.k != 1)
    throw ConfigError("only the zonal mode (k = 1) is supported for n >= 4");
  return zonal_harmonic(mode.l, n, std::acos(clamp1(direction[0])));
}

SphereQuadrature sphere_quadrature(int n, int order) {
  if (n < 2 || order < 0) throw ConfigError("sphere_quadrature requires n >= 2, order >= 0");
  SphereQuadrature q;
  q.order = order;
  if (n == 2) {
    const int m = order + 1;
    for (int j = 0; j < m; ++j) {
      SphericalPoint p;
      p.radius = 1.0;
      p.angles = {2.0 * kPi * j / m};
      q.points.push_back(std::move(p));
      q.weights.push_back(2.0 * kPi / m);
    }
  } else if (n == 3) {
    const int nq = order / 2 + 1;
    const int m = order + 1;
    GaussRule gl = gauss_legendre(nq);
    for (int i = 0; i < nq; ++i) {
      const double theta1 = std::acos(clamp1(gl.nodes[i]));
      for (int j = 0; j < m; ++j) {
        SphericalPoint p;
        p.radius = 1.0;
        p.angles = {theta1, 2.0 * kPi * j / m};
        q.points.push_back(std::move(p));
        q.weights.push_back(gl.weights[i] * 2.0 * kPi / m);
      }
    }
  } else {
    // Zonal-only rule: Gauss-Jacobi in cos(theta1) against the zonal surface
    // measure; remaining angles integrate to the area of S^{n-2}.
    const int nq = order / 2 + 1;
    GaussRule gj = gauss_jacobi_symmetric(nq, 0.5 * (n - 3));
    const double shell = sphere_area(n - 1);
    for (int i = 0; i < nq; ++i) {
      SphericalPoint p;
      p.radius = 1.0;
      p.angles.assign(static_cast<std::size_t>(n - 1), 0.0);
      p.angles[0] = std::acos(clamp1(gj.nodes[i]));
      q.points.push_back(std::move(p));
      q.weights.push_back(gj.weights[i] * shell);
    }
    q.zonal_only = true;
  }
  q.directions.reserve(q.points.size());
  for (const auto& p : q.points) q.directions.push_back(p.to_cartesian());
  return q;
}

namespace {

std::vector<HarmonicMode> supported_modes(int n, int l_max) {
  std::vector<HarmonicMode> modes;
  for (int l = 0; l <= l_max; ++l) {
    if (n >= 4) {
      modes.push_back(make_mode(l, 1, n));
    } else {
      long long d = degeneracy(l, n);
      for (int k = 1; k <= d; ++k) modes.push_back(make_mode(l, k, n));
    }
  }
  return modes;
}

}  // namespace

HarmonicExpansion project(const std::function<double(std::span<const double>)>& g, int n,
                          int l_max, std::span<const double> radii, int order) {
  if (l_max < 0) throw ConfigError("project requires l_max >= 0");
  if (order >= 0 && order < 2 * l_max)
    throw ConfigError("sphere quadrature order " + std::to_string(order) +
                      " insufficient for l_max = " + std::to_string(l_max) +
                      " (need order >= " + std::to_string(2 * l_max) + ")");
  if (order < 0) order = 2 * l_max + 2;

  auto quad = std::make_shared<SphereQuadrature>(sphere_quadrature(n, order));
  auto modes = supported_modes(n, l_max);
  const std::size_t np = quad->points.size();

  // Basis values at the quadrature nodes, one row per mode.
  auto basis = std::make_shared<std::vector<std::vector<double>>>();
  basis->reserve(modes.size());
  for (const auto& mode : modes) {
    std::vector<double> row(np);
    for (std::size_t i = 0; i < np; ++i) row[i] = eval_mode(mode, quad->directions[i]);
    basis->push_back(std::move(row));
  }

  HarmonicExpansion expansion;
  expansion.l_max = l_max;
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    ExpansionTerm term;
    term.mode = modes[mi];
    term.radial = [g, quad, basis, mi](double r) {
      const auto& row = (*basis)[mi];
      double acc = 0.0;
      std::vector<double> v(quad->directions[0].size());
      for (std::size_t i = 0; i < quad->points.size(); ++i) {
        for (std::size_t d = 0; d < v.size(); ++d) v[d] = r * quad->directions[i][d];
        acc += quad->weights[i] * row[i] * g(v);
      }
      return acc;
    };
    expansion.terms.push_back(std::move(term));
  }

  // Tail: worst residual L2 norm of g minus its truncation over the radii.
  double tail = 0.0;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double r : radii) {
    std::vector<double> coeff(modes.size());
    for (std::size_t mi = 0; mi < modes.size(); ++mi) coeff[mi] = expansion.terms[mi].radial(r);
    double resid2 = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t d = 0; d < v.size(); ++d) v[d] = r * quad->directions[i][d];
      double recon = 0.0;
      for (std::size_t mi = 0; mi < modes.size(); ++mi) recon += coeff[mi] * (*basis)[mi][i];
      double diff = g(v) - recon;
      resid2 += quad->weights[i] * diff * diff;
    }
    tail = std::max(tail, std::sqrt(std::max(0.0, resid2)));
  }
  expansion.tail_estimate = tail;
  return expansion;
}

}  // namespace cascade
