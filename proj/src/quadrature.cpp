#include "cascade/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,  //
    0.949107912342758524526189684047851,  //
    0.864864423359769072789712788640926,  //
    0.741531185599394439863864773280788,  //
    0.586087235467691130294144838258730,  //
    0.405845151377397166906606412076961,  //
    0.207784955007898467600689403773245,  //
    0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,  //
    0.063092092629978553290700663189204,  //
    0.104790010322250183839876322541518,  //
    0.140653259715525918745189590510238,  //
    0.169004726639267902826583426598550,  //
    0.190350578064785409913256402421014,  //
    0.204432940075298892414161999234649,  //
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,  // at +-kXgk[1]
    0.279705391489276667901467771423780,  // at +-kXgk[3]
    0.381830050505118944950369775488975,  // at +-kXgk[5]
    0.417959183673469387755102040816327};  // at 0

// One G7/K15 evaluation of f on [a, b]; returns the Kronrod value and |K-G|.
void kronrod15(const std::function<double(double)>& f, double a, double b, double& kronrod,
               double& err) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[i] * fsum;
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  const double fc = f(center);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  kronrod = resk * half;
  err = std::abs((resk - resg) * half);
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           int max_depth, QuadratureResult& acc) {
  double k, err;
  kronrod15(f, a, b, k, err);
  acc.evaluations += 15;
  if (err <= tol || depth >= max_depth) {
    acc.value += k;
    acc.abs_error += err;
    if (err > tol) acc.converged = false;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
  adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth) {
  QuadratureResult acc;
  if (a == b) return acc;
  adapt(f, a, b, abs_tol, 0, max_depth, acc);
  return acc;
}

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, weights are
// mu0 times the squared first eigenvector components. `d` holds the diagonal,
// `e` the off-diagonals (e[i] couples i-1 and i, e[0] unused). Implicit-shift
// QL on the tridiagonal, tracking only the first row of the transform.
GaussRule golub_welsch(std::vector<double> d, std::vector<double> e, double mu0) {
  const int m = static_cast<int>(d.size());
  std::vector<double> z(static_cast<std::size_t>(m), 0.0);
  z[0] = 1.0;
  if (m > 0) e.push_back(0.0);

  for (int l = 0; l < m; ++l) {
    int iter = 0;
    int mm;
    do {
      for (mm = l; mm < m - 1; ++mm) {
        double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm + 1]) <= 1e-300 + 1e-16 * dd) break;
      }
      if (mm != l) {
        if (iter++ == 60) throw NumericError("quadrature rule eigensolve failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l + 1]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l + 1] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool aborted = false;
        for (int i = mm - 1; i >= l; --i) {
          double fv = s * e[i + 1];
          double bv = c * e[i + 1];
          r = std::hypot(fv, g);
          e[i + 2] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm + 1] = 0.0;
            aborted = true;
            break;
          }
          s = fv / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * bv;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bv;
          double zi1 = z[i + 1], zi = z[i];
          z[i + 1] = s * zi + c * zi1;
          z[i] = c * zi - s * zi1;
        }
        if (aborted) continue;
        d[l] -= p;
        e[l + 1] = g;
        e[mm + 1] = 0.0;
      }
    } while (mm != l);
  }

  std::vector<int> order(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = d[order[i]];
    rule.weights[i] = mu0 * z[order[i]] * z[order[i]];
  }
  return rule;
}

// Enforce exact +-pair symmetry for rules with even weight functions.
void symmetrize(GaussRule& rule) {
  const int m = static_cast<int>(rule.nodes.size());
  for (int i = 0; i < m / 2; ++i) {
    int j = m - 1 - i;
    double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
}

}  // namespace

GaussRule gauss_legendre(int m) {
  if (m < 1) throw NumericError("gauss_legendre requires m >= 1");
  std::vector<double> d(static_cast<std::size_t>(m), 0.0);
  std::vector<double> e(static_cast<std::size_t>(m), 0.0);
  for (int k = 1; k < m; ++k) e[k] = k / std::sqrt(4.0 * k * k - 1.0);
  GaussRule rule = golub_welsch(std::move(d), std::move(e), 2.0);
  symmetrize(rule);
  return rule;
}

GaussRule gauss_jacobi_symmetric(int m, double alpha) {
  if (m < 1) throw NumericError("gauss_jacobi_symmetric requires m >= 1");
  if (alpha <= -1.0) throw NumericError("gauss_jacobi_symmetric requires alpha > -1");
  std::vector<double> d(static_cast<std::size_t>(m), 0.0);
  std::vector<double> e(static_cast<std::size_t>(m), 0.0);
  for (int k = 1; k < m; ++k) {
    double t = 2.0 * k + 2.0 * alpha;
    e[k] = std::sqrt(k * (k + 2.0 * alpha) / (t * t - 1.0));
  }
  // mu0 = int_{-1}^{1} (1-x^2)^alpha dx = sqrt(pi) Gamma(alpha+1) / Gamma(alpha+3/2)
  double mu0 = std::sqrt(std::numbers::pi) *
               std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
  GaussRule rule = golub_welsch(std::move(d), std::move(e), mu0);
  symmetrize(rule);
  return rule;
}

GaussHermiteRule gauss_hermite(int m) {
  if (m < 1) throw NumericError("gauss_hermite requires m >= 1");
  std::vector<double> d(static_cast<std::size_t>(m), 0.0);
  std::vector<double> e(static_cast<std::size_t>(m), 0.0);
  for (int k = 1; k < m; ++k) e[k] = std::sqrt(0.5 * k);
  GaussRule rule = golub_welsch(std::move(d), std::move(e), std::sqrt(std::numbers::pi));
  symmetrize(rule);
  return GaussHermiteRule{std::move(rule.nodes), std::move(rule.weights)};
}

}  // namespace cascade
