#include "cascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cascade/parallel.hpp"
#include "cascade/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade::oracle {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Centered first and second differences of f around v with per-axis step h.
struct SpatialDerivatives {
  double center = 0.0;
  std::vector<double> grad;
  std::vector<double> second;               // pure second derivatives
  std::vector<std::vector<double>> mixed;   // full Hessian (filled on demand)
};

SpatialDerivatives spatial_derivatives(const PointFunction& f, std::span<const double> v, double h,
                                       bool need_mixed) {
  const std::size_t n = v.size();
  SpatialDerivatives d;
  d.center = f(v);
  d.grad.resize(n);
  d.second.resize(n);
  std::vector<double> w(v.begin(), v.end());
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = v[i] + h;
    const double fp = f(w);
    w[i] = v[i] - h;
    const double fm = f(w);
    w[i] = v[i];
    d.grad[i] = (fp - fm) / (2.0 * h);
    d.second[i] = (fp - 2.0 * d.center + fm) / (h * h);
  }
  if (need_mixed) {
    d.mixed.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      d.mixed[i][i] = d.second[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        w[i] = v[i] + h;
        w[j] = v[j] + h;
        const double fpp = f(w);
        w[j] = v[j] - h;
        const double fpm = f(w);
        w[i] = v[i] - h;
        const double fmm = f(w);
        w[j] = v[j] + h;
        const double fmp = f(w);
        w[i] = v[i];
        w[j] = v[j];
        d.mixed[i][j] = d.mixed[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      }
    }
  }
  return d;
}

double expanded_rhs_from_derivatives(const CoefficientSpec& spec, double lambda,
                                     std::span<const double> v, const SpatialDerivatives& d) {
  CoefficientMap map = map_coefficients(spec);
  const double b0 = map.b0(lambda);
  const double b1 = map.b1(lambda);
  const double c = map.c(lambda);
  double vgrad = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) vgrad += v[i] * d.grad[i];
  if (spec.variant == Variant::isotropic) {
    double lap = 0.0, r2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      lap += d.second[i];
      r2 += v[i] * v[i];
    }
    return b0 * d.center + b1 * vgrad + c * r2 * lap;
  }
  double vhv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) vhv += v[i] * v[j] * d.mixed[i][j];
  return b0 * d.center + b1 * vgrad + c * (vgrad + vhv);
}

}  // namespace

ResidualReport residual_check(const FieldEvaluator& P, const CoefficientSpec& spec,
                              std::span<const ResidualSample> samples,
                              std::span<const double> steps) {
  if (samples.empty() || steps.empty())
    throw ConfigError("residual_check requires samples and steps");
  ResidualReport report;
  report.samples.assign(samples.begin(), samples.end());
  const bool need_mixed = spec.variant == Variant::degenerate;

  for (double step : steps) {
    ResidualStepReport sr;
    sr.step = step;
    std::vector<double> residuals;
    for (const auto& sample : samples) {
      const double r = norm(sample.v);
      if (r <= 0.0) throw ConfigError("residual samples must be bounded away from v = 0");
      const double h_l = step;
      const double h_v = step * r;
      if (sample.lambda - h_l < 0.0)
        throw ConfigError("residual stencil leaves lambda >= 0");
      if (sample.lambda + h_l > spec.lambda_max)
        throw ConfigError("residual stencil leaves [0, lambda_max]");

      const double dpdl =
          (P(sample.lambda + h_l, sample.v) - P(sample.lambda - h_l, sample.v)) / (2.0 * h_l);
      auto f = [&](std::span<const double> w) { return P(sample.lambda, w); };
      SpatialDerivatives d = spatial_derivatives(f, sample.v, h_v, need_mixed);
      const double rhs = expanded_rhs_from_derivatives(spec, sample.lambda, sample.v, d);
      residuals.push_back(dpdl - rhs);
    }
    double max_abs = 0.0, sq = 0.0;
    for (double r : residuals) {
      max_abs = std::max(max_abs, std::abs(r));
      sq += r * r;
    }
    sr.max_abs = max_abs;
    sr.rms = std::sqrt(sq / residuals.size());
    report.steps.push_back(sr);
    report.residuals = std::move(residuals);
  }

  if (report.steps.size() >= 2) {
    const auto& first = report.steps.front();
    const auto& last = report.steps.back();
    if (last.max_abs > 0.0 && first.step != last.step)
      report.order_estimate =
          std::log(first.max_abs / last.max_abs) / std::log(first.step / last.step);
  }
  return report;
}

double rhs_divergence_form(const CoefficientSpec& spec, const PointFunction& f, double lambda,
                           std::span<const double> v, double h) {
  const std::size_t n = v.size();
  const double a = spec.a.eval(lambda);
  const double c = spec.c.eval(lambda);

  // -div(D1 f) with D1 = -a v: a * sum_i d_i(v_i f)
  auto drift_component = [&](std::span<const double> w, std::size_t i) { return w[i] * f(w); };
  std::vector<double> w(v.begin(), v.end());
  double drift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = v[i] + h;
    const double gp = drift_component(w, i);
    w[i] = v[i] - h;
    const double gm = drift_component(w, i);
    w[i] = v[i];
    drift += (gp - gm) / (2.0 * h);
  }
  drift *= a;

  double diffusion = 0.0;
  if (spec.variant == Variant::isotropic) {
    // sum_i d_i^2 (c |v|^2 f)
    auto g = [&](std::span<const double> u) {
      double r2 = 0.0;
      for (double x : u) r2 += x * x;
      return r2 * f(u);
    };
    const double gc = g(v);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i] + h;
      const double gp = g(w);
      w[i] = v[i] - h;
      const double gm = g(w);
      w[i] = v[i];
      diffusion += (gp - 2.0 * gc + gm) / (h * h);
    }
  } else {
    // sum_ij d_i d_j (c v_i v_j f)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto g = [&](std::span<const double> u) { return u[i] * u[j] * f(u); };
        if (i == j) {
          const double gc = g(v);
          w[i] = v[i] + h;
          const double gp = g(w);
          w[i] = v[i] - h;
          const double gm = g(w);
          w[i] = v[i];
          diffusion += (gp - 2.0 * gc + gm) / (h * h);
        } else {
          w[i] = v[i] + h;
          w[j] = v[j] + h;
          const double gpp = g(w);
          w[j] = v[j] - h;
          const double gpm = g(w);
          w[i] = v[i] - h;
          const double gmm = g(w);
          w[j] = v[j] + h;
          const double gmp = g(w);
          w[i] = v[i];
          w[j] = v[j];
          diffusion += (gpp - gpm - gmp + gmm) / (4.0 * h * h);
        }
      }
    }
  }
  return drift + c * diffusion;
}

double rhs_expanded_form(const CoefficientSpec& spec, const PointFunction& f, double lambda,
                         std::span<const double> v, double h) {
  SpatialDerivatives d =
      spatial_derivatives(f, v, h, spec.variant == Variant::degenerate);
  return expanded_rhs_from_derivatives(spec, lambda, v, d);
}

// ---------------------------------------------------------------------------

namespace {

// Dormand-Prince 5(4) with FSAL and a PI-free elementary controller.
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

  // Integrates y from t0 to t1 in place; returns accepted step count.
  static long integrate(const Rhs& rhs, std::vector<double>& y, double t0, double t1, double tol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    double t = t0;
    double dt = std::min(1e-3, (t1 - t0) / 10.0);
    long accepted = 0;
    rhs(t, y, k1);

    while (t < t1) {
      dt = std::min(dt, t1 - t);
      if (dt < 1e-14 * std::max(1.0, t1)) throw NumericError("step size underflow (stiffness)");

      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * a21 * k1[i];
      rhs(t + c2 * dt, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * dt, tmp, k3);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * dt, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * dt, tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(t + dt, tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      rhs(t + dt, ynew, k7);

      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double ei = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
        const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / n);

      if (err <= 1.0) {
        t += dt;
        y.swap(ynew);
        k1.swap(k7);
        ++accepted;
      }
      // on rejection y is unchanged, so k1 = f(t, y) stays valid
      const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
      dt *= factor;
    }
    return accepted;
  }
};

struct MoLGrid {
  std::vector<double> x_ext;  // extended nodes including padding
  int pad_cells = 0;
  int window_size = 0;
  double h = 0.0;
};

MoLGrid build_grid(double x_lo, double x_hi, int nx, double pad) {
  if (nx < 5) throw ConfigError("mol_reference requires nx >= 5");
  MoLGrid g;
  g.window_size = nx;
  g.h = (x_hi - x_lo) / (nx - 1);
  g.pad_cells = static_cast<int>(std::ceil(pad / g.h));
  const int total = nx + 2 * g.pad_cells;
  g.x_ext.resize(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) g.x_ext[i] = x_lo + (i - g.pad_cells) * g.h;
  return g;
}

// Radial semi-discrete right-hand side in x = ln r; Dirichlet zero ghosts.
void radial_rhs(const CoefficientMap& map, Variant variant, int n, double lambda,
                const std::vector<double>& u, std::vector<double>& du, double h, int threads) {
  const double b0 = map.b0(lambda);
  const double b1 = map.b1(lambda);
  const double c = map.c(lambda);
  const double adv = variant == Variant::isotropic ? b1 + (n - 2) * c : b1;
  const int m = static_cast<int>(u.size());
  const double inv2h = 1.0 / (2.0 * h);
  const double invh2 = 1.0 / (h * h);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (m > 4096)
#endif
  for (int i = 0; i < m; ++i) {
    const double um = i > 0 ? u[i - 1] : 0.0;
    const double up = i < m - 1 ? u[i + 1] : 0.0;
    du[i] = b0 * u[i] + adv * (up - um) * inv2h + c * (up - 2.0 * u[i] + um) * invh2;
  }
  (void)threads;
}

// Zonal n = 3 right-hand side on (x, mu) with a flux-form angular operator.
void zonal_rhs(const CoefficientMap& map, double lambda, const std::vector<double>& u,
               std::vector<double>& du, double h, int nmu, int threads) {
  const double b0 = map.b0(lambda);
  const double b1 = map.b1(lambda);
  const double c = map.c(lambda);
  const double adv = b1 + c;  // n = 3
  const int m = static_cast<int>(u.size()) / nmu;
  const double inv2h = 1.0 / (2.0 * h);
  const double invh2 = 1.0 / (h * h);
  const double dmu = 2.0 / nmu;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (m * nmu > 4096)
#endif
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nmu; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * nmu + j;
      const double um = i > 0 ? u[idx - nmu] : 0.0;
      const double up = i < m - 1 ? u[idx + nmu] : 0.0;
      double val = b0 * u[idx] + adv * (up - um) * inv2h + c * (up - 2.0 * u[idx] + um) * invh2;
      const double mu_hi = -1.0 + (j + 1) * dmu;
      const double mu_lo = -1.0 + j * dmu;
      const double flux_hi = j < nmu - 1 ? (1.0 - mu_hi * mu_hi) * (u[idx + 1] - u[idx]) / dmu : 0.0;
      const double flux_lo = j > 0 ? (1.0 - mu_lo * mu_lo) * (u[idx] - u[idx - 1]) / dmu : 0.0;
      val += c * (flux_hi - flux_lo) / dmu;
      du[idx] = val;
    }
  }
  (void)threads;
}

std::vector<double> run_mol(const CoefficientSpec& spec, const InitialCondition& ic,
                            double lambda_end, const MoLGrid& grid, const MoLOptions& options,
                            long* steps_out) {
  const int n = spec.dimension;
  const int nmu = options.n_mu;
  const int total_x = static_cast<int>(grid.x_ext.size());
  const int threads = resolve_threads(options.threads);
  CoefficientMap map = map_coefficients(spec);

  std::vector<double> u;
  if (nmu > 0) {
    if (n != 3) throw ConfigError("zonal mol_reference supports n = 3 only");
    u.resize(static_cast<std::size_t>(total_x) * nmu);
    const double dmu = 2.0 / nmu;
    for (int i = 0; i < total_x; ++i) {
      const double r = std::exp(grid.x_ext[i]);
      for (int j = 0; j < nmu; ++j) {
        const double mu = -1.0 + (j + 0.5) * dmu;
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        const double v[3] = {r * s, 0.0, r * mu};
        u[static_cast<std::size_t>(i) * nmu + j] = ic(v);
      }
    }
  } else {
    u.resize(static_cast<std::size_t>(total_x));
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < total_x; ++i) {
      v[0] = std::exp(grid.x_ext[i]);
      u[i] = ic(v);
    }
  }

  auto rhs = [&](double lambda, const std::vector<double>& y, std::vector<double>& dy) {
    if (nmu > 0)
      zonal_rhs(map, lambda, y, dy, grid.h, nmu, threads);
    else
      radial_rhs(map, spec.variant, n, lambda, y, dy, grid.h, threads);
  };
  long steps = DormandPrince::integrate(rhs, u, 0.0, lambda_end, options.rk_tol);
  if (steps_out) *steps_out = steps;
  return u;
}

}  // namespace

MoLResult mol_reference(const CoefficientSpec& spec, const InitialCondition& ic, double lambda_end,
                        double x_lo, double x_hi, const MoLOptions& options) {
  if (!(lambda_end > 0.0) || lambda_end > spec.lambda_max)
    throw ConfigError("mol_reference requires 0 < lambda_end <= lambda_max");
  if (!(x_hi > x_lo)) throw ConfigError("mol_reference requires x_hi > x_lo");
  spec.validate();

  MoLResult result;
  const int nmu = options.n_mu;
  MoLGrid grid = build_grid(x_lo, x_hi, options.nx, options.pad);
  result.h_x = grid.h;
  result.x.assign(grid.x_ext.begin() + grid.pad_cells, grid.x_ext.end() - grid.pad_cells);
  if (nmu > 0) {
    result.mu.resize(static_cast<std::size_t>(nmu));
    for (int j = 0; j < nmu; ++j) result.mu[j] = -1.0 + (j + 0.5) * 2.0 / nmu;
  }

  std::vector<double> base = run_mol(spec, ic, lambda_end, grid, options, &result.steps_taken);

  // Boundary influence: rerun on a wider domain and compare on the window.
  MoLOptions wide_options = options;
  wide_options.pad = options.pad + options.probe_pad;
  MoLGrid wide = build_grid(x_lo, x_hi, options.nx, wide_options.pad);
  std::vector<double> probe = run_mol(spec, ic, lambda_end, wide, wide_options, nullptr);

  const int cols = nmu > 0 ? nmu : 1;
  result.values.resize(static_cast<std::size_t>(grid.window_size) * cols);
  double influence = 0.0;
  for (int i = 0; i < grid.window_size; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double a = base[static_cast<std::size_t>(i + grid.pad_cells) * cols + j];
      const double b = probe[static_cast<std::size_t>(i + wide.pad_cells) * cols + j];
      result.values[static_cast<std::size_t>(i) * cols + j] = b;
      influence = std::max(influence, std::abs(a - b));
    }
  }
  result.boundary_influence = influence;
  return result;
}

// ---------------------------------------------------------------------------

MCEstimate mc_simulate(const CoefficientSpec& spec, const LogNormalRadial& density,
                       const PointFunction& f, const std::string& observable_name,
                       double lambda_end, const MCOptions& options) {
  if (options.paths < 2) throw ConfigError("mc_simulate requires at least 2 paths");
  if (options.steps < 1) throw ConfigError("mc_simulate requires at least 1 step");
  if (lambda_end < 0.0 || lambda_end > spec.lambda_max)
    throw ConfigError("mc_simulate requires 0 <= lambda_end <= lambda_max");
  spec.validate();

  const int n = spec.dimension;
  const long paths = options.paths;
  const long steps = options.steps;
  const double dl = lambda_end / steps;
  const Expression a_expr = spec.a;
  const Expression c_expr = spec.c;
  const bool degenerate = spec.variant == Variant::degenerate;

  std::vector<double> values(static_cast<std::size_t>(paths));
  std::vector<std::uint8_t> bad(static_cast<std::size_t>(paths), 0);
  const int threads = resolve_threads(options.threads);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (long p = 0; p < paths; ++p) {
    SplitMix64 gen = SplitMix64::stream(options.seed, static_cast<std::uint64_t>(p));
    std::vector<double> v(static_cast<std::size_t>(n));
    const double r0 = std::exp(density.mu + density.sigma * gen.normal());
    if (n == 1) {
      v[0] = (gen.next() & 1ULL) ? r0 : -r0;
    } else {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        v[i] = gen.normal();
        s += v[i] * v[i];
      }
      s = std::sqrt(s);
      for (int i = 0; i < n; ++i) v[i] = r0 * v[i] / s;
    }

    if (degenerate) {
      // One shared noise along v: exact log-space update per step.
      double log_scale = 0.0;
      for (long k = 0; k < steps; ++k) {
        const double lambda = k * dl;
        const double a = a_expr.eval(lambda);
        const double c = c_expr.eval(lambda);
        log_scale += (-a - c) * dl + std::sqrt(2.0 * c * dl) * gen.normal();
      }
      const double scale = std::exp(log_scale);
      for (int i = 0; i < n; ++i) v[i] *= scale;
    } else {
      for (long k = 0; k < steps; ++k) {
        const double lambda = k * dl;
        const double a = a_expr.eval(lambda);
        const double c = c_expr.eval(lambda);
        const double r = norm(v);
        const double noise = std::sqrt(2.0 * c * dl) * r;
        for (int i = 0; i < n; ++i) v[i] += -a * v[i] * dl + noise * gen.normal();
      }
    }

    double fv = f(v);
    if (!std::isfinite(fv)) {
      bad[p] = 1;
      fv = 0.0;
    }
    values[p] = fv;
  }
  (void)threads;

  long bad_count = 0;
  for (auto b : bad) bad_count += b;
  if (bad_count > 0)
    throw NumericError(std::to_string(bad_count) + " of " + std::to_string(paths) +
                       " paths produced non-finite observables");

  // Fixed-order reduction keeps results independent of the thread count.
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(paths);
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  var /= static_cast<double>(paths - 1);

  MCEstimate est;
  est.observable = observable_name;
  est.paths = paths;
  est.steps = steps;
  est.estimate = mean;
  est.std_error = std::sqrt(var / static_cast<double>(paths));
  return est;
}

// ---------------------------------------------------------------------------

namespace {

void enumerate_monomials(int n, int degree, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n - 1) {
    int used = 0;
    for (int e : current) used += e;
    current.push_back(degree - used);
    out.push_back(current);
    current.pop_back();
    return;
  }
  int used = 0;
  for (int e : current) used += e;
  for (int e = 0; e <= degree - used; ++e) {
    current.push_back(e);
    enumerate_monomials(n, degree, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<int>> monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  if (degree < 0) return out;
  std::vector<int> current;
  enumerate_monomials(n, degree, current, out);
  return out;
}

int matrix_rank(std::vector<std::vector<double>>& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  double max_entry = 0.0;
  for (const auto& row : m)
    for (double x : row) max_entry = std::max(max_entry, std::abs(x));
  if (max_entry == 0.0) return 0;
  const double tol = 1e-9 * max_entry;

  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    for (std::size_t r = row + 1; r < rows; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) <= tol) continue;
    std::swap(m[pivot], m[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      const double factor = m[r][col] / m[row][col];
      if (factor == 0.0) continue;
      for (std::size_t cc = col; cc < cols; ++cc) m[r][cc] -= factor * m[row][cc];
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace

long long harmonic_dimension(int l, int n) {
  if (l < 0 || n < 1 || l > 8 || n > 6)
    throw ConfigError("harmonic_dimension supports 0 <= l <= 8, 1 <= n <= 6");
  auto source = monomials(n, l);
  if (l < 2) return static_cast<long long>(source.size());
  auto target = monomials(n, l - 2);
  std::map<std::vector<int>, std::size_t> target_index;
  for (std::size_t i = 0; i < target.size(); ++i) target_index.emplace(target[i], i);

  // Laplacian as a linear map from degree l to degree l - 2 monomials.
  std::vector<std::vector<double>> matrix(target.size(), std::vector<double>(source.size(), 0.0));
  for (std::size_t col = 0; col < source.size(); ++col) {
    for (int i = 0; i < n; ++i) {
      const int e = source[col][i];
      if (e < 2) continue;
      std::vector<int> reduced = source[col];
      reduced[i] -= 2;
      matrix[target_index.at(reduced)][col] += static_cast<double>(e) * (e - 1);
    }
  }
  const int rank = matrix_rank(matrix);
  return static_cast<long long>(source.size()) - rank;
}

}  // namespace cascade::oracle
