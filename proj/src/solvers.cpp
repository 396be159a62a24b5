#include "cascade/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/parallel.hpp"

namespace cascade {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// log(DBL_MAX) with headroom.
constexpr double kExponentBudget = 690.0;

}  // namespace

Solver::Solver(CoefficientSpec spec, InitialCondition ic, SolveOptions options)
    : spec_(std::move(spec)),
      ic_(std::move(ic)),
      options_(options),
      coeffs_(spec_, options.quad_tol),
      rule_(gauss_hermite(options.gh_nodes)),
      rule_half_(gauss_hermite(std::max(2, options.gh_nodes / 2))) {
  if (options_.gh_nodes < 2) throw ConfigError("gh_nodes must be >= 2");
  if (options_.l_max < 0 || options_.l_max_cap < options_.l_max)
    throw ConfigError("l_max must satisfy 0 <= l_max <= l_max_cap");
  ic_.validate_for(spec_.dimension, spec_.variant);

  // Floating-point exponent budget: the kernel samples the data at
  // log-scaled arguments, so growth exponent times total log-shift must
  // stay clear of overflow.
  const double gmax = coeffs_.gamma(spec_.lambda_max);
  const double b1max = std::abs(coeffs_.beta1(spec_.lambda_max));
  const double b0max = std::abs(coeffs_.beta0(spec_.lambda_max));
  const double u_max = std::abs(rule_.nodes.back());
  const double shift_span =
      b1max + std::max(spec_.dimension - 2, 0) * gmax + 2.0 * std::sqrt(gmax) * u_max;
  if (b0max + ic_.p_max() * shift_span > kExponentBudget) {
    std::ostringstream msg;
    msg << "growth bound p_max = " << ic_.p_max() << " with log-shift span " << shift_span
        << " exceeds the floating-point exponent budget";
    throw NumericError(msg.str());
  }

  if (spec_.variant == Variant::isotropic && spec_.dimension >= 2 && !ic_.radial()) {
    if (ic_.has_exact_modes()) {
      exact_terms_ = ic_.exact_modes(spec_.dimension);
      double dropped = 0.0;
      for (const auto& t : exact_terms_)
        if (t.mode.l > options_.l_max) dropped += std::abs(t.radial(1.0));
      if (dropped > 0.0) {
        std::ostringstream msg;
        msg << "initial data contains harmonic degrees above l_max = " << options_.l_max
            << "; truncation tail estimate " << dropped << " at unit radius";
        throw ConfigError(msg.str());
      }
      for (const auto& t : exact_terms_) l_max_used_ = std::max(l_max_used_, t.mode.l);
      tail_estimate_ = 0.0;
    } else {
      build_projection();
    }
  } else if (spec_.variant == Variant::isotropic && ic_.has_exact_modes()) {
    tail_estimate_ = 0.0;  // radial data: single l = 0 term handled directly
  }
}

void Solver::build_projection() {
  const int n = spec_.dimension;
  const GeneralExpression* ge = ic_.as_expression();
  if (!ge) throw NumericError("projection path requires expression data");
  if (n > 3 && ge->coords != CoordsKind::spherical)
    throw ConfigError("projection for n >= 4 supports zonal spherical data only");

  auto g = [this](std::span<const double> v) { return ic_(v); };
  // Reference radii for the truncation-tail measurement; field evaluation
  // re-measures the tail on its own radii.
  const std::vector<double> radii = {0.5, 1.0, 2.0};
  int l_max = options_.l_max;
  HarmonicExpansion expansion = project(g, n, l_max, radii);
  while (expansion.tail_estimate > options_.tail_tol && 2 * l_max <= options_.l_max_cap) {
    l_max *= 2;
    expansion = project(g, n, l_max, radii);
  }
  if (expansion.tail_estimate > options_.tail_tol) {
    std::ostringstream msg;
    msg << "projection tail " << expansion.tail_estimate << " above tolerance "
        << options_.tail_tol << " at the l_max cap " << options_.l_max_cap;
    throw NumericError(msg.str());
  }
  l_max_used_ = l_max;
  tail_estimate_ = expansion.tail_estimate;

  Projection proj;
  proj.quad = std::make_shared<SphereQuadrature>(sphere_quadrature(n, 2 * l_max + 2));
  for (int l = 0; l <= l_max; ++l) {
    if (n >= 4) {
      proj.modes.push_back(make_mode(l, 1, n));
    } else {
      long long d = degeneracy(l, n);
      for (int k = 1; k <= d; ++k) proj.modes.push_back(make_mode(l, k, n));
    }
  }
  proj.basis.reserve(proj.modes.size());
  for (const auto& mode : proj.modes) {
    std::vector<double> row(proj.quad->points.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = eval_mode(mode, proj.quad->directions[i]);
    proj.basis.push_back(std::move(row));
  }
  projection_ = std::move(proj);
}

double Solver::spectral_factor(int l, double gamma) const {
  const double lam = sphere_eigenvalue(l, spec_.dimension);
  return options_.spectral_sign == SpectralSign::decaying ? std::exp(gamma * lam)
                                                          : std::exp(-gamma * lam);
}

double Solver::origin_value(double lambda) const {
  const std::vector<double> zero(static_cast<std::size_t>(spec_.dimension), 0.0);
  return std::exp(coeffs_.beta0(lambda)) * ic_(zero);
}

double Solver::degenerate_impl(double lambda, std::span<const double> v,
                               const GaussHermiteRule& rule) const {
  const double beta0 = coeffs_.beta0(lambda);
  const double beta1 = coeffs_.beta1(lambda);
  const double gamma = coeffs_.gamma(lambda);
  auto f = [this](std::span<const double> w) { return ic_(w); };
  return std::exp(beta0) * gaussian_log_average(f, gamma, beta1, rule, v);
}

// Sum over harmonic modes of spectral factor * Y(direction) * kernel-averaged
// radial coefficient, for data with angular structure (n >= 2).
double Solver::mode_sum(double lambda, double radius, std::span<const double> direction,
                        bool n3_path, const GaussHermiteRule& rule) const {
  const int n = spec_.dimension;
  const double gamma = coeffs_.gamma(lambda);
  const double shift = coeffs_.beta1(lambda) + (n - 2) * gamma;

  double acc = 0.0;
  if (!exact_terms_.empty()) {
    for (const auto& term : exact_terms_) {
      double y;
      if (n3_path) {
        double theta = std::acos(std::clamp(direction[2], -1.0, 1.0));
        double phi = std::atan2(direction[1], direction[0]);
        y = eval_Y3(term.mode.l, term.mode.k - term.mode.l - 1, theta, phi);
      } else {
        y = eval_mode(term.mode, direction);
      }
      if (y == 0.0) continue;
      auto f_log = [&](double t) { return term.radial(radius * std::exp(t)); };
      double avg = gaussian_log_average(f_log, gamma, shift, rule);
      acc += spectral_factor(term.mode.l, gamma) * y * avg;
    }
    return acc;
  }

  const Projection& proj = *projection_;
  const std::size_t np = proj.quad->points.size();
  const std::size_t nm = proj.modes.size();

  // Basis values at the evaluation direction.
  std::vector<double> y_here(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    if (n3_path) {
      double theta = std::acos(std::clamp(direction[2], -1.0, 1.0));
      double phi = std::atan2(direction[1], direction[0]);
      y_here[m] = eval_Y3(proj.modes[m].l, proj.modes[m].k - proj.modes[m].l - 1, theta, phi);
    } else {
      y_here[m] = eval_mode(proj.modes[m], direction);
    }
  }

  // One sphere sweep per quadrature node radius gives all mode coefficients.
  const double width = 2.0 * std::sqrt(gamma);
  std::vector<double> coeff(nm);
  std::vector<double> w(static_cast<std::size_t>(n));
  auto accumulate_scale = [&](double t, double kernel_weight) {
    const double r = radius * std::exp(t);
    std::fill(coeff.begin(), coeff.end(), 0.0);
    for (std::size_t q = 0; q < np; ++q) {
      for (int d = 0; d < n; ++d) w[d] = r * proj.quad->directions[q][d];
      const double gq = ic_(w) * proj.quad->weights[q];
      for (std::size_t m = 0; m < nm; ++m) coeff[m] += gq * proj.basis[m][q];
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < nm; ++m)
      sum += spectral_factor(proj.modes[m].l, gamma) * y_here[m] * coeff[m];
    acc += kernel_weight * sum;
  };

  if (gamma <= kGammaEpsilon) {
    accumulate_scale(shift, 1.0);
  } else {
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < rule.size(); ++i)
      accumulate_scale(shift + width * rule.nodes[i], rule.weights[i] * inv_sqrt_pi);
  }
  return acc;
}

double Solver::isotropic_impl(double lambda, std::span<const double> v, bool n3_path,
                              const GaussHermiteRule& rule) const {
  const int n = spec_.dimension;
  const double beta0 = coeffs_.beta0(lambda);
  const double gamma = coeffs_.gamma(lambda);
  const double radius = norm(v);
  if (radius == 0.0) return origin_value(lambda);

  if (ic_.radial() || n == 1) {
    // Pure radial action: single l = 0 mode, spectral factor 1.
    const double shift = coeffs_.beta1(lambda) + (n - 2) * gamma;
    std::vector<double> w(v.size());
    auto f = [&](double t) {
      const double scale = std::exp(t);
      for (std::size_t i = 0; i < v.size(); ++i) w[i] = scale * v[i];
      return ic_(w);
    };
    return std::exp(beta0) * gaussian_log_average(f, gamma, shift, rule);
  }

  std::vector<double> direction(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) direction[i] = v[i] / radius;
  return std::exp(beta0) * mode_sum(lambda, radius, direction, n3_path, rule);
}

namespace {

void check_domain(const CoefficientSpec& spec, double lambda, std::span<const double> v) {
  if (lambda < 0.0 || lambda > spec.lambda_max)
    throw ConfigError("lambda outside [0, lambda_max]");
  if (static_cast<int>(v.size()) != spec.dimension)
    throw ConfigError("point dimension does not match problem dimension");
}

}  // namespace

double Solver::degenerate(double lambda, std::span<const double> v) const {
  if (spec_.variant != Variant::degenerate)
    throw ConfigError("degenerate() called on an isotropic problem");
  check_domain(spec_, lambda, v);
  if (norm(v) == 0.0) return origin_value(lambda);
  return degenerate_impl(lambda, v, rule_);
}

double Solver::isotropic(double lambda, std::span<const double> v) const {
  if (spec_.variant != Variant::isotropic)
    throw ConfigError("isotropic() called on a degenerate problem");
  check_domain(spec_, lambda, v);
  return isotropic_impl(lambda, v, false, rule_);
}

double Solver::isotropic_n3(double lambda, std::span<const double> v) const {
  if (spec_.variant != Variant::isotropic)
    throw ConfigError("isotropic_n3() called on a degenerate problem");
  if (spec_.dimension != 3) throw ConfigError("isotropic_n3 requires n = 3");
  check_domain(spec_, lambda, v);
  return isotropic_impl(lambda, v, true, rule_);
}

double Solver::dispatch(double lambda, std::span<const double> v,
                        const GaussHermiteRule& rule) const {
  check_domain(spec_, lambda, v);
  if (norm(v) == 0.0) return origin_value(lambda);
  return spec_.variant == Variant::degenerate ? degenerate_impl(lambda, v, rule)
                                              : isotropic_impl(lambda, v, false, rule);
}

double Solver::value(double lambda, std::span<const double> v) const {
  return dispatch(lambda, v, rule_);
}

double Solver::value_with_estimate(double lambda, std::span<const double> v,
                                   double* abs_err_est) const {
  const double full = dispatch(lambda, v, rule_);
  if (abs_err_est) {
    const double half = dispatch(lambda, v, rule_half_);
    const double p = ic_.p_max();
    const int lm = l_max_used_;
    const double sens =
        1.0 + p + p * p + static_cast<double>(lm) * (lm + spec_.dimension - 2);
    *abs_err_est = std::abs(full - half) + options_.quad_tol * sens * std::abs(full) +
                   std::exp(coeffs_.beta0(lambda)) * tail_estimate_;
  }
  return full;
}

SolutionField Solver::evaluate_field(std::span<const double> lambdas,
                                     const std::vector<std::vector<double>>& points) const {
  SolutionField field;
  field.lambdas.assign(lambdas.begin(), lambdas.end());
  field.points = points;
  field.gh_nodes = options_.gh_nodes;
  field.l_max_used = l_max_used_;
  field.tail_estimate = tail_estimate_;
  field.quad_tol = options_.quad_tol;

  for (const auto& p : points)
    if (static_cast<int>(p.size()) != spec_.dimension)
      throw ConfigError("grid point dimension does not match problem dimension");

  coeffs_.precompute(lambdas);  // warm the memo before the parallel region
  for (double l : lambdas) {
    if (l < 0.0 || l > spec_.lambda_max)
      throw ConfigError("lambda outside [0, lambda_max]");
    field.beta0.push_back(coeffs_.beta0(l));
    field.beta1.push_back(coeffs_.beta1(l));
    field.gamma.push_back(coeffs_.gamma(l));
  }

  field.at_origin.resize(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (norm(points[i]) == 0.0) field.at_origin[i] = 1;

  const std::size_t total = lambdas.size() * points.size();
  field.values.assign(total, 0.0);
  field.abs_err_est.assign(total, 0.0);
  if (total == 0) return field;

  std::vector<std::pair<std::size_t, std::string>> failures;
  const int threads = resolve_threads(options_.threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
  for (std::size_t idx = 0; idx < total; ++idx) {
    const std::size_t li = idx / points.size();
    const std::size_t pi = idx % points.size();
    try {
      double est = 0.0;
      field.values[idx] = value_with_estimate(lambdas[li], points[pi], &est);
      field.abs_err_est[idx] = est;
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      failures.emplace_back(idx, e.what());
    }
  }
  (void)threads;

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::ostringstream msg;
    msg << failures.size() << " point(s) failed;";
    for (std::size_t i = 0; i < failures.size() && i < 4; ++i) {
      const auto [idx, what] = failures[i];
      msg << " [lambda_index " << idx / points.size() << ", point_index " << idx % points.size()
          << ": " << what << "]";
    }
    if (failures.size() > 4) msg << " ...";
    throw NumericError(msg.str());
  }

  for (std::size_t li = 0; li < lambdas.size(); ++li)
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
      double val = field.values[li * points.size() + pi];
      if (!std::isfinite(val))
        throw NumericError("non-finite solution value at lambda index " + std::to_string(li) +
                           ", point index " + std::to_string(pi));
    }
  return field;
}

double moment_factor(const Solver& solver, double p, double lambda) {
  const int n = solver.spec().dimension;
  const auto& coeffs = solver.coeffs();
  const double gamma = coeffs.gamma(lambda);
  double shift = coeffs.beta1(lambda);
  if (solver.spec().variant == Variant::isotropic) shift += (n - 2) * gamma;
  const double q = p + n;
  return std::exp(coeffs.beta0(lambda) - q * shift + q * q * gamma);
}

double radial_moment(const Solver& solver, double p, double lambda) {
  const LogNormalRadial* d = solver.initial_condition().as_log_normal();
  if (!d) throw ConfigError("radial_moment requires log_normal_radial initial data");
  const int n = solver.spec().dimension;
  const auto& coeffs = solver.coeffs();
  const double gamma = coeffs.gamma(lambda);
  double shift = coeffs.beta1(lambda);
  if (solver.spec().variant == Variant::isotropic) shift += (n - 2) * gamma;

  // In log radius the evolved density is a Gaussian centred at mu - shift
  // with variance sigma^2 + 2 gamma; the |v|^p weight moves the peak of the
  // integrand by (p+n) times the variance.
  const double var = d->sigma * d->sigma + 2.0 * gamma;
  const double center = d->mu - shift + (p + n) * var;
  const double half = 14.0 * std::sqrt(var) + 2.0;

  std::vector<double> point(static_cast<std::size_t>(n), 0.0);
  auto integrand = [&](double x) {
    point[0] = std::exp(x);
    return std::exp((p + n) * x) * solver.value(lambda, point);
  };
  const double guess = moment_factor(solver, p, lambda) * log_normal_radial_moment(*d, p);
  QuadratureResult res = integrate_adaptive(integrand, center - half, center + half,
                                            std::max(1e-14, 1e-11 * std::abs(guess)));
  if (!res.converged)
    throw NumericError("radial moment quadrature did not converge (achieved " +
                       std::to_string(res.abs_error) + ")");
  return sphere_area(n) * res.value;
}

double solve_degenerate(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                        std::span<const double> v, const SolveOptions& options) {
  return Solver(spec, ic, options).degenerate(lambda, v);
}

double solve_isotropic(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                       std::span<const double> v, const SolveOptions& options) {
  return Solver(spec, ic, options).isotropic(lambda, v);
}

double solve_isotropic_n3(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                          std::span<const double> v, const SolveOptions& options) {
  return Solver(spec, ic, options).isotropic_n3(lambda, v);
}

SolutionField evaluate_field(const CoefficientSpec& spec, const InitialCondition& ic,
                             std::span<const double> lambdas,
                             const std::vector<std::vector<double>>& points,
                             const SolveOptions& options) {
  return Solver(spec, ic, options).evaluate_field(lambdas, points);
}

}  // namespace cascade
