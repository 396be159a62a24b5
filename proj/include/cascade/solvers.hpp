#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "cascade/coefficients.hpp"
#include "cascade/initial_condition.hpp"
#include "cascade/kernels.hpp"

namespace cascade {

// Sign convention of the sphere heat factor applied to degree-l modes.
// `decaying` (e^{gamma * lambda_l}, lambda_l <= 0) is the solution of the
// evolution problem; `growing` flips the sign and exists only so the
// verification suite can demonstrate that it fails the residual test.
enum class SpectralSign { decaying, growing };

struct SolveOptions {
  double quad_tol = 1e-10;  // absolute tolerance of coefficient integrals
  int gh_nodes = 64;        // Gauss-Hermite size for the log-Gaussian kernel
  int l_max = 16;           // initial truncation degree for projected data
  int l_max_cap = 64;       // doubling stops here
  double tail_tol = 1e-10;  // target projection tail
  SpectralSign spectral_sign = SpectralSign::decaying;
  int threads = 0;  // field evaluation: 0 = library default, 1 = serial
};

// Evaluated solution samples plus everything needed to reproduce them.
struct SolutionField {
  std::vector<double> lambdas;
  std::vector<std::vector<double>> points;
  std::vector<double> values;       // row-major: [lambda_index * n_points + point_index]
  std::vector<double> abs_err_est;  // same layout
  std::vector<std::uint8_t> at_origin;  // per point: value defined by continuity
  std::vector<double> beta0, beta1, gamma;  // per lambda
  int gh_nodes = 0;
  int l_max_used = 0;
  double tail_estimate = 0.0;
  double quad_tol = 0.0;

  double value(std::size_t lambda_index, std::size_t point_index) const {
    return values[lambda_index * points.size() + point_index];
  }
};

// Closed-form solution evaluator for one problem. Immutable after
// construction; evaluation is pure and thread-safe.
class Solver {
 public:
  Solver(CoefficientSpec spec, InitialCondition ic, SolveOptions options = {});

  // Dispatches on the spec's variant.
  double value(double lambda, std::span<const double> v) const;
  double value_with_estimate(double lambda, std::span<const double> v, double* abs_err_est) const;

  double degenerate(double lambda, std::span<const double> v) const;
  double isotropic(double lambda, std::span<const double> v) const;
  // n = 3 specialization over the Y_l^m basis; agrees with isotropic().
  double isotropic_n3(double lambda, std::span<const double> v) const;

  SolutionField evaluate_field(std::span<const double> lambdas,
                               const std::vector<std::vector<double>>& points) const;

  const CoefficientSpec& spec() const { return spec_; }
  const InitialCondition& initial_condition() const { return ic_; }
  const IntegratedCoefficients& coeffs() const { return coeffs_; }
  const SolveOptions& options() const { return options_; }
  const GaussHermiteRule& rule() const { return rule_; }
  int l_max_used() const { return l_max_used_; }
  double tail_estimate() const { return tail_estimate_; }

 private:
  struct Projection {
    std::shared_ptr<SphereQuadrature> quad;
    std::vector<HarmonicMode> modes;
    std::vector<std::vector<double>> basis;  // [mode][quad point]
  };

  double degenerate_impl(double lambda, std::span<const double> v,
                         const GaussHermiteRule& rule) const;
  double isotropic_impl(double lambda, std::span<const double> v, bool n3_path,
                        const GaussHermiteRule& rule) const;
  double dispatch(double lambda, std::span<const double> v, const GaussHermiteRule& rule) const;
  double origin_value(double lambda) const;
  double mode_sum(double lambda, double radius, std::span<const double> direction, bool n3_path,
                  const GaussHermiteRule& rule) const;
  double spectral_factor(int l, double gamma) const;
  void build_projection();

  CoefficientSpec spec_;
  InitialCondition ic_;
  SolveOptions options_;
  IntegratedCoefficients coeffs_;
  GaussHermiteRule rule_;
  GaussHermiteRule rule_half_;
  std::vector<ExpansionTerm> exact_terms_;  // empty for projected data
  std::optional<Projection> projection_;
  int l_max_used_ = 0;
  double tail_estimate_ = 0.0;
};

// Closed-form growth factor of the p-th radial moment,
// Integral |v|^p P d^n v = factor * Integral |v|^p phi d^n v, valid for
// radial data: e^{beta0 - (p+n) shift + (p+n)^2 gamma} with shift = beta1
// (degenerate) or beta1 + (n-2) gamma (isotropic).
double moment_factor(const Solver& solver, double p, double lambda);

// Integral |v|^p P(lambda, v) d^n v by adaptive quadrature in log radius.
// Requires log-normal radial data (the integrable density class).
double radial_moment(const Solver& solver, double p, double lambda);

// Operation-shaped conveniences; each builds a one-shot Solver.
double solve_degenerate(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                        std::span<const double> v, const SolveOptions& options = {});
double solve_isotropic(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                       std::span<const double> v, const SolveOptions& options = {});
double solve_isotropic_n3(const CoefficientSpec& spec, const InitialCondition& ic, double lambda,
                          std::span<const double> v, const SolveOptions& options = {});
SolutionField evaluate_field(const CoefficientSpec& spec, const InitialCondition& ic,
                             std::span<const double> lambdas,
                             const std::vector<std::vector<double>>& points,
                             const SolveOptions& options = {});

}  // namespace cascade
