#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cascade/coefficients.hpp"
#include "cascade/initial_condition.hpp"

namespace cascade::oracle {

using FieldEvaluator = std::function<double(double, std::span<const double>)>;
using PointFunction = std::function<double(std::span<const double>)>;

// ---------------------------------------------------------------------------
// Finite-difference residual of an evolution-equation solution.

struct ResidualSample {
  double lambda = 0.0;
  std::vector<double> v;
};

struct ResidualStepReport {
  double step = 0.0;  // relative step size used for both lambda and v stencils
  double max_abs = 0.0;
  double rms = 0.0;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;
  std::vector<ResidualStepReport> steps;
  std::vector<double> residuals;  // at the finest step, per sample
  double order_estimate = 0.0;    // Richardson slope across consecutive steps
};

// Centered differences in lambda and v; assembles the variant's right-hand
// side and reports r = dP/dlambda - RHS. Samples must keep lambda - h >= 0
// and |v| bounded away from 0.
ResidualReport residual_check(const FieldEvaluator& P, const CoefficientSpec& spec,
                              std::span<const ResidualSample> samples,
                              std::span<const double> steps);

// FD evaluation of the two algebraically equal forms of the generator at a
// fixed lambda: the divergence (drift/diffusion tensor) form and the
// expanded (b0, b1, c) form. Used to cross-check the coefficient maps.
double rhs_divergence_form(const CoefficientSpec& spec, const PointFunction& f, double lambda,
                           std::span<const double> v, double h);
double rhs_expanded_form(const CoefficientSpec& spec, const PointFunction& f, double lambda,
                         std::span<const double> v, double h);

// ---------------------------------------------------------------------------
// Method-of-lines reference integrator in log-radius coordinates.

struct MoLOptions {
  int nx = 401;          // nodes across the requested window
  double pad = 8.0;      // extra log-radius padding on each side
  double probe_pad = 2.0;  // additional padding for the boundary-influence probe
  double rk_tol = 1e-8;  // adaptive Runge-Kutta tolerance (abs and rel)
  int n_mu = 0;          // > 0 switches on the zonal n = 3 path with this many mu cells
  int threads = 0;
};

struct MoLResult {
  std::vector<double> x;   // log-radius nodes of the window
  std::vector<double> mu;  // zonal path only: cell-centred cos(theta) nodes
  std::vector<double> values;  // [i] radial, [i * mu.size() + j] zonal
  double boundary_influence = 0.0;
  long steps_taken = 0;
  double h_x = 0.0;
};

// Integrates the semi-discrete system from 0 to lambda_end on a uniform
// log-radius grid spanning [x_lo, x_hi] (plus padding, reported values are on
// the window only). Radial reduction for radial data in any n; zonal n = 3
// when n_mu > 0.
MoLResult mol_reference(const CoefficientSpec& spec, const InitialCondition& ic, double lambda_end,
                        double x_lo, double x_hi, const MoLOptions& options = {});

// ---------------------------------------------------------------------------
// Monte-Carlo simulation of the stochastic processes whose densities the
// solvers evolve.

struct MCOptions {
  long paths = 100000;
  long steps = 200;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct MCEstimate {
  std::string observable;
  long paths = 0;
  long steps = 0;
  double estimate = 0.0;
  double std_error = 0.0;
};

// Evolves samples of the log-normal radial density to lambda_end and returns
// the sample mean and standard error of f. Isotropic: Euler-Maruyama with n
// independent noises, dv_i = -a v_i dl + sqrt(2c) |v| dW_i. Degenerate: one
// shared noise along v, stepped exactly in log space,
// v -> v exp((-a - c) dl + sqrt(2c) dW). Deterministic per (seed, paths,
// steps) regardless of thread count.
MCEstimate mc_simulate(const CoefficientSpec& spec, const LogNormalRadial& density,
                       const PointFunction& f, const std::string& observable_name,
                       double lambda_end, const MCOptions& options = {});

// ---------------------------------------------------------------------------
// Brute-force dimension of degree-l harmonic homogeneous polynomials in n
// variables: kernel dimension of the Laplacian on the monomial basis.
long long harmonic_dimension(int l, int n);

}  // namespace cascade::oracle
