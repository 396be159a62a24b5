#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "cascade/expression.hpp"

namespace cascade {

// Diffusion tensor family: c(lambda) v^2 times the identity (isotropic) or
// the rank-one tensor c(lambda) v v (degenerate anisotropic).
enum class Variant { isotropic, degenerate };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Problem definition: drift/diffusion profiles a, c (expressions in lambda),
// dimension, tensor variant, and the lambda domain on which positivity of a
// and c is required and sampled.
struct CoefficientSpec {
  Expression a;
  Expression c;
  int dimension = 1;
  Variant variant = Variant::degenerate;
  double lambda_max = 1.0;

  // Throws ConfigError on dimension < 1, lambda_max <= 0, or sampled
  // non-positivity of a or c (reports the failing sample).
  void validate() const;
};

// Zero-order and gradient-term coefficients of the expanded evolution
// operator for the spec's variant; the diffusion profile c passes through.
struct CoefficientMap {
  std::function<double(double)> b0;
  std::function<double(double)> b1;
  std::function<double(double)> c;
};

CoefficientMap map_coefficients(const CoefficientSpec& spec);

// beta0, beta1, gamma: running integrals of b0, b1, c from 0, each computed
// by adaptive quadrature to `quad_tol` absolute error and memoized per
// lambda. Immutable after construction; safe for concurrent readers.
class IntegratedCoefficients {
 public:
  IntegratedCoefficients(const CoefficientSpec& spec, double quad_tol = 1e-10);

  double beta0(double lambda) const { return value(0, lambda); }
  double beta1(double lambda) const { return value(1, lambda); }
  double gamma(double lambda) const { return value(2, lambda); }

  double quad_tol() const { return quad_tol_; }

  // Warm the memo for a known lambda list (call before parallel regions).
  void precompute(std::span<const double> lambdas) const;

 private:
  double value(int which, double lambda) const;

  CoefficientMap map_;
  double quad_tol_;
  mutable std::mutex mutex_;
  mutable std::map<double, double> cache_[3];
};

}  // namespace cascade
