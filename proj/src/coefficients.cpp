#include "cascade/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "cascade/quadrature.hpp"

namespace cascade {

const char* variant_name(Variant v) {
  return v == Variant::isotropic ? "isotropic" : "degenerate";
}

Variant variant_from_name(const std::string& name) {
  if (name == "isotropic") return Variant::isotropic;
  if (name == "degenerate") return Variant::degenerate;
  throw ConfigError("unknown variant '" + name + "' (expected isotropic or degenerate)");
}

namespace {

double checked_positive(const Expression& expr, const char* label, double lambda) {
  double v = expr.eval(lambda);
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream msg;
    msg << "coefficient " << label << " = '" << expr.source()
        << "' must be positive on [0, lambda_max]; " << label << "(" << lambda << ") = " << v;
    throw ConfigError(msg.str());
  }
  return v;
}

}  // namespace

void CoefficientSpec::validate() const {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
  if (a.num_variables() != 1 || c.num_variables() != 1)
    throw ConfigError("coefficient expressions must have the single variable lambda");
  // Positivity is sampled, not symbolic: 257 uniform points including both
  // endpoints, plus every quadrature node seen while integrating.
  for (int i = 0; i <= 256; ++i) {
    double lambda = lambda_max * i / 256.0;
    checked_positive(a, "a", lambda);
    checked_positive(c, "c", lambda);
  }
}

CoefficientMap map_coefficients(const CoefficientSpec& spec) {
  const Expression a = spec.a;
  const Expression c = spec.c;
  const double n = spec.dimension;
  CoefficientMap map;
  if (spec.variant == Variant::isotropic) {
    map.b0 = [a, c, n](double l) { return n * (a.eval(l) + 2.0 * c.eval(l)); };
    map.b1 = [a, c](double l) { return a.eval(l) + 4.0 * c.eval(l); };
  } else {
    map.b0 = [a, c, n](double l) { return n * a.eval(l) + (n * n + n) * c.eval(l); };
    map.b1 = [a, c, n](double l) { return a.eval(l) + (2.0 * n + 1.0) * c.eval(l); };
  }
  map.c = [c](double l) { return c.eval(l); };
  return map;
}

IntegratedCoefficients::IntegratedCoefficients(const CoefficientSpec& spec, double quad_tol)
    : quad_tol_(quad_tol) {
  if (!(quad_tol > 0.0)) throw ConfigError("quad_tol must be positive");
  spec.validate();

  const Expression a = spec.a;
  const Expression c = spec.c;
  const double n = spec.dimension;
  const bool iso = spec.variant == Variant::isotropic;
  // Integrands re-check positivity at every quadrature node.
  map_.b0 = [a, c, n, iso](double l) {
    double av = checked_positive(a, "a", l);
    double cv = checked_positive(c, "c", l);
    return iso ? n * (av + 2.0 * cv) : n * av + (n * n + n) * cv;
  };
  map_.b1 = [a, c, n, iso](double l) {
    double av = checked_positive(a, "a", l);
    double cv = checked_positive(c, "c", l);
    return iso ? av + 4.0 * cv : av + (2.0 * n + 1.0) * cv;
  };
  map_.c = [c](double l) { return checked_positive(c, "c", l); };

  for (auto& cache : cache_) cache.emplace(0.0, 0.0);
}

double IntegratedCoefficients::value(int which, double lambda) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_[which].find(lambda);
    if (it != cache_[which].end()) return it->second;
  }
  const auto& fn = which == 0 ? map_.b0 : which == 1 ? map_.b1 : map_.c;
  // Always integrate the full [0, lambda] so results are independent of
  // evaluation order (required for reproducible output).
  QuadratureResult res = integrate_adaptive(fn, 0.0, lambda, quad_tol_);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "coefficient integral over [0, " << lambda << "] did not reach tolerance " << quad_tol_
        << "; achieved absolute error " << res.abs_error;
    throw NumericError(msg.str());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  cache_[which].emplace(lambda, res.value);
  return res.value;
}

void IntegratedCoefficients::precompute(std::span<const double> lambdas) const {
  for (double l : lambdas) {
    beta0(l);
    beta1(l);
    gamma(l);
  }
}

}  // namespace cascade
