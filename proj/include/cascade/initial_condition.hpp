#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cascade/coefficients.hpp"
#include "cascade/expression.hpp"
#include "cascade/harmonics.hpp"

namespace cascade {

// phi(v) = |v|^p
struct RadialPower {
  double p = 0.0;
};

// phi(v) = |v|^p Y_{l,k}(direction)
struct HarmonicMonomial {
  double p = 0.0;
  int l = 0;
  int k = 1;
};

// One term of a finite harmonic series; `radial` is an expression in the
// radius variable "v".
struct SeriesMode {
  int l = 0;
  int k = 1;
  Expression radial;
};

struct HarmonicSeries {
  std::vector<SeriesMode> modes;
  double p_max = 8.0;
};

// Normalized radial density with log-normally distributed radius:
// phi(v) = exp(-(ln|v| - mu)^2 / (2 sigma^2)) / (area(n) sigma sqrt(2 pi) |v|^n),
// so that the integral over R^n is 1 and moments have closed forms.
struct LogNormalRadial {
  double mu = 0.0;
  double sigma = 1.0;
};

double log_normal_radial_density(const LogNormalRadial& d, double r, int n);

// E |v|^p under the density above: e^{p mu + p^2 sigma^2 / 2}.
double log_normal_radial_moment(const LogNormalRadial& d, double p);

enum class CoordsKind { cartesian, spherical };

// phi given as an expression: variables v1, v2, v3 (cartesian) or v, theta,
// phi (spherical). For n = 3 theta is the polar angle from the v3 axis; for
// zonal problems with n >= 4 it is the angle from the v1 axis.
struct GeneralExpression {
  Expression expr;
  CoordsKind coords = CoordsKind::cartesian;
  double p_max = 8.0;
};

// The Cauchy datum phi. Immutable; evaluation is pure.
class InitialCondition {
 public:
  using Storage =
      std::variant<RadialPower, HarmonicMonomial, HarmonicSeries, LogNormalRadial, GeneralExpression>;

  explicit InitialCondition(Storage s) : storage_(std::move(s)) {}

  static InitialCondition radial_power(double p) { return InitialCondition(RadialPower{p}); }
  static InitialCondition harmonic_monomial(double p, int l, int k) {
    return InitialCondition(HarmonicMonomial{p, l, k});
  }
  static InitialCondition harmonic_series(std::vector<SeriesMode> modes, double p_max = 8.0) {
    return InitialCondition(HarmonicSeries{std::move(modes), p_max});
  }
  static InitialCondition log_normal_radial(double mu, double sigma) {
    return InitialCondition(LogNormalRadial{mu, sigma});
  }
  static InitialCondition general_expression(Expression e, CoordsKind coords, double p_max = 8.0) {
    return InitialCondition(GeneralExpression{std::move(e), coords, p_max});
  }

  // Pointwise value; the dimension is v.size().
  double operator()(std::span<const double> v) const;

  // Growth-bound exponent: |phi(v)| <= C (1 + |v|)^{p_max}, also used to
  // budget floating-point exponents under log-scaled arguments.
  double p_max() const;

  bool radial() const;

  // True when the harmonic decomposition is known in closed form (everything
  // except GeneralExpression).
  bool has_exact_modes() const;
  std::vector<ExpansionTerm> exact_modes(int n) const;

  const LogNormalRadial* as_log_normal() const {
    return std::get_if<LogNormalRadial>(&storage_);
  }
  const GeneralExpression* as_expression() const {
    return std::get_if<GeneralExpression>(&storage_);
  }
  const Storage& storage() const { return storage_; }

  // Checks the (n, variant) combination: mode indices in range, zonal-only
  // restriction for n >= 4, evenness for n = 1 isotropic problems.
  void validate_for(int n, Variant variant) const;

 private:
  Storage storage_;
};

}  // namespace cascade
