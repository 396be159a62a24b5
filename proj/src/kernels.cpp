#include "cascade/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/errors.hpp"
#include "cascade/harmonics.hpp"

namespace cascade {

std::function<double(std::span<const double>)> dilate(
    std::function<double(std::span<const double>)> f, double beta) {
  const double scale = std::exp(beta);
  return [f = std::move(f), scale](std::span<const double> v) {
    std::vector<double> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = scale * v[i];
    return f(scaled);
  };
}

double gaussian_log_average(const std::function<double(double)>& f_log, double gamma, double shift,
                            const GaussHermiteRule& rule) {
  if (gamma < 0.0) throw NumericError("gaussian_log_average requires gamma >= 0");
  if (gamma <= kGammaEpsilon) return f_log(shift);
  const double width = 2.0 * std::sqrt(gamma);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    double fi = f_log(shift + width * rule.nodes[i]);
    if (!std::isfinite(fi)) {
      std::ostringstream msg;
      msg << "integrand not finite at quadrature node u = " << rule.nodes[i]
          << " (log-scale " << shift + width * rule.nodes[i] << ")";
      throw NumericError(msg.str());
    }
    acc += rule.weights[i] * fi;
  }
  return acc * inv_sqrt_pi;
}

double gaussian_log_average(const std::function<double(std::span<const double>)>& f, double gamma,
                            double shift, const GaussHermiteRule& rule, std::span<const double> v) {
  std::vector<double> scaled(v.size());
  auto f_log = [&](double t) {
    const double scale = std::exp(t);
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = scale * v[i];
    return f(scaled);
  };
  return gaussian_log_average(f_log, gamma, shift, rule);
}

double heat_on_sphere_factor(int l, int n, double gamma) {
  if (gamma < 0.0) throw NumericError("heat_on_sphere_factor requires gamma >= 0");
  return std::exp(gamma * sphere_eigenvalue(l, n));
}

}  // namespace cascade
