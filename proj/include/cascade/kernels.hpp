#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cascade/quadrature.hpp"

namespace cascade {

// Scaling action of the dilation exponential: returns v -> f(v * e^beta).
std::function<double(std::span<const double>)> dilate(
    std::function<double(std::span<const double>)> f, double beta);

// Below gamma_epsilon the Gaussian log-average degenerates to its delta
// limit f(v e^shift); the kernel width no longer resolves any variation.
inline constexpr double kGammaEpsilon = 1e-13;

// (1 / sqrt(4 pi gamma)) * Integral e^{-s^2 / 4 gamma} f(v e^{shift + s}) ds,
// evaluated by Gauss-Hermite after s = 2 sqrt(gamma) u. `f_log` receives the
// log-scale t and must return f(v e^t) for the caller's fixed v.
// Throws NumericError if f is non-finite at a quadrature node.
double gaussian_log_average(const std::function<double(double)>& f_log, double gamma, double shift,
                            const GaussHermiteRule& rule);

// Point-based overload matching the operator form: averages f over
// log-normally scaled copies of v.
double gaussian_log_average(const std::function<double(std::span<const double>)>& f, double gamma,
                            double shift, const GaussHermiteRule& rule, std::span<const double> v);

// Spectral multiplier of the sphere heat flow on a degree-l mode:
// e^{gamma * lambda_l} = e^{-gamma l (l + n - 2)}.
double heat_on_sphere_factor(int l, int n, double gamma);

}  // namespace cascade
