#pragma once

#include <functional>
#include <vector>

namespace cascade {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // achieved error estimate
  bool converged = true;
  long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) bisection on [a, b] to absolute tolerance.
// Does not throw; inspect `converged` and `abs_error`.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth = 48);

// Fixed rule on [-1, 1] (or the whole line for Hermite).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int m);                        // weight 1 on [-1, 1]
GaussRule gauss_jacobi_symmetric(int m, double alpha);  // weight (1-x^2)^alpha on [-1, 1]

// Nodes/weights for the weight e^{-u^2} on the whole real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

GaussHermiteRule gauss_hermite(int m);

}  // namespace cascade
