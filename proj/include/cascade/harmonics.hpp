#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// Eigenvalue of the sphere Laplacian on degree-l harmonics in R^n: -l(l+n-2).
double sphere_eigenvalue(int l, int n);

// Dimension of the space of degree-l harmonic homogeneous polynomials in n
// variables: C(n+l-1, l) - C(n+l-3, l-2).
long long degeneracy(int l, int n);

// Real orthonormal spherical harmonic on S^2 (n = 3), conventional polar axis
// v3: theta = angle from v3, phi = azimuth in the (v1, v2) plane. Orthonormal
// under the surface measure sin(theta) dtheta dphi.
double eval_Y3(int l, int m, double theta, double phi);

// Zonal (first-polar-angle only) harmonic of degree l on S^{n-1}, normalized
// to unit L2 norm on the sphere; theta1 is the angle from the zonal axis.
double zonal_harmonic(int l, int n, double theta1);

// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

// Hyperspherical coordinates (radius, theta1..theta_{n-1}) with
//   v1 = r cos t1, v2 = r sin t1 cos t2, ..., vn = r sin t1 ... sin t_{n-1};
// t1..t_{n-2} in [0, pi], t_{n-1} in [0, 2 pi).
struct SphericalPoint {
  double radius = 0.0;
  std::vector<double> angles;

  std::vector<double> to_cartesian() const;
  static SphericalPoint from_cartesian(std::span<const double> v);
};

// One member of the orthonormal harmonic basis: degree l, within-degree index
// k in [1, d_{l,n}]. For n = 3, k maps to the order m = k - l - 1.
struct HarmonicMode {
  int l = 0;
  int k = 1;
  int n = 3;
  double eigenvalue = 0.0;
  long long degeneracy = 1;
};

HarmonicMode make_mode(int l, int k, int n);

// Pointwise basis evaluation at a unit direction. Supported: all modes for
// n in {2, 3}; only the zonal mode (k = 1) for n >= 4.
double eval_mode(const HarmonicMode& mode, std::span<const double> direction);

// Quadrature on the unit sphere S^{n-1}: exact for polynomial integrands of
// total degree <= order. General points for n in {2, 3}; for n >= 4 the rule
// is valid for zonal integrands only (zonal_only is set).
struct SphereQuadrature {
  std::vector<SphericalPoint> points;
  std::vector<double> weights;
  std::vector<std::vector<double>> directions;  // cached Cartesian unit vectors
  int order = 0;
  bool zonal_only = false;
};

SphereQuadrature sphere_quadrature(int n, int order);

// Harmonic expansion of a function of (radius, direction): per-mode radial
// coefficient functions plus a truncation-tail estimate.
struct ExpansionTerm {
  HarmonicMode mode;
  std::function<double(double)> radial;  // r -> coefficient
};

struct HarmonicExpansion {
  std::vector<ExpansionTerm> terms;
  int l_max = 0;
  double tail_estimate = 0.0;
};

// Projects g (a function of the Cartesian point) onto all supported modes of
// degree <= l_max by sphere quadrature. The radial coefficient functions
// evaluate lazily at any radius; `radii` only anchors the tail estimate
// (the residual L2 norm of g minus its truncation, maximized over radii).
// `order` < 0 picks 2*l_max + 2; an explicit order < 2*l_max is an error.
HarmonicExpansion project(const std::function<double(std::span<const double>)>& g, int n,
                          int l_max, std::span<const double> radii, int order = -1);

}  // namespace cascade
