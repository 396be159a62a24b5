// Timing comparison between the serial reference paths and the
// OpenMP-parallel kernels: dense field evaluation and Monte-Carlo paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "cascade/oracle.hpp"
#include "cascade/parallel.hpp"
#include "cascade/solvers.hpp"

using namespace cascade;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CoefficientSpec make_spec(Variant variant, int n) {
  return CoefficientSpec{Expression::parse("1 + 0.5*sin(lambda)"),
                         Expression::parse("0.2*exp(-lambda)"), n, variant, 2.0};
}

void bench_field() {
  const int n_points = 10000;
  const int n_lambdas = 10;
  auto spec = make_spec(Variant::isotropic, 3);
  InitialCondition ic = InitialCondition::log_normal_radial(0.0, 1.0);

  std::vector<std::vector<double>> points;
  points.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double r = 0.1 + 4.0 * i / (n_points - 1);
    const double t = 0.1 + 0.8 * (i % 97) / 97.0;
    const double p = 6.28 * (i % 31) / 31.0;
    points.push_back({r * std::sin(t) * std::cos(p), r * std::sin(t) * std::sin(p),
                      r * std::cos(t)});
  }
  std::vector<double> lambdas;
  for (int i = 0; i < n_lambdas; ++i) lambdas.push_back(0.05 + 1.9 * i / (n_lambdas - 1));

  double serial_time = 0.0;
  std::vector<double> serial_values;
  for (int threads : {1, 0}) {
    SolveOptions options;
    options.threads = threads;
    Solver solver(spec, ic, options);
    const auto start = std::chrono::steady_clock::now();
    SolutionField field = solver.evaluate_field(lambdas, points);
    const double elapsed = seconds_since(start);
    const int used = resolve_threads(threads);
    std::printf("field  %d points x %d lambdas  threads=%-2d  %.3f s\n", n_points, n_lambdas,
                used, elapsed);
    if (threads == 1) {
      serial_time = elapsed;
      serial_values = field.values;
    } else {
      std::printf("  speedup %.2fx, results %s\n", serial_time / elapsed,
                  serial_values == field.values ? "bitwise identical" : "MISMATCH");
    }
  }
}

void bench_mc() {
  auto spec = make_spec(Variant::degenerate, 3);
  const LogNormalRadial density{0.0, 1.0};
  auto f = [](std::span<const double> v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };

  double serial_time = 0.0, serial_estimate = 0.0;
  for (int threads : {1, 0}) {
    oracle::MCOptions options;
    options.paths = 1000000;
    options.steps = 100;
    options.seed = 42;
    options.threads = threads;
    const auto start = std::chrono::steady_clock::now();
    auto est = oracle::mc_simulate(spec, density, f, "r", 0.5, options);
    const double elapsed = seconds_since(start);
    const int used = resolve_threads(threads);
    std::printf("mc     %ld paths x %ld steps   threads=%-2d  %.3f s\n", options.paths,
                options.steps, used, elapsed);
    if (threads == 1) {
      serial_time = elapsed;
      serial_estimate = est.estimate;
    } else {
      std::printf("  speedup %.2fx, estimates %s\n", serial_time / elapsed,
                  serial_estimate == est.estimate ? "bitwise identical" : "MISMATCH");
    }
  }
}

}  // namespace

int main() {
  bench_field();
  bench_mc();
  return 0;
}
