#pragma once

#include "oul1/sample_path.hpp"
#include "oul1/sampler.hpp"

namespace oul1 {

/// Model configuration for dX = theta0 X dt + eps dG on [0, T] with a compact
/// drift search interval. x0 = 0 is rejected: the noise-free solutions then
/// coincide for every drift and the parameter is unidentifiable.
struct ModelParams {
  double theta0;
  double x0;
  double eps;
  double theta_lo;
  double theta_hi;
  double horizon;

  ModelParams(double theta0_, double x0_, double eps_, double theta_lo_, double theta_hi_,
              double horizon_ = 1.0);
};

/// Noise-free solution x(t) = x0 * exp(theta * t) on the grid.
SamplePath deterministic_solution(double theta, double x0, const TimeGrid& grid);

/// Integrating-factor simulation X_t = e^{theta0 t} (x0 + eps * int_0^t e^{-theta0 s} dG_s),
/// with the stochastic integral taken as the left-point cumulative sum.
SamplePath simulate_x_exact(double theta0, double x0, double eps, const SamplePath& driver);
SamplePath simulate_x_exact(const ModelParams& params, const SamplePath& driver);

/// Euler scheme X_{i+1} = X_i + theta0 X_i dt + eps (G_{i+1} - G_i); the
/// independent discretization used for cross-checking the exact scheme.
SamplePath simulate_x_euler(double theta0, double x0, double eps, const SamplePath& driver);
SamplePath simulate_x_euler(const ModelParams& params, const SamplePath& driver);

/// Pathwise deviation bound sup|X - x(theta0)| <= eps * e^{|theta0| T} * sup|G|.
struct GronwallReport {
  double lhs;
  double rhs;
  bool holds;
};

GronwallReport gronwall_check(const ModelParams& params, const SamplePath& x,
                              const SamplePath& driver);

}  // namespace oul1
