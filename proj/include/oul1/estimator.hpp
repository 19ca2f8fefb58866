#pragma once

#include <array>

#include "oul1/ou_model.hpp"
#include "oul1/sample_path.hpp"

namespace oul1 {

struct EstimateResult {
  double theta_hat;
  double objective;               // criterion value at theta_hat
  int n_evals;                    // objective evaluations spent
  std::array<double, 2> bracket;  // final golden-section bracket
};

/// L1 criterion: trapezoid quadrature of |X_t - x0 e^{theta t}| over the
/// observation grid. Nonnegative; zero iff X matches the flow at every point.
double l1_criterion(const SamplePath& x, double theta, double x0);

/// Minimum L1-norm drift estimate over the compact interval
/// [params.theta_lo, params.theta_hi]: coarse scan at `scan_points` equispaced
/// values, then golden-section refinement of the best bracket, to an absolute
/// tolerance of 1e-7 * interval width. Ties resolve toward the smallest theta.
EstimateResult minimum_l1_estimate(const SamplePath& x, const ModelParams& params,
                                   int scan_points = 200);

/// Minimal L1 distance between noise-free flows at drift separation at least
/// delta: |x0| * min(F(theta0+delta)-F(theta0), F(theta0)-F(theta0-delta))
/// with F(theta) = (e^{theta T}-1)/theta (F(0) = T). The infimum over
/// |theta - theta0| > delta is attained at the boundary because F is strictly
/// increasing. Zero at delta = 0, strictly increasing in delta.
double solution_separation(double theta0, double x0, double delta, double horizon);

}  // namespace oul1
