#pragma once

#include <vector>

#include "oul1/kernel.hpp"
#include "oul1/rng.hpp"
#include "oul1/sample_path.hpp"

namespace oul1 {

/// Exact Gaussian path sampler on a grid. The covariance matrix is factorized
/// once (restricted to coordinates with positive variance) and reused across
/// draws; zero-variance coordinates are emitted as exact zeros. Brownian
/// motion uses its closed-form triangular factor (scaled cumulative sums).
class GaussianSampler {
 public:
  GaussianSampler(const Kernel& kernel, const TimeGrid& grid);

  SamplePath draw(SeedSpec seed) const;

  const TimeGrid& grid() const { return grid_; }
  const Matrix& covariance() const { return cov_; }
  /// Jitter added to the diagonal before factorization succeeded (0 if none).
  double jitter() const { return jitter_; }

 private:
  TimeGrid grid_;
  Matrix cov_;
  std::vector<Index> active_;   // coordinates with positive variance
  Matrix chol_;                 // lower factor on the active block (empty for BM fast path)
  bool bm_closed_form_ = false;
  double bm_sqrt_dt_ = 0.0;
  double jitter_ = 0.0;
};

/// One-shot convenience draw (factorizes every call; prefer GaussianSampler in loops).
SamplePath sample_path(const Kernel& kernel, const TimeGrid& grid, SeedSpec seed);

/// Left-point Riemann-Stieltjes sum  sum_i f(t_i) (G_{t_{i+1}} - G_{t_i}).
double stieltjes_integral(const Eigen::Ref<const Vector>& integrand, const SamplePath& integrator);

/// Cumulative version: result[j] = sum_{i<j} f(t_i) (G_{t_{i+1}} - G_{t_i}),
/// result[0] = 0, on the same grid as the integrator.
Vector stieltjes_cumulative(const Eigen::Ref<const Vector>& integrand, const SamplePath& integrator);

}  // namespace oul1
