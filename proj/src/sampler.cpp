#include "oul1/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace oul1 {

GaussianSampler::GaussianSampler(const Kernel& kernel, const TimeGrid& grid)
    : grid_(grid), cov_(covariance_matrix(kernel, grid)) {
  const Index m = grid.size();
  for (Index i = 0; i < m; ++i)
    if (cov_(i, i) > 0.0) active_.push_back(i);

  if (kernel.type() == KernelType::Bm) {
    // Cholesky factor of [min(t_i, t_j)] is L[i][j] = sqrt(dt), j <= i, known in
    // closed form; applying it is a scaled cumulative sum.
    bm_closed_form_ = true;
    bm_sqrt_dt_ = std::sqrt(grid.dt());
    return;
  }
  if (active_.empty()) return;  // degenerate zero process, nothing to factorize

  const Index a = static_cast<Index>(active_.size());
  Matrix block(a, a);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < a; ++j) block(i, j) = cov_(active_[static_cast<size_t>(i)], active_[static_cast<size_t>(j)]);

  const double max_diag = block.diagonal().maxCoeff();
  const double jitter_cap = 1e-6 * max_diag;
  double jitter = 0.0;
  for (;;) {
    Matrix attempt = block;
    if (jitter > 0.0) attempt.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(attempt);
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = jitter;
      return;
    }
    if (jitter == 0.0) {
      jitter = 1e-12 * max_diag;
    } else {
      jitter *= 10.0;
    }
    if (jitter > jitter_cap)
      throw std::runtime_error(
          "GaussianSampler: covariance is not positive semidefinite after jitter "
          "escalation (kernel degeneracy)");
  }
}

SamplePath GaussianSampler::draw(SeedSpec seed) const {
  Vector values = Vector::Zero(grid_.size());
  NormalStream rng(seed);
  if (bm_closed_form_) {
    double acc = 0.0;
    for (Index i = 1; i < grid_.size(); ++i) {
      acc += bm_sqrt_dt_ * rng.next();
      values[i] = acc;
    }
    return SamplePath(grid_, std::move(values));
  }
  if (!active_.empty()) {
    const Index a = static_cast<Index>(active_.size());
    const Vector z = rng.draw(a);
    const Vector x = chol_.triangularView<Eigen::Lower>() * z;
    for (Index i = 0; i < a; ++i) values[active_[static_cast<size_t>(i)]] = x[i];
  }
  return SamplePath(grid_, std::move(values));
}

SamplePath sample_path(const Kernel& kernel, const TimeGrid& grid, SeedSpec seed) {
  return GaussianSampler(kernel, grid).draw(seed);
}

double stieltjes_integral(const Eigen::Ref<const Vector>& integrand, const SamplePath& integrator) {
  if (integrand.size() != integrator.grid.size())
    throw std::invalid_argument("stieltjes_integral: integrand not on the integrator grid");
  double acc = 0.0;
  for (Index i = 0; i + 1 < integrator.grid.size(); ++i)
    acc += integrand[i] * (integrator.values[i + 1] - integrator.values[i]);
  return acc;
}

Vector stieltjes_cumulative(const Eigen::Ref<const Vector>& integrand, const SamplePath& integrator) {
  if (integrand.size() != integrator.grid.size())
    throw std::invalid_argument("stieltjes_cumulative: integrand not on the integrator grid");
  Vector out(integrator.grid.size());
  out[0] = 0.0;
  double acc = 0.0;
  for (Index i = 0; i + 1 < integrator.grid.size(); ++i) {
    acc += integrand[i] * (integrator.values[i + 1] - integrator.values[i]);
    out[i + 1] = acc;
  }
  return out;
}

}  // namespace oul1
