#include "oul1/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "oul1/sampler.hpp"

namespace oul1 {

SamplePath limit_process_from_driver(const SamplePath& driver, double theta0) {
  const TimeGrid& grid = driver.grid;
  Vector integrand(grid.size());
  for (Index i = 0; i < grid.size(); ++i) integrand[i] = std::exp(-theta0 * grid.point(i));
  Vector y = stieltjes_cumulative(integrand, driver);
  for (Index i = 0; i < grid.size(); ++i) y[i] *= std::exp(theta0 * grid.point(i));
  return SamplePath(grid, std::move(y));
}

SamplePath sample_limit_process(const Kernel& kernel, double theta0, const TimeGrid& grid,
                                SeedSpec seed) {
  return limit_process_from_driver(sample_path(kernel, grid, seed), theta0);
}

SamplePath drift_sensitivity(double theta0, double x0, const TimeGrid& grid) {
  Vector h(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const double t = grid.point(i);
    h[i] = x0 * t * std::exp(theta0 * t);
  }
  return SamplePath(grid, std::move(h));
}

LimitInstance make_limit_instance(SamplePath process, double theta0, double x0) {
  SamplePath direction = drift_sensitivity(theta0, x0, process.grid);
  return LimitInstance{std::move(process), std::move(direction)};
}

double limit_minimizer(const LimitInstance& instance) {
  require_same_grid(instance.process, instance.direction, "limit_minimizer");
  const TimeGrid& grid = instance.process.grid;
  const double dt = grid.dt();

  struct Entry {
    double ratio;
    double weight;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(grid.size()));
  double total = 0.0;
  for (Index i = 1; i < grid.size(); ++i) {
    const double h = instance.direction.values[i];
    if (h == 0.0) continue;
    const double trap = (i + 1 == grid.size()) ? dt / 2.0 : dt;
    const double w = trap * std::abs(h);
    entries.push_back(Entry{instance.process.values[i] / h, w});
    total += w;
  }
  if (total <= 0.0)
    throw std::invalid_argument("limit_minimizer: direction vanishes on the whole grid");

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.ratio < b.ratio; });
  // Smallest ratio at which the cumulative weight reaches half the total: the
  // left edge of the minimizing set of the piecewise-linear objective.
  const double half = total / 2.0;
  double acc = 0.0;
  for (const Entry& e : entries) {
    acc += e.weight;
    if (acc >= half) return e.ratio;
  }
  return entries.back().ratio;  // unreachable barring rounding
}

double limit_covariance_formula(double theta0, double s, double t) {
  if (s < 0.0 || t < 0.0) throw std::domain_error("limit_covariance_formula: negative time");
  const auto factor = [theta0](double v) {
    return theta0 == 0.0 ? v : std::expm1(theta0 * v) / theta0;
  };
  return factor(t) * factor(s);
}

Matrix limit_covariance_empirical(const Kernel& kernel, double theta0, const TimeGrid& grid,
                                  Index draws, SeedSpec seed) {
  if (draws < 2) throw std::invalid_argument("limit_covariance_empirical: need at least 2 draws");
  const GaussianSampler sampler(kernel, grid);
  const Index m = grid.size();
  Vector mean = Vector::Zero(m);
  Matrix second = Matrix::Zero(m, m);
  for (Index i = 0; i < draws; ++i) {
    const SamplePath y = limit_process_from_driver(
        sampler.draw(seed.with_stream(seed.stream_index + static_cast<std::uint64_t>(i))), theta0);
    mean += y.values;
    second.selfadjointView<Eigen::Lower>().rankUpdate(y.values);
  }
  mean /= static_cast<double>(draws);
  Matrix cov = Matrix(second.selfadjointView<Eigen::Lower>());
  cov -= static_cast<double>(draws) * mean * mean.transpose();
  cov /= static_cast<double>(draws - 1);
  return cov;
}

}  // namespace oul1
