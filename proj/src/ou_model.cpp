#include "oul1/ou_model.hpp"

#include <cmath>
#include <stdexcept>

#include "oul1/limit_law.hpp"

namespace oul1 {

ModelParams::ModelParams(double theta0_, double x0_, double eps_, double theta_lo_,
                         double theta_hi_, double horizon_)
    : theta0(theta0_), x0(x0_), eps(eps_), theta_lo(theta_lo_), theta_hi(theta_hi_),
      horizon(horizon_) {
  if (!(horizon > 0.0)) throw std::invalid_argument("ModelParams: horizon must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("ModelParams: eps must be >= 0");
  if (x0 == 0.0) throw std::invalid_argument("ModelParams: x0 = 0 makes the drift unidentifiable");
  if (!(theta_lo <= theta0 && theta0 <= theta_hi))
    throw std::invalid_argument("ModelParams: theta0 must lie in [theta_lo, theta_hi]");
}

SamplePath deterministic_solution(double theta, double x0, const TimeGrid& grid) {
  Vector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = x0 * std::exp(theta * grid.point(i));
  return SamplePath(grid, std::move(v));
}

SamplePath simulate_x_exact(double theta0, double x0, double eps, const SamplePath& driver) {
  // X = x(theta0) + eps * Y keeps the deviation-from-flow identity exact in
  // floating point as well as in the algebra.
  const SamplePath flow = deterministic_solution(theta0, x0, driver.grid);
  const SamplePath y = limit_process_from_driver(driver, theta0);
  return SamplePath(driver.grid, flow.values + eps * y.values);
}

SamplePath simulate_x_exact(const ModelParams& params, const SamplePath& driver) {
  return simulate_x_exact(params.theta0, params.x0, params.eps, driver);
}

SamplePath simulate_x_euler(double theta0, double x0, double eps, const SamplePath& driver) {
  const TimeGrid& grid = driver.grid;
  const double dt = grid.dt();
  Vector v(grid.size());
  v[0] = x0;
  for (Index i = 0; i + 1 < grid.size(); ++i)
    v[i + 1] = v[i] + theta0 * v[i] * dt + eps * (driver.values[i + 1] - driver.values[i]);
  return SamplePath(grid, std::move(v));
}

SamplePath simulate_x_euler(const ModelParams& params, const SamplePath& driver) {
  return simulate_x_euler(params.theta0, params.x0, params.eps, driver);
}

GronwallReport gronwall_check(const ModelParams& params, const SamplePath& x,
                              const SamplePath& driver) {
  require_same_grid(x, driver, "gronwall_check");
  const SamplePath flow = deterministic_solution(params.theta0, params.x0, x.grid);
  const double lhs = (x.values - flow.values).cwiseAbs().maxCoeff();
  const double rhs =
      params.eps * std::exp(std::abs(params.theta0) * x.grid.horizon()) * driver.sup_abs();
  return GronwallReport{lhs, rhs, lhs <= rhs * (1.0 + 1e-9)};
}

}  // namespace oul1
