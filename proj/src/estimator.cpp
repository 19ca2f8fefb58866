#include "oul1/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace oul1 {

double l1_criterion(const SamplePath& x, double theta, double x0) {
  const TimeGrid& grid = x.grid;
  const double dt = grid.dt();
  double acc = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double dev = std::abs(x.values[i] - x0 * std::exp(theta * grid.point(i)));
    const bool endpoint = (i == 0) || (i + 1 == grid.size());
    acc += (endpoint ? 0.5 : 1.0) * dev;
  }
  return acc * dt;
}

namespace {

constexpr double kInvGolden = 0.61803398874989484820;  // 1/phi

struct Tracker {
  const SamplePath& x;
  double x0;
  int n_evals = 0;
  double best_theta = 0.0;
  double best_value = 0.0;
  bool has_best = false;

  double eval(double theta) {
    const double v = l1_criterion(x, theta, x0);
    ++n_evals;
    // strict improvement only, so ties keep the smaller theta seen first
    if (!has_best || v < best_value || (v == best_value && theta < best_theta)) {
      has_best = true;
      best_value = v;
      best_theta = theta;
    }
    return v;
  }
};

}  // namespace

EstimateResult minimum_l1_estimate(const SamplePath& x, const ModelParams& params,
                                   int scan_points) {
  const double lo = params.theta_lo;
  const double hi = params.theta_hi;
  if (lo > hi) throw std::invalid_argument("minimum_l1_estimate: empty search interval");
  if (scan_points < 2) throw std::invalid_argument("minimum_l1_estimate: need at least 2 scan points");

  Tracker tracker{x, params.x0};
  if (lo == hi) {
    tracker.eval(lo);
    return EstimateResult{lo, tracker.best_value, tracker.n_evals, {lo, hi}};
  }

  const double width = hi - lo;
  const double tol = 1e-7 * width;

  // Coarse scan: the criterion is not convex in theta, so locate the global
  // basin before refining.
  const double spacing = width / static_cast<double>(scan_points - 1);
  int best_idx = 0;
  double best_scan = 0.0;
  for (int j = 0; j < scan_points; ++j) {
    const double theta = (j + 1 == scan_points) ? hi : lo + spacing * j;
    const double v = tracker.eval(theta);
    if (j == 0 || v < best_scan) {
      best_scan = v;
      best_idx = j;
    }
  }

  double a = (best_idx == 0) ? lo : lo + spacing * (best_idx - 1);
  double b = (best_idx + 1 >= scan_points) ? hi : lo + spacing * (best_idx + 1);

  // Golden-section refinement; on ties keep the left interval.
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = tracker.eval(c);
  double fd = tracker.eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = tracker.eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = tracker.eval(d);
    }
  }

  return EstimateResult{tracker.best_theta, tracker.best_value, tracker.n_evals, {a, b}};
}

double solution_separation(double theta0, double x0, double delta, double horizon) {
  if (delta < 0.0) throw std::domain_error("solution_separation: delta must be >= 0");
  if (!(horizon > 0.0)) throw std::domain_error("solution_separation: horizon must be > 0");
  const auto flow_integral = [horizon](double theta) {
    return theta == 0.0 ? horizon : std::expm1(theta * horizon) / theta;
  };
  const double up = flow_integral(theta0 + delta) - flow_integral(theta0);
  const double down = flow_integral(theta0) - flow_integral(theta0 - delta);
  return std::abs(x0) * std::min(up, down);
}

}  // namespace oul1
