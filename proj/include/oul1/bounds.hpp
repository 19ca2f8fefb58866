#pragma once

#include <array>
#include <utility>

#include "oul1/kernel.hpp"
#include "oul1/ou_model.hpp"
#include "oul1/rng.hpp"

namespace oul1 {

/// Increment metric d(s,t) = sqrt(E (G_t - G_s)^2) of a kernel on a grid,
/// together with the derived quantities the maximal inequalities consume.
class MetricProfile {
 public:
  MetricProfile(const Kernel& kernel, const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  const Matrix& distances() const { return d_; }
  double diameter() const { return diameter_; }
  /// sup_t E[G_t^2] over the grid.
  double sup_variance() const { return sup_variance_; }
  /// Smallest positive off-diagonal distance; 0 if some distinct points coincide.
  double min_positive_distance() const { return min_positive_; }
  bool pairwise_nondegenerate() const { return min_positive_ > 0.0 && !has_zero_offdiag_; }
  /// The modulus must be strictly increasing for Berman's inversion to apply.
  bool modulus_strictly_increasing() const { return modulus_strict_; }

  /// rho(eps) = sup of d(s,t) over grid pairs with |s - t| <= eps.
  double modulus(double eps) const;

  /// Empirical Hoelder constants: (min, max) of d(s,t)/|s-t|^exponent over
  /// distinct grid pairs. Both equal 1 for fractional Brownian motion.
  std::pair<double, double> holder_constants(double exponent) const;

 private:
  TimeGrid grid_;
  Matrix d_;
  Vector lag_sup_;  // lag_sup_[k] = sup of d over pairs at time lag <= k*dt
  double diameter_ = 0.0;
  double sup_variance_ = 0.0;
  double min_positive_ = 0.0;
  bool has_zero_offdiag_ = false;
  bool modulus_strict_ = true;
};

/// Berman's entropy-type transform Q(delta) = int_0^inf rho(delta e^{-y^2}) dy,
/// integrated in closed form against the grid step-function modulus.
double berman_q(const MetricProfile& profile, double delta);

/// Inverse of Q by bisection (relative tolerance 1e-10). Requires x > 0 and a
/// strictly increasing modulus.
double berman_q_inverse(const MetricProfile& profile, double x);

/// Berman tail bound C * Q^{-1}(1/eps)^{-1} * exp(-eps^2 / (2 sigma^2)).
/// The constant C is not pinned by the theorem; callers pass their own
/// (default 1) and treat the value as a diagnostic.
double berman_tail_bound(const MetricProfile& profile, double eps, double c = 1.0);

/// Minimal number of closed d-balls of radius eps covering the grid, by a
/// greedy left-to-right sweep that extends each interval as long as some grid
/// midpoint keeps every covered point within distance eps.
Index covering_number(const MetricProfile& profile, double eps);

/// Dudley-type entropy integral int sqrt(log N(eps)) deps over
/// (min positive distance, diameter/2]. The overload with an explicit lower
/// limit evaluates the same integrand over (lower_limit, diameter/2], which
/// lets a refined grid be compared on a common window (the default lower limit
/// is the grid's own resolution floor and shrinks under refinement).
double entropy_integral(const MetricProfile& profile);
double entropy_integral(const MetricProfile& profile, double lower_limit);

/// Two-sided bounds on E[sup G] for processes with c1 |t-s|^H <= d <= c2 |t-s|^H:
/// [c1 / (5 sqrt(H)), 16.3 c2 / sqrt(H)].
std::array<double, 2> borovkov_sup_mean_bounds(double hurst, double c1, double c2);

/// Concentration of the supremum around its mean m with scale sigma^2:
/// P(sup G >= x) <= exp(-(x - m)^2 / (2 sigma^2)) for x > m.
double gaussian_sup_tail_bound(double sigma2, double mean_sup, double x);
/// Two-sided version, a factor 2 on the same exponent.
double gaussian_abs_sup_tail_bound(double sigma2, double mean_sup, double x);

struct SupMeanEstimate {
  double mean;
  double std_error;
  Index draws;
};

/// Monte Carlo estimate of E[sup_t G_t] over the grid (draw i consumes stream
/// seed.stream_index + i). Requires at least 100 draws.
SupMeanEstimate estimate_sup_mean(const Kernel& kernel, const TimeGrid& grid, Index draws,
                                  SeedSpec seed);

/// Explicit finite-noise bound on P(|theta_hat - theta0| > delta):
/// 2 exp(-(u - m)^2 / (2 sigma^2)) with u = e^{-|theta0| T} g(delta) / (2 eps),
/// valid once u > m; returns 1 (vacuous) otherwise and 0 in the eps -> 0 limit.
double consistency_error_bound(const ModelParams& params, double delta, double eps,
                               double mean_sup, double sigma2);

}  // namespace oul1
