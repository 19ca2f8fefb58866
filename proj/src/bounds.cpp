#include "oul1/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oul1/estimator.hpp"
#include "oul1/sampler.hpp"

namespace oul1 {

MetricProfile::MetricProfile(const Kernel& kernel, const TimeGrid& grid) : grid_(grid) {
  const Matrix cov = covariance_matrix(kernel, grid);
  const Index m = grid.size();
  d_ = Matrix::Zero(m, m);
  sup_variance_ = cov.diagonal().maxCoeff();
  min_positive_ = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < i; ++j) {
      const double v = std::sqrt(std::max(0.0, cov(i, i) + cov(j, j) - 2.0 * cov(i, j)));
      d_(i, j) = v;
      d_(j, i) = v;
      if (v > 0.0) {
        min_positive_ = std::min(min_positive_, v);
      } else {
        has_zero_offdiag_ = true;
      }
    }
  }
  if (!std::isfinite(min_positive_)) min_positive_ = 0.0;

  lag_sup_ = Vector::Zero(m);
  for (Index lag = 1; lag < m; ++lag) {
    double sup = 0.0;
    for (Index i = 0; i + lag < m; ++i) sup = std::max(sup, d_(i, i + lag));
    lag_sup_[lag] = std::max(sup, lag_sup_[lag - 1]);
    if (!(lag_sup_[lag] > lag_sup_[lag - 1])) modulus_strict_ = false;
  }
  diameter_ = lag_sup_[m - 1];
}

double MetricProfile::modulus(double eps) const {
  if (eps < 0.0 || eps > grid_.horizon() * (1.0 + 1e-12))
    throw std::domain_error("MetricProfile::modulus: eps outside [0, T]");
  const Index lag =
      std::min<Index>(grid_.steps(), static_cast<Index>(std::floor(eps / grid_.dt() + 1e-12)));
  return lag_sup_[lag];
}

std::pair<double, double> MetricProfile::holder_constants(double exponent) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const Index m = grid_.size();
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < i; ++j) {
      const double gap = std::pow(grid_.point(i) - grid_.point(j), exponent);
      const double ratio = d_(i, j) / gap;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {lo, hi};
}

double berman_q(const MetricProfile& profile, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("berman_q: delta must be > 0");
  // The grid modulus is a step function of its argument, so the y-integral is
  // a finite sum over the lag thresholds a_k = sqrt(log(delta / (k dt))):
  // value lag_sup[k] on (a_{k+1}, a_k], saturating at the diameter for
  // arguments beyond the horizon.
  const Index n = profile.grid().steps();
  const double dt = profile.grid().dt();
  const auto threshold = [&](Index k) {
    const double arg = delta / (static_cast<double>(k) * dt);
    return arg <= 1.0 ? 0.0 : std::sqrt(std::log(arg));
  };
  double q = profile.modulus(profile.grid().horizon()) * threshold(n);
  double a_next = threshold(n);
  for (Index k = n - 1; k >= 1; --k) {
    const double a_k = threshold(k);
    const double lag_value = profile.modulus(static_cast<double>(k) * dt);
    q += lag_value * (a_k - a_next);
    a_next = a_k;
  }
  return q;
}

double berman_q_inverse(const MetricProfile& profile, double x) {
  if (!(x > 0.0)) throw std::domain_error("berman_q_inverse: outside the range of Q");
  if (!profile.modulus_strictly_increasing())
    throw std::domain_error("berman_q_inverse: modulus is not strictly increasing");
  double lo = profile.grid().dt();  // Q vanishes at and below one grid step
  double hi = std::max(2.0 * lo, profile.grid().horizon());
  int guard = 0;
  while (berman_q(profile, hi) < x) {
    hi *= 2.0;
    if (++guard > 200) throw std::domain_error("berman_q_inverse: outside the range of Q");
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (berman_q(profile, mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double berman_tail_bound(const MetricProfile& profile, double eps, double c) {
  if (!(eps > 0.0)) throw std::domain_error("berman_tail_bound: eps must be > 0");
  const double qinv = berman_q_inverse(profile, 1.0 / eps);
  return c / qinv * std::exp(-eps * eps / (2.0 * profile.sup_variance()));
}

namespace {

// Is there a grid midpoint of [first, last] within distance eps of every
// covered point? Both rounding choices of the midpoint index are admitted.
bool run_coverable(const Matrix& d, Index first, Index last, double eps) {
  for (const Index mid : {(first + last) / 2, (first + last + 1) / 2}) {
    bool ok = true;
    for (Index i = first; i <= last; ++i) {
      if (d(i, mid) > eps) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

Index covering_number(const MetricProfile& profile, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("covering_number: eps must be > 0");
  const Matrix& d = profile.distances();
  const Index m = profile.grid().size();
  Index count = 0;
  Index first = 0;
  while (first < m) {
    Index last = first;  // a single point is always coverable (d(i,i) = 0)
    while (last + 1 < m && run_coverable(d, first, last + 1, eps)) ++last;
    ++count;
    first = last + 1;
  }
  return count;
}

double entropy_integral(const MetricProfile& profile) {
  return entropy_integral(profile, profile.min_positive_distance());
}

double entropy_integral(const MetricProfile& profile, double lower_limit) {
  if (!profile.pairwise_nondegenerate())
    throw std::domain_error("entropy_integral: profile has coincident grid points (degenerate)");
  if (!(lower_limit > 0.0))
    throw std::domain_error("entropy_integral: lower limit must be positive");
  const double lo = lower_limit;
  const double hi = profile.diameter() / 2.0;
  if (hi <= lo) return 0.0;
  // Midpoint rule; the integrand sqrt(log N(eps)) is a bounded step function.
  const int panels = 256;
  const double h = (hi - lo) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double eps = lo + (p + 0.5) * h;
    const double n_cover = static_cast<double>(covering_number(profile, eps));
    acc += std::sqrt(std::log(std::max(1.0, n_cover)));
  }
  return acc * h;
}

std::array<double, 2> borovkov_sup_mean_bounds(double hurst, double c1, double c2) {
  if (!(hurst > 0.0 && hurst <= 1.0))
    throw std::invalid_argument("borovkov_sup_mean_bounds: H must be in (0, 1]");
  if (!(c1 > 0.0 && c1 <= c2))
    throw std::invalid_argument("borovkov_sup_mean_bounds: need 0 < c1 <= c2");
  const double root_h = std::sqrt(hurst);
  return {c1 / (5.0 * root_h), 16.3 * c2 / root_h};
}

double gaussian_sup_tail_bound(double sigma2, double mean_sup, double x) {
  if (!(sigma2 > 0.0)) throw std::domain_error("gaussian_sup_tail_bound: sigma^2 must be > 0");
  if (!(x > mean_sup))
    throw std::domain_error("gaussian_sup_tail_bound: bound only holds for x > mean");
  const double gap = x - mean_sup;
  return std::exp(-gap * gap / (2.0 * sigma2));
}

double gaussian_abs_sup_tail_bound(double sigma2, double mean_sup, double x) {
  return 2.0 * gaussian_sup_tail_bound(sigma2, mean_sup, x);
}

SupMeanEstimate estimate_sup_mean(const Kernel& kernel, const TimeGrid& grid, Index draws,
                                  SeedSpec seed) {
  if (draws < 100) throw std::invalid_argument("estimate_sup_mean: need at least 100 draws");
  const GaussianSampler sampler(kernel, grid);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Index i = 0; i < draws; ++i) {
    const double sup =
        sampler.draw(seed.with_stream(seed.stream_index + static_cast<std::uint64_t>(i))).sup();
    sum += sup;
    sum_sq += sup * sup;
  }
  const double mean = sum / static_cast<double>(draws);
  const double var = std::max(0.0, (sum_sq - static_cast<double>(draws) * mean * mean) /
                                       static_cast<double>(draws - 1));
  return SupMeanEstimate{mean, std::sqrt(var / static_cast<double>(draws)), draws};
}

double consistency_error_bound(const ModelParams& params, double delta, double eps,
                               double mean_sup, double sigma2) {
  if (eps == 0.0) return 0.0;
  const double gap = solution_separation(params.theta0, params.x0, delta, params.horizon);
  const double level =
      std::exp(-std::abs(params.theta0) * params.horizon) * gap / (2.0 * eps);
  if (!(level > mean_sup) || !(sigma2 > 0.0)) return 1.0;  // vacuous regime
  return std::min(1.0, gaussian_abs_sup_tail_bound(sigma2, mean_sup, level));
}

}  // namespace oul1
