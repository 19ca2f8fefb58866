#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "oul1/bounds.hpp"
#include "oul1/estimator.hpp"

using namespace oul1;

namespace {

MetricProfile fbm_profile(double hurst, Index n = 256) {
  return MetricProfile(Kernel::fbm(hurst), TimeGrid(1.0, n));
}

}  // namespace

TEST_CASE("metric profile basics") {
  const MetricProfile p = fbm_profile(0.7, 64);
  const Matrix& d = p.distances();
  CHECK(d.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(d == d.transpose().eval());
  CHECK(p.sup_variance() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.diameter() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.pairwise_nondegenerate());
  CHECK(p.modulus_strictly_increasing());

  // triangle inequality on all triples
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.rows(); ++j)
      for (Index k = 0; k < d.rows(); ++k)
        CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-9);
}

TEST_CASE("modulus of continuity on the grid") {
  const MetricProfile p = fbm_profile(0.7, 128);
  const double dt = 1.0 / 128.0;
  CHECK(p.modulus(0.0) == 0.0);
  CHECK(p.modulus(1.0) == p.diameter());
  // stationary increments: the lag-k sup is exactly (k dt)^H
  for (const Index k : {1, 5, 64, 128})
    CHECK(p.modulus(k * dt) == doctest::Approx(std::pow(k * dt, 0.7)).epsilon(1e-12));
  // monotone between lag multiples
  CHECK(p.modulus(2.5 * dt) == p.modulus(2.0 * dt));
  CHECK_THROWS_AS(p.modulus(1.5), std::domain_error);
}

TEST_CASE("berman transform matches the closed form for fbm") {
  // continuum rho(eps) = eps^H gives Q(delta) = delta^H * sqrt(pi/H) / 2
  const MetricProfile p = fbm_profile(0.5, 2048);
  const double q1 = berman_q(p, 1.0);
  CHECK(std::abs(q1 - 1.2533141373155001) <= 0.05);
  const double q_small = berman_q(p, 0.25);
  CHECK(std::abs(q_small - std::sqrt(0.25) * 1.2533141373155001) <= 0.05);
  CHECK(berman_q(p, 0.5) < berman_q(p, 1.0));
  CHECK_THROWS_AS(berman_q(p, 0.0), std::domain_error);
}

TEST_CASE("berman inverse round trip") {
  const MetricProfile p = fbm_profile(0.5, 512);
  for (const double delta : {0.1, 1.0}) {
    const double q = berman_q(p, delta);
    const double back = berman_q_inverse(p, q);
    CHECK(std::abs(berman_q(p, back) - q) <= 1e-8);
    CHECK(back == doctest::Approx(delta).epsilon(1e-6));
  }
  CHECK_THROWS_AS(berman_q_inverse(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(berman_q_inverse(p, -1.0), std::domain_error);
}

TEST_CASE("berman tail bound diagnostics") {
  const MetricProfile p = fbm_profile(0.7, 256);
  // sigma = 1: the exponential factor at eps = 2 is e^{-2}
  const double b2 = berman_tail_bound(p, 2.0);
  const double prefactor = 1.0 / berman_q_inverse(p, 0.5);
  CHECK(b2 == doctest::Approx(prefactor * 0.1353352832366127).epsilon(1e-9));
  // decreasing in eps once the exponential dominates
  double prev = berman_tail_bound(p, 1.5);
  for (const double eps : {2.0, 2.5, 3.0}) {
    const double b = berman_tail_bound(p, eps);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("degenerate profiles are flagged and rejected where required") {
  const TimeGrid grid(1.0, 2);
  Vector times(3);
  times << 0.0, 0.5, 1.0;
  Matrix cov(3, 3);
  // G_{0.5} == G_1 almost surely: off-diagonal distance 0 between distinct points
  cov << 1, 1, 1, 1, 1, 1, 1, 1, 1;
  const MetricProfile p(Kernel::tabulated(times, cov), grid);
  CHECK(!p.pairwise_nondegenerate());
  CHECK(!p.modulus_strictly_increasing());
  CHECK_THROWS_AS(entropy_integral(p), std::domain_error);
  CHECK_THROWS_AS(berman_q_inverse(p, 0.5), std::domain_error);
}

TEST_CASE("covering numbers: full-range ball and the linear-metric case") {
  const MetricProfile fbm = fbm_profile(0.5, 256);
  CHECK(covering_number(fbm, fbm.diameter()) == 1);
  CHECK(covering_number(fbm, 2.0 * fbm.diameter()) == 1);
  CHECK(covering_number(fbm, 0.5) == 2);

  const TimeGrid grid(1.0, 256);
  const MetricProfile line(oracle::line_process_kernel(grid), grid);
  CHECK(covering_number(line, 0.25) == 2);
  // a single centered ball of radius D/2 covers the linear metric, so the
  // entropy integrand vanishes at its upper limit
  CHECK(covering_number(line, line.diameter() / 2.0) == 1);
}

TEST_CASE("covering numbers track the closed-form ball count for fbm") {
  for (const double hurst : {0.5, 0.8}) {
    const TimeGrid grid(1.0, 256);
    const MetricProfile p(Kernel::fbm(hurst), grid);
    double prev = std::numeric_limits<double>::infinity();
    for (const double eps : {0.3, 0.4, 0.5, 0.6, 0.8}) {
      const Index greedy = covering_number(p, eps);
      const double ball_width = 2.0 * std::pow(eps, 1.0 / hurst);
      const Index closed_form = static_cast<Index>(std::ceil(1.0 / ball_width));
      CHECK(std::abs(static_cast<double>(greedy - closed_form)) <= 1.0);
      CHECK(static_cast<double>(greedy) <= prev);  // nonincreasing in eps
      prev = static_cast<double>(greedy);
    }
  }
}

TEST_CASE("entropy integral: finite, refinement-stable, monotone in H") {
  const MetricProfile coarse_profile = fbm_profile(0.5, 256);
  const MetricProfile fine_profile = fbm_profile(0.5, 1024);
  const double coarse = entropy_integral(coarse_profile);
  CHECK(std::isfinite(coarse));
  CHECK(coarse > 0.0);
  // evaluated over the common window, the covering computation is stable under
  // refinement; the full fine-grid value additionally picks up the mass below
  // the coarse resolution floor
  const double fine_common = entropy_integral(fine_profile, coarse_profile.min_positive_distance());
  CHECK(std::abs(fine_common - coarse) <= 0.02 * coarse);
  const double fine_full = entropy_integral(fine_profile);
  CHECK(fine_full > fine_common);

  const double smoother = entropy_integral(fbm_profile(0.8, 256));
  CHECK(smoother < coarse);
}

TEST_CASE("borovkov sandwich values and validation") {
  const auto b = borovkov_sup_mean_bounds(0.25, 1.0, 1.0);
  CHECK(b[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(32.6).epsilon(1e-12));
  const auto unit = borovkov_sup_mean_bounds(1.0, 1.0, 1.0);
  CHECK(unit[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(unit[1] == doctest::Approx(16.3).epsilon(1e-12));
  CHECK_THROWS_AS(borovkov_sup_mean_bounds(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(borovkov_sup_mean_bounds(0.5, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(borovkov_sup_mean_bounds(0.5, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("holder constants are unity for fbm") {
  const MetricProfile p = fbm_profile(0.7, 64);
  const auto [c1, c2] = p.holder_constants(0.7);
  CHECK(c1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("MC sup mean lies in the sandwich for fbm") {
  const TimeGrid grid(1.0, 128);
  const SupMeanEstimate m = estimate_sup_mean(Kernel::fbm(0.7), grid, 2000, SeedSpec{71, 0});
  const auto b = borovkov_sup_mean_bounds(0.7, 1.0, 1.0);
  CHECK(m.mean >= b[0]);
  CHECK(m.mean <= b[1]);
}

TEST_CASE("gaussian sup tail bound") {
  CHECK(gaussian_sup_tail_bound(1.0, 0.5, 0.5 + 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gaussian_sup_tail_bound(1.0, 0.5, 1.5) ==
        doctest::Approx(0.6065306597126334).epsilon(1e-12));
  CHECK(gaussian_abs_sup_tail_bound(1.0, 0.5, 1.5) ==
        doctest::Approx(2.0 * 0.6065306597126334).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_sup_tail_bound(1.0, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(gaussian_sup_tail_bound(0.0, 0.5, 1.0), std::domain_error);
  double prev = 1.0;
  for (const double x : {0.7, 1.0, 1.5, 2.5}) {
    const double b = gaussian_sup_tail_bound(1.0, 0.5, x);
    CHECK(b < prev);
    CHECK(b > 0.0);
    CHECK(b <= 1.0);
    prev = b;
  }
}

TEST_CASE("sup mean estimation basics") {
  const TimeGrid grid(1.0, 8);
  const SupMeanEstimate zero =
      estimate_sup_mean(oracle::zero_process_kernel(grid), grid, 200, SeedSpec{72, 0});
  CHECK(zero.mean == 0.0);
  CHECK(zero.std_error == 0.0);

  const SupMeanEstimate m = estimate_sup_mean(Kernel::fbm(0.6), grid, 500, SeedSpec{72, 1});
  CHECK(m.mean >= 0.0);  // G_0 = 0 participates in every per-path sup
  CHECK_THROWS_AS(estimate_sup_mean(Kernel::bm(), grid, 50, SeedSpec{72, 2}),
                  std::invalid_argument);
}

TEST_CASE("BM sup mean approaches the reflection-principle value") {
  const TimeGrid grid(1.0, 2048);
  const SupMeanEstimate m = estimate_sup_mean(Kernel::bm(), grid, 4000, SeedSpec{73, 0});
  CHECK(std::abs(m.mean - 0.7978845608028654) <= 0.05);
}

TEST_CASE("consistency error bound regimes") {
  const ModelParams params(1.0, 1.0, 0.1, 0.0, 2.0);
  CHECK(consistency_error_bound(params, 0.1, 0.0, 0.7, 1.0) == 0.0);
  // vacuous: threshold below the sup mean
  CHECK(consistency_error_bound(params, 0.1, 0.3, 0.7, 1.0) == 1.0);
  // small eps in the non-vacuous regime: tiny but positive
  const double small = consistency_error_bound(params, 0.5, 0.01, 0.7, 1.0);
  CHECK(small > 0.0);
  CHECK(small < 1e-9);
  // extreme eps: the exponent underflows to the exact limit value 0
  CHECK(consistency_error_bound(params, 0.5, 1e-6, 0.7, 1.0) == 0.0);
  // decreasing in eps in the non-vacuous regime
  const double b1 = consistency_error_bound(params, 0.5, 0.02, 0.7, 1.0);
  CHECK(b1 < 1.0);
  CHECK(small < b1);
}

TEST_CASE("consistency error bound dominates an observed exceedance frequency") {
  // non-vacuous configuration: wide separation, small noise
  const TimeGrid grid(1.0, 128);
  const ModelParams params(1.0, 1.0, 0.02, 0.0, 2.0);
  const double delta = 0.5;
  const SupMeanEstimate m = estimate_sup_mean(Kernel::fbm(0.7), grid, 2000, SeedSpec{74, 0});
  const Matrix cov = covariance_matrix(Kernel::fbm(0.7), grid);
  const double bound =
      consistency_error_bound(params, delta, params.eps, m.mean, cov.diagonal().maxCoeff());
  CHECK(bound < 1.0);

  const GaussianSampler sampler(Kernel::fbm(0.7), grid);
  Index exceed = 0;
  const Index reps = 500;
  for (Index k = 0; k < reps; ++k) {
    const SamplePath g = sampler.draw(SeedSpec{75, static_cast<std::uint64_t>(k)});
    const SamplePath x = simulate_x_exact(params, g);
    const EstimateResult est = minimum_l1_estimate(x, params);
    if (std::abs(est.theta_hat - params.theta0) > delta) ++exceed;
  }
  const double freq = static_cast<double>(exceed) / static_cast<double>(reps);
  const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(reps));
  CHECK(freq <= bound + 3.0 * se);
}
