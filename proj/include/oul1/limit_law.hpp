#pragma once

#include "oul1/kernel.hpp"
#include "oul1/rng.hpp"
#include "oul1/sample_path.hpp"

namespace oul1 {

/// One realization of the small-noise limit problem: the limit process and the
/// drift-sensitivity direction h(t) = x0 * t * e^{theta0 t} it is regressed on.
struct LimitInstance {
  SamplePath process;    // Y
  SamplePath direction;  // h
};

/// Y_t = e^{theta0 t} int_0^t e^{-theta0 s} dG_s from a given driver path
/// (left-point rule, Y_0 = 0).
SamplePath limit_process_from_driver(const SamplePath& driver, double theta0);

/// Fresh draw of the limit process: sample a driver, then transform.
SamplePath sample_limit_process(const Kernel& kernel, double theta0, const TimeGrid& grid,
                                SeedSpec seed);

/// Sensitivity of the noise-free flow to the drift, h(t) = x0 * t * e^{theta0 t}.
SamplePath drift_sensitivity(double theta0, double x0, const TimeGrid& grid);

LimitInstance make_limit_instance(SamplePath process, double theta0, double x0);

/// Exact minimizer of the trapezoid discretization of u -> int |Y_t - u h(t)| dt.
/// The objective is convex piecewise-linear in u, so the minimizer is the
/// weighted median of the ratios Y/h with weights (trapezoid weight)*|h|;
/// the grid origin carries zero weight and is dropped. Returns the smallest
/// minimizer when a flat segment of minimizers exists.
double limit_minimizer(const LimitInstance& instance);

/// Covariance formula for the limit process as a product of exponential
/// integrals: (e^{theta0 t} - 1)(e^{theta0 s} - 1) / theta0^2, with limit t*s
/// at theta0 = 0. Note this carries no dependence on the driver kernel; see
/// limit_covariance_empirical for the simulated counterpart.
double limit_covariance_formula(double theta0, double s, double t);

/// Sample covariance matrix of `draws` independent limit-process paths.
/// Draw i consumes stream seed.stream_index + i.
Matrix limit_covariance_empirical(const Kernel& kernel, double theta0, const TimeGrid& grid,
                                  Index draws, SeedSpec seed);

}  // namespace oul1
