#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oul1/bounds.hpp"
#include "oul1/csv.hpp"
#include "oul1/estimator.hpp"
#include "oul1/kernel.hpp"
#include "oul1/limit_law.hpp"

namespace oul1 {

enum class ExperimentKind { Consistency, LimitDist, Bounds };

/// Everything that defines an experiment's results. Execution knobs (threads)
/// are deliberately not part of the result-defining state: reports are
/// byte-identical for any worker count.
struct ExperimentConfig {
  Kernel kernel;
  ModelParams params;
  Index grid_steps;
  std::vector<double> eps_list;  // nonnegative, distinct
  double delta = 0.0;
  Index replicates = 1;
  std::uint64_t root_seed = 0;
  Index aux_draws = 20000;  // sup-mean estimation budget for bound inputs
  int threads = 1;

  TimeGrid grid() const { return TimeGrid(params.horizon, grid_steps); }
  void validate(ExperimentKind kind) const;
  ConfigEcho echo(ExperimentKind kind) const;
};

struct ConsistencyPoint {
  double eps;
  Index exceed_count;
  double frequency;
  double std_error;
  double bound;
  bool bound_vacuous;
};

struct ConsistencyReport {
  ConfigEcho config;
  double theta0;
  double delta;
  std::vector<ConsistencyPoint> points;
  double sup_mean;
  double sup_mean_se;
  double sigma2;
  std::optional<double> rate_slope;  // ln(frequency) vs eps^-2, over nonzero counts
  int rate_slope_points;
  Matrix theta_hats;  // replicates x eps values

  std::string report_json() const;
  std::string samples_csv() const;  // replicate,eps,theta_hat,exceeded
};

struct LimitDistReport {
  ConfigEcho config;
  double eps;
  std::vector<double> u_samples;     // scaled estimator errors, replicate order
  std::vector<double> zeta_samples;  // independent limit-minimizer draws
  double ks;
  double coupled_median_gap;  // median |u - limit minimizer| on shared drivers
  double boundary_fraction;
  bool boundary_warning;

  std::string report_json() const;
  std::string u_csv() const;     // replicate,u_eps
  std::string zeta_csv() const;  // replicate,zeta
};

struct TailCheck {
  double x;
  double empirical;
  double std_error;
  double bound;
  bool pass;
};

struct BermanPoint {
  double x;
  double empirical;
  double bound;  // diagnostic with unit constant; never asserted
};

struct BoundsReport {
  ConfigEcho config;
  double sup_mean;
  double sup_mean_se;
  double abs_sup_mean;  // E[sup |G|], the quantity the entropy bound controls
  double sigma2;
  bool degenerate;  // sigma2 == 0: tail machinery not applicable
  std::optional<double> roughness;
  double holder_c1 = 0.0;
  double holder_c2 = 0.0;
  bool has_sandwich = false;
  double sandwich_lo = 0.0;
  double sandwich_hi = 0.0;
  bool sandwich_pass = false;
  std::vector<TailCheck> tail_checks;
  bool berman_applicable = false;
  std::vector<BermanPoint> berman;
  bool has_entropy = false;
  double entropy_value = 0.0;    // this grid, its own resolution floor
  double entropy_refined = 0.0;  // refined grid, same integration window
  double entropy_rel_change = 0.0;  // stability of the covering computation
  double entropy_truncation = 0.0;  // extra mass below this grid's floor, relative
  Index refined_steps = 0;
  Index gronwall_total = 0;
  Index gronwall_holds = 0;

  std::string report_json() const;
};

/// Consistency-rate experiment: per eps, the frequency of |theta_hat - theta0|
/// exceeding delta across replicates, against the theoretical bound. Replicate
/// k consumes driver stream k; the same driver serves every eps (common random
/// numbers), which is what makes the monotone-trend diagnostic sharp.
ConsistencyReport run_consistency(const ExperimentConfig& config);

/// Limiting-distribution experiment: scaled estimator errors (theta_hat -
/// theta0)/eps versus independent draws of the limit minimizer, compared by the
/// two-sample KS statistic, plus the coupled gap on shared drivers.
LimitDistReport run_limit_dist(const ExperimentConfig& config);

/// Maximal-inequality verification sweep for the configured kernel.
BoundsReport run_bounds(const ExperimentConfig& config);

/// Two-sample Kolmogorov-Smirnov statistic (sup distance of empirical CDFs).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Deterministic slot-parallel loop: body(i) runs once for each i in [0, count);
/// results must be written to per-index slots. Worker count never affects values.
void parallel_for(Index count, int threads, const std::function<void(Index)>& body);

}  // namespace oul1
