#include "oul1/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "oul1/ou_model.hpp"
#include "oul1/sampler.hpp"

namespace oul1 {

using ordered_json = nlohmann::ordered_json;

void parallel_for(Index count, int threads, const std::function<void(Index)>& body) {
  if (count <= 0) return;
  const Index workers = std::max<Index>(
      1, std::min<Index>(count, threads <= 0 ? 1 : static_cast<Index>(threads)));
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  const Index chunk = (count + workers - 1) / workers;
  for (Index w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min(count, begin + chunk);
    pool.emplace_back([&, begin, end] {
      try {
        for (Index i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);  // failures abort, never skip
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

void ExperimentConfig::validate(ExperimentKind kind) const {
  if (grid_steps < 1) throw std::invalid_argument("ExperimentConfig: grid_steps must be >= 1");
  if (replicates < 1) throw std::invalid_argument("ExperimentConfig: replicates must be >= 1");
  if (kind == ExperimentKind::Consistency || kind == ExperimentKind::LimitDist) {
    if (eps_list.empty()) throw std::invalid_argument("ExperimentConfig: eps list is empty");
    for (double e : eps_list)
      if (!(e >= 0.0)) throw std::invalid_argument("ExperimentConfig: eps values must be >= 0");
    for (size_t p = 0; p < eps_list.size(); ++p)
      for (size_t q = p + 1; q < eps_list.size(); ++q)
        if (eps_list[p] == eps_list[q])
          throw std::invalid_argument("ExperimentConfig: eps values must be distinct");
  }
  if (kind == ExperimentKind::Consistency && !(delta > 0.0))
    throw std::invalid_argument("ExperimentConfig: delta must be > 0");
  if (kind == ExperimentKind::LimitDist && !(eps_list.at(0) > 0.0))
    throw std::invalid_argument("ExperimentConfig: limit-dist eps must be > 0");
}

namespace {

std::string join_full(const std::vector<double>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_full(values[i]);
  }
  return out;
}

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Consistency:
      return "consistency";
    case ExperimentKind::LimitDist:
      return "limit-dist";
    case ExperimentKind::Bounds:
      return "bounds";
  }
  return "?";
}

ordered_json echo_to_json(const ConfigEcho& echo) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : echo) j[key] = value;
  return j;
}

}  // namespace

ConfigEcho ExperimentConfig::echo(ExperimentKind kind) const {
  ConfigEcho e;
  e.emplace_back("experiment", kind_name(kind));
  e.emplace_back("kernel", kernel.spec_string());
  e.emplace_back("theta0", format_full(params.theta0));
  e.emplace_back("x0", format_full(params.x0));
  if (kind == ExperimentKind::Consistency) {
    e.emplace_back("eps_list", join_full(eps_list));
    e.emplace_back("delta", format_full(delta));
  } else if (kind == ExperimentKind::LimitDist) {
    e.emplace_back("eps", format_full(eps_list.at(0)));
  } else {
    e.emplace_back("eps", format_full(params.eps));
  }
  e.emplace_back("n", std::to_string(grid_steps));
  e.emplace_back("T", format_full(params.horizon));
  e.emplace_back("theta_lo", format_full(params.theta_lo));
  e.emplace_back("theta_hi", format_full(params.theta_hi));
  e.emplace_back("replicates", std::to_string(replicates));
  e.emplace_back("root_seed", std::to_string(root_seed));
  if (kind != ExperimentKind::Bounds) e.emplace_back("aux_draws", std::to_string(aux_draws));
  return e;
}

ConsistencyReport run_consistency(const ExperimentConfig& config) {
  config.validate(ExperimentKind::Consistency);
  const TimeGrid grid = config.grid();
  const GaussianSampler sampler(config.kernel, grid);
  const ModelParams& p = config.params;
  const Index n_eps = static_cast<Index>(config.eps_list.size());
  const Index n_rep = config.replicates;

  ConsistencyReport report;
  report.config = config.echo(ExperimentKind::Consistency);
  report.theta0 = p.theta0;
  report.delta = config.delta;
  report.sigma2 = sampler.covariance().diagonal().maxCoeff();
  const SupMeanEstimate sup =
      estimate_sup_mean(config.kernel, grid, config.aux_draws,
                        SeedSpec{derived_root(config.root_seed, 1), 0});
  report.sup_mean = sup.mean;
  report.sup_mean_se = sup.std_error;

  const SamplePath flow = deterministic_solution(p.theta0, p.x0, grid);
  report.theta_hats = Matrix::Zero(n_rep, n_eps);
  Matrix& theta_hats = report.theta_hats;

  parallel_for(n_rep, config.threads, [&](Index k) {
    const SamplePath driver =
        sampler.draw(SeedSpec{config.root_seed, static_cast<std::uint64_t>(k)});
    const SamplePath y = limit_process_from_driver(driver, p.theta0);
    for (Index e = 0; e < n_eps; ++e) {
      const SamplePath x(grid, flow.values + config.eps_list[static_cast<size_t>(e)] * y.values);
      theta_hats(k, e) = minimum_l1_estimate(x, p).theta_hat;
    }
  });

  for (Index e = 0; e < n_eps; ++e) {
    const double eps = config.eps_list[static_cast<size_t>(e)];
    Index exceed = 0;
    for (Index k = 0; k < n_rep; ++k)
      if (std::abs(theta_hats(k, e) - p.theta0) > config.delta) ++exceed;
    const double freq = static_cast<double>(exceed) / static_cast<double>(n_rep);
    const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(n_rep));
    const double bound = consistency_error_bound(p, config.delta, eps, sup.mean, report.sigma2);
    report.points.push_back(
        ConsistencyPoint{eps, exceed, freq, se, bound, bound >= 1.0});
  }

  // ln(frequency) against eps^-2 over the points with nonzero counts; the
  // theoretical rate makes this slope negative.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (const auto& pt : report.points) {
    if (pt.exceed_count == 0 || pt.eps == 0.0) continue;
    const double xv = 1.0 / (pt.eps * pt.eps);
    const double yv = std::log(pt.frequency);
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    ++used;
  }
  report.rate_slope_points = used;
  if (used >= 2) {
    const double denom = used * sxx - sx * sx;
    if (denom != 0.0) report.rate_slope = (used * sxy - sx * sy) / denom;
  }
  return report;
}

LimitDistReport run_limit_dist(const ExperimentConfig& config) {
  config.validate(ExperimentKind::LimitDist);
  const TimeGrid grid = config.grid();
  const GaussianSampler sampler(config.kernel, grid);
  const ModelParams& p = config.params;
  const double eps = config.eps_list.at(0);
  const Index n_rep = config.replicates;

  LimitDistReport report;
  report.config = config.echo(ExperimentKind::LimitDist);
  report.eps = eps;
  report.u_samples.assign(static_cast<size_t>(n_rep), 0.0);
  report.zeta_samples.assign(static_cast<size_t>(n_rep), 0.0);

  const SamplePath flow = deterministic_solution(p.theta0, p.x0, grid);
  const SamplePath direction = drift_sensitivity(p.theta0, p.x0, grid);
  std::vector<double> coupled_gap(static_cast<size_t>(n_rep), 0.0);
  std::vector<char> pinned(static_cast<size_t>(n_rep), 0);
  const double pin_tol = 1e-6 * (p.theta_hi - p.theta_lo);

  parallel_for(n_rep, config.threads, [&](Index k) {
    const SamplePath driver =
        sampler.draw(SeedSpec{config.root_seed, static_cast<std::uint64_t>(k)});
    const SamplePath y = limit_process_from_driver(driver, p.theta0);
    const SamplePath x(grid, flow.values + eps * y.values);
    const EstimateResult est = minimum_l1_estimate(x, p);
    const double u = (est.theta_hat - p.theta0) / eps;
    report.u_samples[static_cast<size_t>(k)] = u;
    const double coupled = limit_minimizer(LimitInstance{y, direction});
    coupled_gap[static_cast<size_t>(k)] = std::abs(u - coupled);
    pinned[static_cast<size_t>(k)] =
        (est.theta_hat - p.theta_lo <= pin_tol || p.theta_hi - est.theta_hat <= pin_tol) ? 1 : 0;
  });

  parallel_for(n_rep, config.threads, [&](Index k) {
    const SamplePath driver = sampler.draw(
        SeedSpec{config.root_seed, static_cast<std::uint64_t>(n_rep + k)});
    const SamplePath y = limit_process_from_driver(driver, p.theta0);
    report.zeta_samples[static_cast<size_t>(k)] = limit_minimizer(LimitInstance{y, direction});
  });

  report.ks = ks_two_sample(report.u_samples, report.zeta_samples);
  std::sort(coupled_gap.begin(), coupled_gap.end());
  const size_t mid = coupled_gap.size() / 2;
  report.coupled_median_gap = (coupled_gap.size() % 2 == 1)
                                  ? coupled_gap[mid]
                                  : 0.5 * (coupled_gap[mid - 1] + coupled_gap[mid]);
  Index pin_count = 0;
  for (char c : pinned) pin_count += c;
  report.boundary_fraction = static_cast<double>(pin_count) / static_cast<double>(n_rep);
  report.boundary_warning = report.boundary_fraction > 0.01;
  return report;
}

BoundsReport run_bounds(const ExperimentConfig& config) {
  config.validate(ExperimentKind::Bounds);
  const TimeGrid grid = config.grid();
  const GaussianSampler sampler(config.kernel, grid);
  const MetricProfile profile(config.kernel, grid);
  const ModelParams& p = config.params;
  const Index n_rep = config.replicates;

  BoundsReport report;
  report.config = config.echo(ExperimentKind::Bounds);
  report.sigma2 = profile.sup_variance();
  report.degenerate = !(report.sigma2 > 0.0);
  report.roughness = config.kernel.roughness();

  Vector sups(n_rep);
  Vector abs_sups(n_rep);
  std::vector<char> gronwall_ok(static_cast<size_t>(n_rep), 0);
  const SamplePath flow = deterministic_solution(p.theta0, p.x0, grid);
  parallel_for(n_rep, config.threads, [&](Index k) {
    const SamplePath driver =
        sampler.draw(SeedSpec{config.root_seed, static_cast<std::uint64_t>(k)});
    sups[k] = driver.sup();
    abs_sups[k] = driver.sup_abs();
    const SamplePath y = limit_process_from_driver(driver, p.theta0);
    const SamplePath x(grid, flow.values + p.eps * y.values);
    gronwall_ok[static_cast<size_t>(k)] = gronwall_check(p, x, driver).holds ? 1 : 0;
  });

  double sum = 0.0, sum_sq = 0.0, abs_sum = 0.0;
  for (Index k = 0; k < n_rep; ++k) {
    sum += sups[k];
    sum_sq += sups[k] * sups[k];
    abs_sum += abs_sups[k];
  }
  report.sup_mean = sum / static_cast<double>(n_rep);
  report.abs_sup_mean = abs_sum / static_cast<double>(n_rep);
  const double var =
      n_rep > 1 ? std::max(0.0, (sum_sq - n_rep * report.sup_mean * report.sup_mean) /
                                    static_cast<double>(n_rep - 1))
                : 0.0;
  report.sup_mean_se = std::sqrt(var / static_cast<double>(n_rep));

  report.gronwall_total = n_rep;
  for (char c : gronwall_ok) report.gronwall_holds += c;

  if (!report.degenerate) {
    const double sigma = std::sqrt(report.sigma2);
    report.berman_applicable = profile.modulus_strictly_increasing();
    for (const double c : {0.5, 1.0, 1.5}) {
      const double x = report.sup_mean + c * sigma;
      Index hits = 0;
      for (Index k = 0; k < n_rep; ++k)
        if (abs_sups[k] >= x) ++hits;
      const double emp = static_cast<double>(hits) / static_cast<double>(n_rep);
      const double se = std::sqrt(emp * (1.0 - emp) / static_cast<double>(n_rep));
      const double bound = gaussian_abs_sup_tail_bound(report.sigma2, report.sup_mean, x);
      report.tail_checks.push_back(TailCheck{x, emp, se, bound, emp <= bound + 3.0 * se});
      if (report.berman_applicable)
        report.berman.push_back(BermanPoint{x, emp, berman_tail_bound(profile, x)});
    }
  }

  if (report.roughness) {
    const auto [c1, c2] = profile.holder_constants(*report.roughness);
    report.holder_c1 = c1;
    report.holder_c2 = c2;
    if (c1 > 0.0) {
      const auto sandwich = borovkov_sup_mean_bounds(*report.roughness, c1, c2);
      report.has_sandwich = true;
      report.sandwich_lo = sandwich[0];
      report.sandwich_hi = sandwich[1];
      report.sandwich_pass = sandwich[0] <= report.sup_mean && report.sup_mean <= sandwich[1];
    }
  }

  try {
    report.entropy_value = entropy_integral(profile);
    report.refined_steps = std::min<Index>(4 * config.grid_steps, 4096);
    if (report.refined_steps > config.grid_steps) {
      const MetricProfile fine(config.kernel, TimeGrid(p.horizon, report.refined_steps));
      report.entropy_refined = entropy_integral(fine, profile.min_positive_distance());
      const double full = entropy_integral(fine);
      report.entropy_truncation = (full - report.entropy_refined) /
                                  std::max(std::abs(report.entropy_value), 1e-300);
    } else {
      report.refined_steps = config.grid_steps;
      report.entropy_refined = report.entropy_value;
      report.entropy_truncation = 0.0;
    }
    report.entropy_rel_change = std::abs(report.entropy_refined - report.entropy_value) /
                                std::max(std::abs(report.entropy_value), 1e-300);
    report.has_entropy = true;
  } catch (const std::domain_error&) {
    report.has_entropy = false;
  }
  return report;
}

std::string ConsistencyReport::report_json() const {
  ordered_json j;
  j["config"] = echo_to_json(config);
  j["sup_mean"] = sup_mean;
  j["sup_mean_se"] = sup_mean_se;
  j["sigma2"] = sigma2;
  j["points"] = ordered_json::array();
  for (const auto& pt : points) {
    ordered_json row;
    row["eps"] = pt.eps;
    row["exceed_count"] = pt.exceed_count;
    row["frequency"] = pt.frequency;
    row["std_error"] = pt.std_error;
    row["bound"] = pt.bound;
    row["bound_vacuous"] = pt.bound_vacuous;
    j["points"].push_back(row);
  }
  if (rate_slope)
    j["rate_slope"] = *rate_slope;
  else
    j["rate_slope"] = nullptr;
  j["rate_slope_points"] = rate_slope_points;
  return j.dump(2) + "\n";
}

std::string ConsistencyReport::samples_csv() const {
  std::string out = comment_header(config);
  out += "replicate,eps,theta_hat,exceeded\n";
  for (Index k = 0; k < theta_hats.rows(); ++k) {
    for (Index e = 0; e < theta_hats.cols(); ++e) {
      const auto& pt = points[static_cast<size_t>(e)];
      const bool exceeded = std::abs(theta_hats(k, e) - theta0) > delta;
      out += std::to_string(k) + "," + format_full(pt.eps) + "," +
             format_full(theta_hats(k, e)) + "," + (exceeded ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::string LimitDistReport::report_json() const {
  ordered_json j;
  j["config"] = echo_to_json(config);
  j["eps"] = eps;
  j["ks"] = ks;
  j["coupled_median_gap"] = coupled_median_gap;
  j["boundary_fraction"] = boundary_fraction;
  j["boundary_warning"] = boundary_warning;
  j["u_count"] = u_samples.size();
  j["zeta_count"] = zeta_samples.size();
  return j.dump(2) + "\n";
}

std::string LimitDistReport::u_csv() const {
  std::string out = comment_header(config);
  out += "replicate,u_eps\n";
  for (size_t k = 0; k < u_samples.size(); ++k)
    out += std::to_string(k) + "," + format_full(u_samples[k]) + "\n";
  return out;
}

std::string LimitDistReport::zeta_csv() const {
  std::string out = comment_header(config);
  out += "replicate,zeta\n";
  for (size_t k = 0; k < zeta_samples.size(); ++k)
    out += std::to_string(k) + "," + format_full(zeta_samples[k]) + "\n";
  return out;
}

std::string BoundsReport::report_json() const {
  ordered_json j;
  j["config"] = echo_to_json(config);
  for (const auto& [key, value] : config)
    if (key == "kernel") j["kernel"] = value;
  if (roughness)
    j["H"] = *roughness;
  else
    j["H"] = nullptr;
  j["m_hat"] = sup_mean;
  j["se"] = sup_mean_se;
  j["sigma2"] = sigma2;
  j["degenerate"] = degenerate;
  if (has_sandwich) {
    j["sandwich_lo"] = sandwich_lo;
    j["sandwich_hi"] = sandwich_hi;
    j["sandwich_pass"] = sandwich_pass;
    j["holder_c1"] = holder_c1;
    j["holder_c2"] = holder_c2;
  } else {
    j["sandwich_lo"] = nullptr;
    j["sandwich_hi"] = nullptr;
  }
  j["tail_checks"] = ordered_json::array();
  for (const auto& t : tail_checks) {
    ordered_json row;
    row["x"] = t.x;
    row["empirical"] = t.empirical;
    row["std_error"] = t.std_error;
    row["bound"] = t.bound;
    row["pass"] = t.pass;
    j["tail_checks"].push_back(row);
  }
  j["berman_applicable"] = berman_applicable;
  j["berman"] = ordered_json::array();
  for (const auto& b : berman) {
    ordered_json row;
    row["x"] = b.x;
    row["empirical"] = b.empirical;
    row["bound"] = b.bound;
    j["berman"].push_back(row);
  }
  j["abs_sup_mean"] = abs_sup_mean;
  if (has_entropy) {
    j["entropy"] = {{"value", entropy_value},
                    {"refined_value", entropy_refined},
                    {"refined_steps", refined_steps},
                    {"rel_change", entropy_rel_change},
                    {"truncation", entropy_truncation}};
    // implied constant in E[sup|G|] <= C * entropy integral; reported, never asserted
    j["entropy_ratio"] = entropy_value > 0.0 ? abs_sup_mean / entropy_value : 0.0;
  } else {
    j["entropy"] = nullptr;
    j["entropy_ratio"] = nullptr;
  }
  j["gronwall"] = {{"total", gronwall_total}, {"holds", gronwall_holds}};
  return j.dump(2) + "\n";
}

}  // namespace oul1
