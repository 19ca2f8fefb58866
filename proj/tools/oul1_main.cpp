#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oul1/csv.hpp"
#include "oul1/estimator.hpp"
#include "oul1/harness.hpp"
#include "oul1/ou_model.hpp"
#include "oul1/sampler.hpp"

namespace {

using namespace oul1;

struct CommonOpts {
  std::string kernel_spec;
  double theta0 = 1.0;
  double x0 = 1.0;
  double eps = 0.1;
  std::vector<double> eps_list;
  Index n = 256;
  double horizon = 1.0;
  double theta_lo = 0.0;
  double theta_hi = 2.0;
  double delta = 0.1;
  Index replicates = 1000;
  std::uint64_t seed = 0;
  Index aux_draws = 20000;
  std::string out_dir = ".";
  int threads = 1;
  std::string config_file;
};

// Flat `key = value` config format with `#` comments; keys mirror the long
// flag names. Values from the file are appended as synthetic flags for keys
// the command line did not set, so explicit flags always win.
std::vector<std::pair<std::string, std::string>> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ParseError("config " + path + ": line " + std::to_string(line_no) +
                                " is not 'key = value'",
                            CLI::ExitCodes::InvalidError);
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty())
      throw CLI::ParseError("config " + path + ": empty key on line " + std::to_string(line_no),
                            CLI::ExitCodes::InvalidError);
    entries.emplace_back(key, value);
  }
  return entries;
}

std::vector<std::string> merge_config_args(std::vector<std::string> args) {
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  for (const auto& [key, value] : read_flat_config(config_path)) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

void add_kernel(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--kernel", o.kernel_spec,
                  "kernel spec: fbm:H=0.7 | subfbm:H=0.6 | bifbm:H=0.7,K=0.8 | bm | "
                  "tabulated:<csv>")
      ->required();
}

void add_model(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--theta0", o.theta0, "true drift");
  cmd->add_option("--x0", o.x0, "initial value (nonzero)");
  cmd->add_option("--n", o.n, "grid steps");
  cmd->add_option("--T", o.horizon, "horizon");
}

void add_search(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--theta-lo", o.theta_lo, "search interval lower end");
  cmd->add_option("--theta-hi", o.theta_hi, "search interval upper end");
}

void add_config(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_file, "flat key = value config file; flags override");
}

void add_run(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--replicates", o.replicates, "Monte Carlo replicates");
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--threads", o.threads, "worker cap (never affects results)");
  add_config(cmd, o);
}

void print_echo(const ConfigEcho& echo, int threads, const std::string& out_dir) {
  for (const auto& [key, value] : echo) std::cout << key << " = " << value << "\n";
  std::cout << "threads = " << threads << "\n";
  if (!out_dir.empty()) std::cout << "out = " << out_dir << "\n";
}

std::string out_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

ExperimentConfig make_config(const CommonOpts& o, ExperimentKind kind) {
  ExperimentConfig cfg{
      parse_kernel_spec(o.kernel_spec),
      ModelParams(o.theta0, o.x0, o.eps, o.theta_lo, o.theta_hi, o.horizon),
      o.n,
      o.eps_list,
      o.delta,
      o.replicates,
      o.seed,
      o.aux_draws,
      o.threads};
  if (kind == ExperimentKind::LimitDist && cfg.eps_list.empty()) cfg.eps_list = {o.eps};
  cfg.validate(kind);
  return cfg;
}

int run_simulate(const CommonOpts& o) {
  const Kernel kernel = parse_kernel_spec(o.kernel_spec);
  const TimeGrid grid(o.horizon, o.n);
  const SamplePath driver = sample_path(kernel, grid, SeedSpec{o.seed, 0});
  const SamplePath x = simulate_x_exact(o.theta0, o.x0, o.eps, driver);

  ConfigEcho echo;
  echo.emplace_back("experiment", "simulate");
  echo.emplace_back("kernel", kernel.spec_string());
  echo.emplace_back("theta0", format_full(o.theta0));
  echo.emplace_back("x0", format_full(o.x0));
  echo.emplace_back("eps", format_full(o.eps));
  echo.emplace_back("n", std::to_string(o.n));
  echo.emplace_back("T", format_full(o.horizon));
  echo.emplace_back("root_seed", std::to_string(o.seed));
  print_echo(echo, o.threads, o.out_dir);

  write_path_csv(out_path(o, "path_G.csv"), driver, "value", echo);
  write_path_csv(out_path(o, "path_X.csv"), x, "X", echo);
  std::cout << "sup|G| = " << format_brief(driver.sup_abs()) << "\n";
  std::cout << "X_T = " << format_brief(x.values[x.grid.size() - 1]) << "\n";
  std::cout << "wrote path_G.csv, path_X.csv\n";
  return 0;
}

int run_estimate(const CommonOpts& o) {
  const Kernel kernel = parse_kernel_spec(o.kernel_spec);
  const ModelParams params(o.theta0, o.x0, o.eps, o.theta_lo, o.theta_hi, o.horizon);
  const TimeGrid grid(o.horizon, o.n);
  const SamplePath driver = sample_path(kernel, grid, SeedSpec{o.seed, 0});
  const SamplePath x = simulate_x_exact(params, driver);
  const EstimateResult est = minimum_l1_estimate(x, params);

  ConfigEcho echo;
  echo.emplace_back("experiment", "estimate");
  echo.emplace_back("kernel", kernel.spec_string());
  echo.emplace_back("theta0", format_full(o.theta0));
  echo.emplace_back("x0", format_full(o.x0));
  echo.emplace_back("eps", format_full(o.eps));
  echo.emplace_back("n", std::to_string(o.n));
  echo.emplace_back("T", format_full(o.horizon));
  echo.emplace_back("theta_lo", format_full(o.theta_lo));
  echo.emplace_back("theta_hi", format_full(o.theta_hi));
  echo.emplace_back("root_seed", std::to_string(o.seed));
  print_echo(echo, o.threads, "");

  const double tol = 1e-7 * (o.theta_hi - o.theta_lo);
  char line[160];
  std::snprintf(line, sizeof(line), "theta_hat = %.6f +/- %.1g\n", est.theta_hat, tol);
  std::cout << line;
  std::cout << "objective = " << format_brief(est.objective) << "\n";
  std::cout << "n_evals = " << est.n_evals << "\n";
  std::cout << "bracket = [" << format_brief(est.bracket[0]) << ", "
            << format_brief(est.bracket[1]) << "]\n";
  return 0;
}

int run_gdelta(const CommonOpts& o) {
  const double g = solution_separation(o.theta0, o.x0, o.delta, o.horizon);
  std::cout << "g(delta) = " << format_brief(g) << "\n";
  return 0;
}

int run_consistency_cmd(const CommonOpts& o) {
  const ExperimentConfig cfg = make_config(o, ExperimentKind::Consistency);
  print_echo(cfg.echo(ExperimentKind::Consistency), o.threads, o.out_dir);
  const ConsistencyReport report = run_consistency(cfg);
  write_text_file(out_path(o, "consistency_report.json"), report.report_json());
  write_text_file(out_path(o, "consistency_samples.csv"), report.samples_csv());
  for (const auto& pt : report.points)
    std::cout << "eps = " << format_brief(pt.eps) << ": frequency = " << format_brief(pt.frequency)
              << " +/- " << format_brief(pt.std_error) << ", bound = " << format_brief(pt.bound)
              << (pt.bound_vacuous ? " (vacuous)" : "") << "\n";
  if (report.rate_slope)
    std::cout << "rate_slope = " << format_brief(*report.rate_slope) << " over "
              << report.rate_slope_points << " points\n";
  std::cout << "wrote consistency_report.json, consistency_samples.csv\n";
  return 0;
}

int run_limit_dist_cmd(const CommonOpts& o) {
  const ExperimentConfig cfg = make_config(o, ExperimentKind::LimitDist);
  print_echo(cfg.echo(ExperimentKind::LimitDist), o.threads, o.out_dir);
  const LimitDistReport report = run_limit_dist(cfg);
  write_text_file(out_path(o, "limit_dist_report.json"), report.report_json());
  write_text_file(out_path(o, "u_eps.csv"), report.u_csv());
  write_text_file(out_path(o, "zeta.csv"), report.zeta_csv());
  std::cout << "ks = " << format_brief(report.ks) << "\n";
  std::cout << "coupled_median_gap = " << format_brief(report.coupled_median_gap) << "\n";
  if (report.boundary_warning)
    std::cout << "warning: theta_hat pinned at a boundary in "
              << format_brief(100.0 * report.boundary_fraction)
              << "% of replicates (search interval too tight)\n";
  std::cout << "wrote limit_dist_report.json, u_eps.csv, zeta.csv\n";
  return 0;
}

int run_bounds_cmd(const CommonOpts& o) {
  const ExperimentConfig cfg = make_config(o, ExperimentKind::Bounds);
  print_echo(cfg.echo(ExperimentKind::Bounds), o.threads, o.out_dir);
  const BoundsReport report = run_bounds(cfg);
  write_text_file(out_path(o, "bounds_report.json"), report.report_json());
  std::cout << "m_hat = " << format_brief(report.sup_mean) << " +/- "
            << format_brief(report.sup_mean_se) << "\n";
  if (report.has_sandwich)
    std::cout << "sandwich = [" << format_brief(report.sandwich_lo) << ", "
              << format_brief(report.sandwich_hi) << "] "
              << (report.sandwich_pass ? "pass" : "FAIL") << "\n";
  for (const auto& t : report.tail_checks)
    std::cout << "tail x = " << format_brief(t.x) << ": empirical = " << format_brief(t.empirical)
              << ", bound = " << format_brief(t.bound) << (t.pass ? " pass" : " FAIL") << "\n";
  std::cout << "gronwall holds on " << report.gronwall_holds << "/" << report.gronwall_total
            << " paths\n";
  std::cout << "wrote bounds_report.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimum L1-norm drift estimation for Gaussian-driven OU processes"};
  app.require_subcommand(1);

  CommonOpts sim, est, gde, con, lim, bnd;

  CLI::App* c_sim = app.add_subcommand("simulate", "draw a driver path and the observed process");
  add_kernel(c_sim, sim);
  add_model(c_sim, sim);
  c_sim->add_option("--eps", sim.eps, "noise level");
  c_sim->add_option("--seed", sim.seed, "root seed");
  c_sim->add_option("--out", sim.out_dir, "output directory");
  add_config(c_sim, sim);

  CLI::App* c_est = app.add_subcommand("estimate", "estimate the drift on one simulated instance");
  add_kernel(c_est, est);
  add_model(c_est, est);
  add_search(c_est, est);
  c_est->add_option("--eps", est.eps, "noise level");
  c_est->add_option("--seed", est.seed, "root seed");
  add_config(c_est, est);

  CLI::App* c_gde = app.add_subcommand("gdelta", "separation of the noise-free flows");
  c_gde->add_option("--theta0", gde.theta0, "true drift")->required();
  c_gde->add_option("--x0", gde.x0, "initial value");
  c_gde->add_option("--delta", gde.delta, "drift separation")->required();
  c_gde->add_option("--T", gde.horizon, "horizon");
  add_config(c_gde, gde);

  CLI::App* c_con = app.add_subcommand("consistency", "exceedance frequencies across a noise sweep");
  add_kernel(c_con, con);
  add_model(c_con, con);
  add_search(c_con, con);
  c_con->add_option("--eps-list", con.eps_list, "noise levels, comma separated")
      ->required()
      ->delimiter(',');
  c_con->add_option("--delta", con.delta, "exceedance threshold")->required();
  c_con->add_option("--aux-draws", con.aux_draws, "draws for the sup-mean bound input");
  add_run(c_con, con);

  CLI::App* c_lim = app.add_subcommand("limit-dist", "scaled estimator errors vs the limit law");
  add_kernel(c_lim, lim);
  add_model(c_lim, lim);
  add_search(c_lim, lim);
  lim.eps = 0.01;
  lim.n = 512;
  c_lim->add_option("--eps", lim.eps, "noise level");
  add_run(c_lim, lim);

  CLI::App* c_bnd = app.add_subcommand("bounds", "maximal-inequality verification sweep");
  add_kernel(c_bnd, bnd);
  add_model(c_bnd, bnd);
  add_search(c_bnd, bnd);
  bnd.replicates = 20000;
  c_bnd->add_option("--eps", bnd.eps, "noise level for the pathwise deviation check");
  add_run(c_bnd, bnd);

  try {
    std::vector<std::string> args = merge_config_args({argv + 1, argv + argc});
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_est->parsed()) return run_estimate(est);
    if (c_gde->parsed()) return run_gdelta(gde);
    if (c_con->parsed()) return run_consistency_cmd(con);
    if (c_lim->parsed()) return run_limit_dist_cmd(lim);
    if (c_bnd->parsed()) return run_bounds_cmd(bnd);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
