// End-to-end checks of the command-line front end: exit codes, printed
// output, file artifacts, and byte-level determinism across thread counts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct CliResult {
  int exit_code;
  std::string output;  // stdout and stderr merged
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(OUL1_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
  const int status = pclose(pipe);
  return CliResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("estimate recovers the drift exactly at zero noise") {
  const CliResult r = run_cli(
      "estimate --kernel fbm:H=0.7 --theta0 1 --x0 1 --eps 0 --n 256 "
      "--theta-lo 0 --theta-hi 2 --seed 42");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("theta_hat = 1.000000") != std::string::npos);
  CHECK(r.output.find("kernel = fbm:H=0.7") != std::string::npos);
}

TEST_CASE("gdelta prints the closed-form separation") {
  const CliResult r = run_cli("gdelta --theta0 0 --x0 1 --delta 1 --T 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.3678794") != std::string::npos);
}

TEST_CASE("missing required key in a config file is a usage error naming the key") {
  const TempDir dir("oul1_cli_cfg");
  const auto cfg = dir.path / "cfg.txt";
  {
    std::ofstream out(cfg);
    out << "# consistency sweep without a delta\n";
    out << "kernel = fbm:H=0.7\n";
    out << "theta0 = 1\n";
    out << "eps-list = 0.2,0.1\n";
    out << "replicates = 5\n";
    out << "n = 32\n";
  }
  const CliResult r = run_cli("consistency --config " + cfg.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("delta") != std::string::npos);
}

TEST_CASE("flags override config file values") {
  const TempDir dir("oul1_cli_override");
  const auto cfg = dir.path / "cfg.txt";
  {
    std::ofstream out(cfg);
    out << "theta0 = 1.5\n";
    out << "delta = 1\n";
  }
  const CliResult r = run_cli("gdelta --config " + cfg.string() + " --theta0 0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.3678794") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("estimate --kernel fbm:H=0.7 --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("estimate --kernel weird:H=0.7").exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);
  // theta0 outside the search interval: rejected as a usage error
  CHECK(run_cli("estimate --kernel bm --theta0 5 --theta-lo 0 --theta-hi 2").exit_code == 2);
}

TEST_CASE("runtime failures exit with code 1") {
  // symmetric with a nonnegative diagonal, so it parses, but indefinite: the
  // factorization fails after jitter escalation
  const TempDir dir("oul1_cli_indef");
  const auto csv = dir.path / "indefinite.csv";
  {
    std::ofstream out(csv);
    out << "0,0.5,1\n";
    out << "0,0,0\n";
    out << "0,1,2\n";
    out << "0,2,1\n";
  }
  const CliResult r =
      run_cli("simulate --kernel tabulated:" + csv.string() + " --n 2 --T 1 --out " +
              dir.path.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("degenera") != std::string::npos);
}

TEST_CASE("simulate writes config-stamped, reproducible path files") {
  const TempDir dir1("oul1_cli_sim1");
  const TempDir dir2("oul1_cli_sim2");
  const std::string base = "simulate --kernel fbm:H=0.7 --theta0 1 --x0 1 --eps 0.1 --n 64 --seed 9 ";
  CHECK(run_cli(base + "--out " + dir1.path.string()).exit_code == 0);
  CHECK(run_cli(base + "--out " + dir2.path.string()).exit_code == 0);

  const std::string g1 = slurp(dir1.path / "path_G.csv");
  CHECK(g1.rfind("# experiment = simulate", 0) == 0);
  CHECK(g1.find("t,value") != std::string::npos);
  CHECK(g1 == slurp(dir2.path / "path_G.csv"));
  CHECK(slurp(dir1.path / "path_X.csv") == slurp(dir2.path / "path_X.csv"));
}

TEST_CASE("consistency outputs are byte-identical across thread counts") {
  const TempDir dir1("oul1_cli_con1");
  const TempDir dir2("oul1_cli_con2");
  const std::string base =
      "consistency --kernel fbm:H=0.7 --theta0 1 --x0 1 --eps-list 0.3,0.1 --delta 0.1 "
      "--n 32 --theta-lo 0 --theta-hi 2 --replicates 20 --seed 11 --aux-draws 200 ";
  CHECK(run_cli(base + "--threads 1 --out " + dir1.path.string()).exit_code == 0);
  CHECK(run_cli(base + "--threads 4 --out " + dir2.path.string()).exit_code == 0);
  CHECK(slurp(dir1.path / "consistency_report.json") ==
        slurp(dir2.path / "consistency_report.json"));
  CHECK(slurp(dir1.path / "consistency_samples.csv") ==
        slurp(dir2.path / "consistency_samples.csv"));
  const std::string csv = slurp(dir1.path / "consistency_samples.csv");
  CHECK(csv.rfind("# experiment = consistency", 0) == 0);
  CHECK(csv.find("replicate,eps,theta_hat,exceeded") != std::string::npos);
}

TEST_CASE("limit-dist writes the three artifacts with sample dumps") {
  const TempDir dir("oul1_cli_lim");
  const CliResult r = run_cli(
      "limit-dist --kernel fbm:H=0.7 --theta0 1 --x0 1 --eps 0.05 --n 64 "
      "--theta-lo 0 --theta-hi 2 --replicates 25 --seed 13 --out " +
      dir.path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("ks = ") != std::string::npos);
  const std::string u = slurp(dir.path / "u_eps.csv");
  const std::string z = slurp(dir.path / "zeta.csv");
  CHECK(u.find("replicate,u_eps") != std::string::npos);
  CHECK(z.find("replicate,zeta") != std::string::npos);
  CHECK(slurp(dir.path / "limit_dist_report.json").find("\"ks\"") != std::string::npos);
}

TEST_CASE("bounds writes a JSON report with the per-kernel record") {
  const TempDir dir("oul1_cli_bnd");
  const CliResult r = run_cli(
      "bounds --kernel fbm:H=0.7 --theta0 1 --x0 1 --eps 0.1 --n 32 "
      "--replicates 400 --seed 17 --out " +
      dir.path.string());
  CHECK(r.exit_code == 0);
  const std::string report = slurp(dir.path / "bounds_report.json");
  CHECK(report.find("\"kernel\"") != std::string::npos);
  CHECK(report.find("\"m_hat\"") != std::string::npos);
  CHECK(report.find("\"tail_checks\"") != std::string::npos);
  CHECK(r.output.find("gronwall holds on 400/400") != std::string::npos);
}
