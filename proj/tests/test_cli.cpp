#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "robuststl/csv_io.hpp"

using robuststl::io::SeriesFile;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the built binary through the shell with stdout/stderr captured to
/// scratch files. `env_prefix` allows per-invocation environment overrides
/// such as "ROBUSTSTL_THREADS=1".
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = "cli_stdout.txt";
  const std::string err_path = "cli_stderr.txt";
  std::string command = env_prefix;
  if (!command.empty()) command += ' ';
  command += '"';
  command += ROBUSTSTL_CLI_PATH;
  command += "\" ";
  command += args;
  command += " > " + out_path + " 2> " + err_path;

  RunResult result;
  const int status = std::system(command.c_str());
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

  const auto slurp = [](const std::string& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  };
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct Cleanup {
  explicit Cleanup(std::vector<std::string> paths) : paths(std::move(paths)) {}
  ~Cleanup() {
    for (const std::string& p : paths) std::remove(p.c_str());
  }
  std::vector<std::string> paths;
};

}  // namespace

TEST_CASE("generate writes the default series with ground-truth columns") {
  Cleanup cleanup({"cli_gen_default.csv"});
  const RunResult r = run_cli("generate --out cli_gen_default.csv");
  REQUIRE(r.exit_code == 0);

  const SeriesFile file = SeriesFile::read("cli_gen_default.csv");
  CHECK(file.rows() == 750);
  for (const char* name : {"value", "trend", "seasonal", "anomaly", "noise"}) {
    CHECK(file.has_column(name));
  }
}

TEST_CASE("generate is deterministic per seed and sensitive to it") {
  Cleanup cleanup({"cli_gen_a.csv", "cli_gen_b.csv", "cli_gen_c.csv"});
  REQUIRE(run_cli("generate --seed 11 --out cli_gen_a.csv").exit_code == 0);
  REQUIRE(run_cli("generate --seed 11 --out cli_gen_b.csv").exit_code == 0);
  REQUIRE(run_cli("generate --seed 12 --out cli_gen_c.csv").exit_code == 0);
  const std::string a = slurp_file("cli_gen_a.csv");
  CHECK(a == slurp_file("cli_gen_b.csv"));
  CHECK(a != slurp_file("cli_gen_c.csv"));
}

TEST_CASE("generate with all randomness disabled is a bare wave") {
  Cleanup cleanup({"cli_gen_clean.csv"});
  const RunResult r = run_cli(
      "generate --period 10 --periods 4 --noise-variance 0 "
      "--level-changes 0 --anomalies 0 --max-shift 0 "
      "--out cli_gen_clean.csv");
  REQUIRE(r.exit_code == 0);
  const SeriesFile file = SeriesFile::read("cli_gen_clean.csv");
  const std::vector<double>& value = file.column("value");
  const std::vector<double>& seasonal = file.column("seasonal");
  REQUIRE(value.size() == 40);
  for (std::size_t i = 0; i < value.size(); ++i) {
    CHECK(value[i] == seasonal[i]);
  }
}

TEST_CASE("decompose splits a generated series and evaluate scores it") {
  Cleanup cleanup({"cli_series.csv", "cli_result.csv", "cli_diag.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --level-changes 2 "
                  "--anomalies 3 --seed 5 --out cli_series.csv")
              .exit_code == 0);

  // Whether 50 noisy points converge within tolerance depends on the data;
  // both exit 0 and the budget-exhausted exit 4 write the full output this
  // test is about.
  const RunResult dec = run_cli(
      "decompose --in cli_series.csv --period 10 --out cli_result.csv "
      "--diagnostics cli_diag.csv --season-h 2");
  REQUIRE((dec.exit_code == 0 || dec.exit_code == 4));

  const SeriesFile result = SeriesFile::read("cli_result.csv");
  REQUIRE(result.rows() == 50);
  const std::vector<double>& value = result.column("value");
  const std::vector<double>& trend = result.column("trend");
  const std::vector<double>& seasonal = result.column("seasonal");
  const std::vector<double>& remainder = result.column("remainder");
  for (std::size_t t = 0; t < value.size(); ++t) {
    const double gap = value[t] - trend[t] - seasonal[t] - remainder[t];
    CHECK(std::abs(gap) < 1e-9);
  }

  const SeriesFile diag = SeriesFile::read("cli_diag.csv");
  CHECK(diag.rows() >= 1);
  CHECK(diag.has_column("solver_objective"));

  const RunResult eva = run_cli(
      "evaluate --result cli_result.csv --truth cli_series.csv");
  REQUIRE(eva.exit_code == 0);
  double trend_mse = -1.0, trend_mae = -1.0, season_mse = -1.0,
         season_mae = -1.0;
  std::istringstream lines(eva.out);
  std::string line;
  int parsed = 0;
  while (std::getline(lines, line)) {
    parsed += std::sscanf(line.c_str(), "trend_mse=%lf", &trend_mse);
    parsed += std::sscanf(line.c_str(), "trend_mae=%lf", &trend_mae);
    parsed += std::sscanf(line.c_str(), "season_mse=%lf", &season_mse);
    parsed += std::sscanf(line.c_str(), "season_mae=%lf", &season_mae);
  }
  CHECK(parsed == 4);
  CHECK(trend_mse >= 0.0);
  CHECK(trend_mae >= 0.0);
  CHECK(season_mse >= 0.0);
  CHECK(season_mae >= 0.0);
}

TEST_CASE("decompose handles a constant series") {
  Cleanup cleanup({"cli_const.csv", "cli_const_out.csv"});
  SeriesFile input;
  input.add_column("value", std::vector<double>(30, 4.5));
  input.write("cli_const.csv");

  const RunResult r = run_cli(
      "decompose --in cli_const.csv --period 10 --out cli_const_out.csv");
  REQUIRE(r.exit_code == 0);
  const SeriesFile out = SeriesFile::read("cli_const_out.csv");
  for (double v : out.column("trend")) {
    CHECK(v == doctest::Approx(4.5).epsilon(1e-9));
  }
  for (double v : out.column("seasonal")) {
    CHECK(std::abs(v) < 1e-9);
  }
}

TEST_CASE("a classical baseline can be emitted alongside the result") {
  Cleanup cleanup({"cli_base_in.csv", "cli_base_out.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --seed 3 "
                  "--out cli_base_in.csv")
              .exit_code == 0);
  const RunResult r = run_cli(
      "decompose --in cli_base_in.csv --period 10 --out cli_base_out.csv "
      "--season-h 2 --baseline classical");
  REQUIRE((r.exit_code == 0 || r.exit_code == 4));
  const SeriesFile out = SeriesFile::read("cli_base_out.csv");
  CHECK(out.has_column("baseline_trend"));
  CHECK(out.has_column("baseline_seasonal"));
  CHECK(out.has_column("baseline_remainder"));

  const RunResult bad = run_cli(
      "decompose --in cli_base_in.csv --period 10 --out cli_base_out.csv "
      "--baseline bogus");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("corrupt input data names the offending line and exits 2") {
  Cleanup cleanup({"cli_nan.csv", "cli_nan_out.csv"});
  std::ofstream out("cli_nan.csv");
  out << "t,value\n";
  for (int i = 1; i <= 30; ++i) {
    if (i == 17) {
      out << i << ",nan\n";
    } else {
      out << i << "," << (i % 7) << "\n";
    }
  }
  out.close();

  const RunResult r = run_cli(
      "decompose --in cli_nan.csv --period 10 --out cli_nan_out.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 18") != std::string::npos);
}

TEST_CASE("evaluate of a result against itself scores zero") {
  Cleanup cleanup({"cli_self.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --seed 9 "
                  "--out cli_self.csv")
              .exit_code == 0);
  const RunResult r = run_cli(
      "evaluate --result cli_self.csv --truth cli_self.csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("trend_mse=0\n") != std::string::npos);
  CHECK(r.out.find("season_mae=0\n") != std::string::npos);
}

TEST_CASE("evaluate with mismatched lengths exits 6") {
  Cleanup cleanup({"cli_len_a.csv", "cli_len_b.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --out cli_len_a.csv")
              .exit_code == 0);
  REQUIRE(run_cli("generate --period 10 --periods 6 --out cli_len_b.csv")
              .exit_code == 0);
  const RunResult r = run_cli(
      "evaluate --result cli_len_a.csv --truth cli_len_b.csv");
  CHECK(r.exit_code == 6);
}

TEST_CASE("missing files exit 3") {
  CHECK(run_cli("decompose --in no_such_file.csv --period 10 --out x.csv")
            .exit_code == 3);
  CHECK(run_cli("evaluate --result no_such_file.csv --truth also_missing.csv")
            .exit_code == 3);
}

TEST_CASE("unknown flags and missing requireds exit 2") {
  CHECK(run_cli("decompose --in a.csv --period 10 --out b.csv --nope")
            .exit_code == 2);
  CHECK(run_cli("decompose --in a.csv --out b.csv").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("help exits 0") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("decompose --help").exit_code == 0);
}

TEST_CASE("the thread cap changes nothing in the output") {
  Cleanup cleanup({"cli_thr_in.csv", "cli_thr_1.csv", "cli_thr_3.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --seed 21 "
                  "--out cli_thr_in.csv")
              .exit_code == 0);
  const RunResult one = run_cli("decompose --in cli_thr_in.csv --period 10 "
                                "--out cli_thr_1.csv --season-h 2",
                                "ROBUSTSTL_THREADS=1");
  const RunResult three = run_cli("decompose --in cli_thr_in.csv --period 10 "
                                  "--out cli_thr_3.csv --season-h 2",
                                  "ROBUSTSTL_THREADS=3");
  REQUIRE((one.exit_code == 0 || one.exit_code == 4));
  CHECK(three.exit_code == one.exit_code);
  CHECK(slurp_file("cli_thr_1.csv") == slurp_file("cli_thr_3.csv"));

  const RunResult bad = run_cli("generate --out cli_thr_bad.csv",
                                "ROBUSTSTL_THREADS=abc");
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("ROBUSTSTL_THREADS") != std::string::npos);
}

TEST_CASE("an exhausted outer budget exits 4 but still writes output") {
  Cleanup cleanup({"cli_budget_in.csv", "cli_budget_out.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --seed 2 "
                  "--out cli_budget_in.csv")
              .exit_code == 0);
  const RunResult r = run_cli(
      "decompose --in cli_budget_in.csv --period 10 --out cli_budget_out.csv "
      "--season-h 2 --max-iterations 1 --tolerance 1e-12");
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("warning") != std::string::npos);
  const SeriesFile out = SeriesFile::read("cli_budget_out.csv");
  CHECK(out.rows() == 50);
}

TEST_CASE("a starved trend solver exits 5") {
  Cleanup cleanup(
      {"cli_starve_in.csv", "cli_starve_out.csv", "cli_starve_diag.csv"});
  REQUIRE(run_cli("generate --period 10 --periods 5 --seed 4 "
                  "--out cli_starve_in.csv")
              .exit_code == 0);
  const RunResult r = run_cli(
      "decompose --in cli_starve_in.csv --period 10 "
      "--out cli_starve_out.csv --diagnostics cli_starve_diag.csv "
      "--season-h 2 --solver-max-iterations 1");
  CHECK(r.exit_code == 5);
  CHECK(r.err.find("error") != std::string::npos);
  // No result file on solver failure, but diagnostics still appear.
  std::ifstream missing("cli_starve_out.csv");
  CHECK_FALSE(missing.good());
  std::ifstream diag("cli_starve_diag.csv");
  CHECK(diag.good());
}
