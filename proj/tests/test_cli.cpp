// End-to-end contract tests: spawn the CLI, compare bytes against the
// committed goldens, and check the documented exit codes.

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "cascade/initial_condition.hpp"
#include "cascade/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace cascade;

namespace {

const std::string kBin = CASCADE_CLI_PATH;
const fs::path kData = CASCADE_DATA_DIR;
const fs::path kGolden = CASCADE_GOLDEN_DIR;

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "cascade_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string log = (work_dir() / "cli.log").string();
  const std::string cmd = kBin + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void check_same_bytes(const fs::path& got, const fs::path& want) {
  INFO("comparing ", got.string(), " against golden ", want.string());
  REQUIRE(fs::exists(got));
  REQUIRE(fs::exists(want));
  CHECK(read_file(got.string()) == read_file(want.string()));
}

}  // namespace

TEST_CASE("solve reproduces the committed goldens byte for byte") {
  const auto out = work_dir() / "deg_n1.solve.csv";
  const std::string args = "solve --config " + (kData / "deg_n1_lognormal.json").string() +
                           " --out " + out.string() + " --lambdas 0,0.5,1 --grid log:0.2,5,9";
  REQUIRE(run_cli(args) == 0);
  check_same_bytes(out, kGolden / "deg_n1_lognormal.solve.csv");
  check_same_bytes(out.string() + ".json", kGolden / "deg_n1_lognormal.solve.csv.json");

  // a second run is byte-identical (determinism contract)
  const auto out2 = work_dir() / "deg_n1.solve.rerun.csv";
  REQUIRE(run_cli("solve --config " + (kData / "deg_n1_lognormal.json").string() + " --out " +
                  out2.string() + " --lambdas 0,0.5,1 --grid log:0.2,5,9") == 0);
  CHECK(read_file(out.string()) == read_file(out2.string()));
}

TEST_CASE("solve goldens cover modes and variable coefficients") {
  const auto mode_out = work_dir() / "iso_n3_mode.solve.csv";
  REQUIRE(run_cli("solve --config " + (kData / "iso_n3_mode.json").string() + " --out " +
                  mode_out.string() + " --lambdas 0.3 --grid log:0.5,2,5:0.6,1.2:0.8") == 0);
  check_same_bytes(mode_out, kGolden / "iso_n3_mode.solve.csv");

  const auto var_out = work_dir() / "varcoef.solve.csv";
  REQUIRE(run_cli("solve --config " + (kData / "varcoef_deg_n1.json").string() + " --out " +
                  var_out.string() + " --lambdas 0.75 --grid log:0.2,5,9") == 0);
  check_same_bytes(var_out, kGolden / "varcoef_deg_n1.solve.csv");
}

TEST_CASE("validate reproduces the committed reports") {
  for (const std::string name : {"deg_n1_lognormal", "iso_n3_lognormal", "varcoef_deg_n1"}) {
    const auto out = work_dir() / (name + ".validate.json");
    REQUIRE(run_cli("validate --config " + (kData / (name + ".json")).string() + " --out " +
                    out.string()) == 0);
    check_same_bytes(out, kGolden / (name + ".validate.json"));
  }
}

TEST_CASE("moments reproduce the committed goldens") {
  const auto out = work_dir() / "deg_n1.moments.csv";
  REQUIRE(run_cli("moments --config " + (kData / "deg_n1_lognormal.json").string() + " --out " +
                  out.string() + " --lambdas 0.1,0.5 --powers 0.5,1,2") == 0);
  check_same_bytes(out, kGolden / "deg_n1_lognormal.moments.csv");
}

TEST_CASE("at lambda = 0 the CSV equals the initial data sampled on the grid") {
  const auto out = work_dir() / "lambda0.csv";
  REQUIRE(run_cli("solve --config " + (kData / "deg_n1_lognormal.json").string() + " --out " +
                  out.string() + " --lambdas 0 --grid log:0.3,3,11") == 0);
  CsvData csv = parse_csv(read_file(out.string()));
  REQUIRE(csv.header == std::vector<std::string>{"lambda", "v1", "P", "abs_err_est"});
  InitialCondition ic = InitialCondition::log_normal_radial(0.0, 1.0);
  for (const auto& row : csv.rows) {
    CHECK(row[0] == 0.0);
    const std::vector<double> v = {row[1]};
    CHECK(row[2] == ic(v));  // bitwise: the Cauchy condition is exact
  }
}

TEST_CASE("emitted CSV re-parses and re-emits identically") {
  const std::string text = read_file((kGolden / "deg_n1_lognormal.solve.csv").string());
  CsvData csv = parse_csv(text);
  CHECK(make_csv(csv.header, csv.rows) == text);
}

TEST_CASE("config errors exit with code 1 and name the problem") {
  const auto out = work_dir() / "never_written.csv";
  CHECK(run_cli("solve --config " + (kData / "err_unknown_key.json").string() + " --out " +
                out.string()) == 1);
  CHECK(run_cli("solve --config " + (kData / "err_negative_c.json").string() + " --out " +
                out.string()) == 1);
  CHECK(run_cli("solve --config " + (kData / "err_syntax.json").string() + " --out " +
                out.string()) == 1);
  CHECK(run_cli("solve --config " + (kData / "err_bad_json.json").string() + " --out " +
                out.string()) == 1);
  // moments rejects non-density initial data
  CHECK(run_cli("moments --config " + (kData / "iso_n3_mode.json").string() + " --out " +
                out.string()) == 1);
}

TEST_CASE("I/O failures exit with code 3") {
  CHECK(run_cli("solve --config /nonexistent/cfg.json --out " +
                (work_dir() / "x.csv").string()) == 3);
  CHECK(run_cli("solve --config " + (kData / "deg_n1_lognormal.json").string() +
                " --out /nonexistent_dir/out.csv") == 3);
}
