#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "helpers.hpp"

using testutil::run_cli;

namespace {

std::string bench(const std::string& name) {
  return testutil::repo_root() + "/benchmarks/" + name;
}

}  // namespace

TEST_CASE("cover emits the report schema and exits 0 on full coverage") {
  auto res = run_cli("cover " + bench("square_eq.fpc") +
                     " --entry foo --seed 7 --format json");
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.output);
  CHECK(j.at("entry") == "foo");
  const auto& cov = j.at("coverage");
  CHECK(cov.at("branches_total") == 4);
  CHECK(cov.at("branches_covered") == 4);
  CHECK(cov.at("branch_pct") == 100.0);
  CHECK(cov.at("lines_total").is_number());
  CHECK(cov.at("lines_hit").is_number());
  CHECK(cov.at("line_pct").is_number());
  CHECK(cov.at("infeasible").is_array());
  CHECK(cov.at("infeasible").empty());
  REQUIRE(j.at("tests").is_array());
  CHECK_FALSE(j.at("tests").empty());
  for (const auto& t : j.at("tests")) {
    CHECK(t.at("input").is_array());
    CHECK(t.at("input_hex").is_array());
    CHECK_FALSE(t.at("new_branches").empty());
  }
  CHECK(j.at("termination") == "all-explored");
}

TEST_CASE("partial coverage exits 2 and lists infeasible flags") {
  auto res = run_cli("cover " + bench("square_unsat.fpc") +
                     " --entry foo --seed 7 --format json");
  CHECK(res.exit_code == 2);
  auto j = nlohmann::json::parse(res.output);
  CHECK(j.at("coverage").at("infeasible") ==
        nlohmann::json::array({"1T"}));
  CHECK(j.at("coverage").at("branches_covered") == 3);
}

TEST_CASE("json output is byte-stable for a fixed seed") {
  std::string cmd = "cover " + bench("kcos.fpc") +
                    " --entry kernel_cos --seed 42 --format json";
  auto a = run_cli(cmd);
  auto b = run_cli(cmd);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.output == b.output);
}

TEST_CASE("seed changes the generated inputs") {
  std::string base = "cover " + bench("square_eq.fpc") + " --entry foo --format json";
  auto a = run_cli(base + " --seed 1");
  auto b = run_cli(base + " --seed 2");
  auto ja = nlohmann::json::parse(a.output);
  auto jb = nlohmann::json::parse(b.output);
  CHECK(ja.at("tests") != jb.at("tests"));
}

TEST_CASE("environment seed is a fallback") {
  auto flag = run_cli("cover " + bench("square_eq.fpc") +
                      " --entry foo --seed 31 --format json");
  const char* bin = std::getenv("BRANCHSAT_CLI");
  REQUIRE(bin);
  std::string cmd = std::string("BRANCHSAT_SEED=31 ") + bin + " cover " +
                    bench("square_eq.fpc") + " --entry foo --format json 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  CHECK(out == flag.output);
}

TEST_CASE("usage and frontend errors exit 1") {
  CHECK(run_cli("cover " + bench("nope.fpc") + " --entry foo").exit_code == 1);
  CHECK(run_cli("cover --entry foo").exit_code == 1);
  CHECK(run_cli("cover " + bench("square_eq.fpc") + " --entry nope").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("cover " + bench("square_eq.fpc") + " --entry foo --bogus-flag")
            .exit_code == 1);
}

TEST_CASE("frontend errors carry positions") {
  std::string tmp = "/tmp/branchsat_cli_bad.fpc";
  {
    std::ofstream out(tmp);
    out << "double f(double x) {\n  return y;\n}\n";
  }
  auto res = run_cli("cover " + tmp + " --entry f");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("2") != std::string::npos);
  CHECK(res.output.find("error") != std::string::npos);
}

TEST_CASE("help lists the documented flags") {
  auto res = run_cli("cover --help");
  CHECK(res.exit_code == 0);
  for (const char* flag :
       {"--entry", "--targets", "--n-start", "--n-iter", "--step-size",
        "--epsilon", "--wall-budget", "--step-budget", "--seed", "--format",
        "--sampler-wide-pct", "--literal-last-sample"})
    CHECK(res.output.find(flag) != std::string::npos);
}

TEST_CASE("rand subcommand works the same surfaces") {
  auto res = run_cli("rand " + bench("square_eq.fpc") +
                     " --entry foo --seed 7 --wall-budget 0.5 --format json");
  CHECK(res.exit_code == 2);  // the equality branch is unreachable randomly
  auto j = nlohmann::json::parse(res.output);
  CHECK(j.at("coverage").at("branches_covered") == 3);
}

TEST_CASE("dump-instrumented prints the penalty updates") {
  auto res =
      run_cli("dump-instrumented " + bench("square_eq.fpc") + " --entry foo");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("pen(") != std::string::npos);
}

TEST_CASE("text format is human-oriented") {
  auto res = run_cli("cover " + bench("square_eq.fpc") +
                     " --entry foo --seed 7 --format text");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("branches:") != std::string::npos);
  CHECK(res.output.find("100.0%") != std::string::npos);
}
