#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>

#include "branchsat/driver.hpp"
#include "helpers.hpp"

using namespace branchsat;

TEST_CASE("start sampler mixes the three ranges") {
  std::mt19937_64 rng(8);
  int wide = 0, small = 0, mid = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    auto x = sample_start(1, 0.20, 0.10, rng);
    REQUIRE(x.size() == 1);
    double a = std::fabs(x[0]);
    REQUIRE(a <= 1e8);
    if (a > 1e3) ++wide;
    else if (a <= 4.0) ++small;
    else ++mid;
  }
  // |x| > 1e3 only from the wide range: 0.20 * (1 - 1e3/1e8)
  CHECK(wide / double(n) == doctest::Approx(0.20).epsilon(0.05));
  // |x| <= 4: all of the small range plus slivers of the others
  CHECK(small / double(n) == doctest::Approx(0.1028).epsilon(0.08));
  CHECK(mid > 0);
}

TEST_CASE("sampler dimension matches the entry layout") {
  std::mt19937_64 rng(1);
  CHECK(sample_start(3, 0.2, 0.1, rng).size() == 3);
}

TEST_CASE("generate_tests explores the two-conditional fixture") {
  auto tp = testutil::compile_benchmark("square_eq.fpc", "foo");
  DriverConfig cfg;
  cfg.seed = 7;
  cfg.n_start = 100;
  DriverResult res = generate_tests(tp, cfg);
  CHECK(res.termination == "all-explored");
  CHECK(res.coverage.all_explored());
  CHECK(res.coverage.covered().size() == 4);
  CHECK(res.coverage.infeasible().empty());
  CHECK_FALSE(res.tests.empty());
  CHECK(res.starts_used <= 100);
  CHECK(res.evaluations > 0);

  // every recorded test claims branches it actually covers first
  std::set<BranchId> seen;
  for (const auto& t : res.tests) {
    CHECK_FALSE(t.new_branches.empty());
    for (BranchId b : t.new_branches) CHECK(seen.insert(b).second);
  }
  CHECK(seen == res.coverage.covered());
}

TEST_CASE("generate_tests is deterministic per seed") {
  auto tp = testutil::compile_benchmark("square_eq.fpc", "foo");
  DriverConfig cfg;
  cfg.seed = 99;
  DriverResult a = generate_tests(tp, cfg);
  DriverResult b = generate_tests(tp, cfg);
  REQUIRE(a.tests.size() == b.tests.size());
  for (std::size_t i = 0; i < a.tests.size(); ++i) {
    CHECK(a.tests[i].input == b.tests[i].input);
    CHECK(a.tests[i].new_branches == b.tests[i].new_branches);
  }
  CHECK(a.starts_used == b.starts_used);
}

TEST_CASE("invalid driver configuration is rejected") {
  auto tp = testutil::compile_benchmark("square_eq.fpc", "foo");
  DriverConfig cfg;
  cfg.n_start = 0;
  CHECK_THROWS(generate_tests(tp, cfg));
  cfg = DriverConfig{};
  cfg.epsilon = 0.0;
  CHECK_THROWS(generate_tests(tp, cfg));
  cfg = DriverConfig{};
  cfg.wall_budget_sec = 0.0;
  CHECK_THROWS(generate_tests(tp, cfg));
}

TEST_CASE("an unsatisfiable equality gets flagged infeasible") {
  auto tp = testutil::compile_benchmark("square_unsat.fpc", "foo");
  DriverConfig cfg;
  cfg.seed = 7;
  DriverResult res = generate_tests(tp, cfg);
  CHECK(res.coverage.infeasible() == std::set<BranchId>{{1, true}});
  CHECK(res.coverage.covered().size() == 3);
  CHECK(res.termination == "all-explored");
}

TEST_CASE("random baseline respects budget and misses the equality") {
  auto tp = testutil::compile_benchmark("square_eq.fpc", "foo");
  DriverConfig cfg;
  cfg.seed = 13;
  cfg.wall_budget_sec = 0.5;
  DriverResult res = random_baseline(tp, cfg);
  CHECK(res.wall_sec < 5.0);
  CHECK(res.starts_used > 0);
  // y == 4 needs x in {-2, 2} exactly; uniform draws never land there
  CHECK(res.coverage.covered().count({1, true}) == 0);
  CHECK(res.coverage.covered().count({0, true}) == 1);
  CHECK(res.coverage.covered().count({0, false}) == 1);
}

TEST_CASE("manifest loading") {
  std::string root = testutil::repo_root();
  auto suite = load_manifest(root + "/benchmarks/manifest.json");
  CHECK(suite.size() >= 8);
  for (const auto& e : suite) {
    CHECK_FALSE(e.name.empty());
    CHECK_FALSE(e.entry.empty());
    std::ifstream probe(root + "/" + e.file);
    INFO(e.file);
    CHECK(bool(probe));
  }
  CHECK_THROWS(load_manifest(root + "/benchmarks/nope.json"));
}

TEST_CASE("benchmark suite reports rows and means") {
  std::string root = testutil::repo_root();
  std::vector<BenchmarkEntry> suite = {
      {"square_eq", root + "/benchmarks/square_eq.fpc", "foo"},
      {"broken", root + "/benchmarks/missing.fpc", "foo"},
  };
  DriverConfig cfg;
  cfg.seed = 7;
  cfg.wall_budget_sec = 5.0;
  BenchmarkSummary sum = run_benchmark_suite(suite, cfg, 0.2);
  REQUIRE(sum.rows.size() == 2);
  CHECK(sum.rows[0].error.empty());
  CHECK(sum.rows[0].branches_total == 4);
  CHECK(sum.rows[0].opt_pct == doctest::Approx(100.0));
  CHECK_FALSE(sum.rows[1].error.empty());
  // means skip the failed row
  CHECK(sum.opt_mean == doctest::Approx(sum.rows[0].opt_pct));
  CHECK(sum.rand_mean == doctest::Approx(sum.rows[0].rand_pct));
  CHECK(sum.rows[0].opt_pct > sum.rows[0].rand_pct);
}

TEST_CASE("targets beyond the entry widen the universe") {
  auto tp = testutil::compile_benchmark("square_eq.fpc", "foo");
  DriverConfig cfg;
  cfg.seed = 3;
  cfg.targets = {"foo", "square"};
  DriverResult res = generate_tests(tp, cfg);
  // square has no conditionals; the universe stays at foo's four
  CHECK(res.coverage.universe().size() == 4);
  CHECK(res.termination == "all-explored");
}
