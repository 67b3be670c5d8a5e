#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "branchsat/coverage.hpp"
#include "branchsat/instrument.hpp"
#include "branchsat/optimizer.hpp"
#include "branchsat/typecheck.hpp"

namespace branchsat {

struct DriverConfig {
  std::set<std::string> targets;  // empty: entry only
  int n_start = 500;
  double epsilon = 0x1p-52;
  double wall_budget_sec = 60.0;
  std::uint64_t seed = 0;
  double sampler_wide_pct = 0.20;   // share of starts from U[-1e8, 1e8]
  double sampler_small_pct = 0.10;  // share from U[-4, 4]
  McmcConfig mcmc;
  ExecLimits limits;
};

struct GeneratedTest {
  std::vector<double> input;
  std::vector<BranchId> new_branches;  // branches this input covered first
};

struct DriverResult {
  CoverageState coverage;
  std::set<int> lines_hit;
  std::vector<GeneratedTest> tests;
  std::string termination;  // all-explored | starts-exhausted | time-out
  int starts_used = 0;
  std::uint64_t evaluations = 0;
  double wall_sec = 0.0;
};

/// Draws one starting point from the per-coordinate mixture: mostly
/// U[-1e3, 1e3], a wide share from U[-1e8, 1e8] for high-magnitude
/// thresholds, and a small share from U[-4, 4].
std::vector<double> sample_start(int dim, double wide_pct, double small_pct,
                                 std::mt19937_64& rng);

/// The coverage loop: repeatedly minimize the penalty objective from
/// random starts, record every zero-penalty input as a test, and flag a
/// branch infeasible when a completed minimization bottoms out above
/// zero. Stops on full exploration, start exhaustion, or the wall
/// budget.
DriverResult generate_tests(std::shared_ptr<const TypedProgram> tp,
                            const DriverConfig& cfg);

/// Pure random testing with the same start sampler, as a baseline.
/// Runs until the wall budget expires.
DriverResult random_baseline(std::shared_ptr<const TypedProgram> tp,
                             const DriverConfig& cfg);

struct BenchmarkEntry {
  std::string name;
  std::string file;
  std::string entry;
};

struct BenchmarkRow {
  std::string name;
  int branches_total = 0;
  double opt_pct = 0.0;
  double opt_sec = 0.0;
  double rand_pct = 0.0;
  std::string error;  // nonempty when the benchmark failed the frontend
};

struct BenchmarkSummary {
  std::vector<BenchmarkRow> rows;
  double opt_mean = 0.0;
  double rand_mean = 0.0;
};

std::vector<BenchmarkEntry> load_manifest(const std::string& path);

/// Runs the optimizer and the random baseline on every benchmark; the
/// baseline gets `rand_wall_factor` times the optimizer's wall budget.
BenchmarkSummary run_benchmark_suite(const std::vector<BenchmarkEntry>& suite,
                                     const DriverConfig& cfg,
                                     double rand_wall_factor = 10.0);

}  // namespace branchsat
