#include "branchsat/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "branchsat/driver.hpp"
#include "branchsat/instrument.hpp"
#include "branchsat/parser.hpp"
#include "branchsat/runtime.hpp"

namespace branchsat {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string dec_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json report_json(const CoverageReport& rep) {
  ordered_json j;
  j["branches_total"] = rep.branches_total;
  j["branches_covered"] = rep.branches_covered;
  j["branch_pct"] = rep.branch_pct;
  j["lines_total"] = rep.lines_total;
  j["lines_hit"] = rep.lines_hit;
  j["line_pct"] = rep.line_pct;
  ordered_json inf = ordered_json::array();
  for (BranchId b : rep.infeasible) inf.push_back(to_string(b));
  j["infeasible"] = inf;
  return j;
}

ordered_json result_json(const TypedProgram& tp, const DriverResult& res) {
  ordered_json j;
  j["entry"] = tp.entry;
  j["coverage"] = report_json(make_report(tp, res.coverage, res.lines_hit));
  ordered_json tests = ordered_json::array();
  for (const auto& t : res.tests) {
    ordered_json tj;
    ordered_json hex = ordered_json::array();
    ordered_json dec = ordered_json::array();
    for (double v : t.input) {
      hex.push_back(hex_double(v));
      dec.push_back(dec_double(v));
    }
    tj["input_hex"] = hex;
    tj["input"] = dec;
    ordered_json nb = ordered_json::array();
    for (BranchId b : t.new_branches) nb.push_back(to_string(b));
    tj["new_branches"] = nb;
    tests.push_back(tj);
  }
  j["tests"] = tests;
  j["termination"] = res.termination;
  j["starts_used"] = res.starts_used;
  j["evaluations"] = res.evaluations;
  return j;
}

void print_result_text(const TypedProgram& tp, const DriverResult& res) {
  CoverageReport rep = make_report(tp, res.coverage, res.lines_hit);
  std::printf("entry: %s\n", tp.entry.c_str());
  std::printf("branches: %d/%d (%.1f%%)\n", rep.branches_covered,
              rep.branches_total, rep.branch_pct);
  std::printf("lines:    %d/%d (%.1f%%)\n", rep.lines_hit, rep.lines_total,
              rep.line_pct);
  if (!rep.infeasible.empty()) {
    std::printf("infeasible:");
    for (BranchId b : rep.infeasible) std::printf(" %s", to_string(b).c_str());
    std::printf("\n");
  }
  std::printf("termination: %s (starts %d, evaluations %" PRIu64 ")\n",
              res.termination.c_str(), res.starts_used, res.evaluations);
  for (const auto& t : res.tests) {
    std::printf("test:");
    for (double v : t.input)
      std::printf(" %s (%s)", dec_double(v).c_str(), hex_double(v).c_str());
    std::printf("  covers");
    for (BranchId b : t.new_branches) std::printf(" %s", to_string(b).c_str());
    std::printf("\n");
  }
}

void print_bench_text(const BenchmarkSummary& s) {
  std::printf("%-16s %8s %10s %10s %8s %10s\n", "benchmark", "branches",
              "cover(%)", "time(s)", "rand(%)", "improve");
  for (const auto& r : s.rows) {
    if (!r.error.empty()) {
      std::printf("%-16s error: %s\n", r.name.c_str(), r.error.c_str());
      continue;
    }
    std::printf("%-16s %8d %10.1f %10.2f %8.1f %10.1f\n", r.name.c_str(),
                r.branches_total, r.opt_pct, r.opt_sec, r.rand_pct,
                r.opt_pct - r.rand_pct);
  }
  int ok = 0;
  for (const auto& r : s.rows)
    if (r.error.empty()) ok++;
  if (ok >= 2)
    std::printf("%-16s %8s %10.1f %10s %8.1f %10.1f\n", "MEAN", "", s.opt_mean,
                "", s.rand_mean, s.opt_mean - s.rand_mean);
}

ordered_json bench_json(const BenchmarkSummary& s) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    ordered_json rj;
    rj["name"] = r.name;
    if (!r.error.empty()) {
      rj["error"] = r.error;
    } else {
      rj["branches"] = r.branches_total;
      rj["cover_pct"] = r.opt_pct;
      rj["time_sec"] = r.opt_sec;
      rj["rand_pct"] = r.rand_pct;
      rj["improvement"] = r.opt_pct - r.rand_pct;
    }
    rows.push_back(rj);
  }
  j["benchmarks"] = rows;
  int ok = 0;
  for (const auto& r : s.rows)
    if (r.error.empty()) ok++;
  if (ok >= 2) {
    j["mean"] = {{"cover_pct", s.opt_mean},
                 {"rand_pct", s.rand_mean},
                 {"improvement", s.opt_mean - s.rand_mean}};
  }
  return j;
}

struct CommonOpts {
  std::string source;
  std::string entry;
  std::vector<std::string> targets;
  std::string format = "json";
  DriverConfig cfg;
};

void add_driver_flags(CLI::App* cmd, CommonOpts& o, bool needs_entry) {
  cmd->add_option("source", o.source, "FPC source file")->required();
  auto* entry = cmd->add_option("--entry", o.entry, "entry function name");
  if (needs_entry) entry->required();
  cmd->add_option("--targets", o.targets,
                  "additional functions to instrument (repeatable)");
  cmd->add_option("--n-start", o.cfg.n_start, "number of search starts")
      ->capture_default_str();
  cmd->add_option("--n-iter", o.cfg.mcmc.n_iter, "basin-hopping iterations")
      ->capture_default_str();
  cmd->add_option("--step-size", o.cfg.mcmc.step_size,
                  "perturbation half-width")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.cfg.epsilon,
                  "strict-inequality distance increment")
      ->capture_default_str();
  cmd->add_option("--wall-budget", o.cfg.wall_budget_sec,
                  "wall-clock budget in seconds")
      ->capture_default_str();
  cmd->add_option("--step-budget", o.cfg.limits.step_budget,
                  "interpreter steps per execution")
      ->capture_default_str();
  cmd->add_option("--seed", o.cfg.seed, "RNG seed")
      ->envname("BRANCHSAT_SEED")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "output format: text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--sampler-wide-pct", o.cfg.sampler_wide_pct,
                  "share of wide-range starting points")
      ->capture_default_str();
  cmd->add_flag("--literal-last-sample", o.cfg.mcmc.literal_last_sample,
                "return the chain's last accepted sample instead of best seen");
}

std::shared_ptr<const TypedProgram> frontend(const CommonOpts& o) {
  auto tp = typecheck(parse(read_file(o.source)), o.entry);
  return tp;
}

void fill_targets(const CommonOpts& o, DriverConfig& cfg) {
  for (const auto& t : o.targets) cfg.targets.insert(t);
  if (!o.targets.empty()) cfg.targets.insert(o.entry);
}

int run_driver(const CommonOpts& o, bool randomized) {
  auto tp = frontend(o);
  DriverConfig cfg = o.cfg;
  fill_targets(o, cfg);
  DriverResult res =
      randomized ? random_baseline(tp, cfg) : generate_tests(tp, cfg);
  if (o.format == "json")
    std::printf("%s\n", result_json(*tp, res).dump(2).c_str());
  else
    print_result_text(*tp, res);
  bool full =
      res.coverage.covered().size() == res.coverage.universe().size();
  return full ? 0 : 2;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"branchsat: branch-coverage test input generation for "
               "floating-point programs"};
  app.require_subcommand(1);

  CommonOpts cover_opts, rand_opts, dump_opts;
  std::string manifest;
  CommonOpts bench_opts;

  CLI::App* cover = app.add_subcommand(
      "cover", "generate a covering test suite by objective minimization");
  add_driver_flags(cover, cover_opts, true);

  CLI::App* rnd =
      app.add_subcommand("rand", "random-testing baseline coverage");
  add_driver_flags(rnd, rand_opts, true);

  CLI::App* bench = app.add_subcommand(
      "bench", "run a benchmark suite and compare against random");
  bench->add_option("manifest", manifest,
                    "JSON manifest: {benchmarks: [{file, entry}]}")
      ->required();
  bench->add_option("--n-start", bench_opts.cfg.n_start)->capture_default_str();
  bench->add_option("--n-iter", bench_opts.cfg.mcmc.n_iter)
      ->capture_default_str();
  bench->add_option("--step-size", bench_opts.cfg.mcmc.step_size)
      ->capture_default_str();
  bench->add_option("--epsilon", bench_opts.cfg.epsilon)->capture_default_str();
  bench->add_option("--wall-budget", bench_opts.cfg.wall_budget_sec,
                    "per-benchmark budget; random gets 10x")
      ->capture_default_str();
  bench->add_option("--step-budget", bench_opts.cfg.limits.step_budget)
      ->capture_default_str();
  bench->add_option("--seed", bench_opts.cfg.seed)
      ->envname("BRANCHSAT_SEED")
      ->capture_default_str();
  bench->add_option("--format", bench_opts.format)
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  bench->add_option("--sampler-wide-pct", bench_opts.cfg.sampler_wide_pct)
      ->capture_default_str();

  CLI::App* dump = app.add_subcommand(
      "dump-instrumented", "print the program with penalty updates spliced in");
  add_driver_flags(dump, dump_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cover->parsed()) return run_driver(cover_opts, false);
    if (rnd->parsed()) return run_driver(rand_opts, true);
    if (bench->parsed()) {
      auto suite = load_manifest(manifest);
      BenchmarkSummary s = run_benchmark_suite(suite, bench_opts.cfg);
      if (bench_opts.format == "json")
        std::printf("%s\n", bench_json(s).dump(2).c_str());
      else
        print_bench_text(s);
      return 0;
    }
    if (dump->parsed()) {
      auto tp = frontend(dump_opts);
      DriverConfig cfg;
      fill_targets(dump_opts, cfg);
      std::set<std::string> targets = cfg.targets;
      if (targets.empty()) targets.insert(dump_opts.entry);
      auto ip = instrument(tp, targets);
      std::printf("%s", render_instrumented(*ip).c_str());
      return 0;
    }
  } catch (const FrontendError& e) {
    std::fprintf(stderr, "error:%d:%d: %s\n", e.line, e.col, e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace branchsat
