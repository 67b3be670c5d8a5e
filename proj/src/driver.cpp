#include "branchsat/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "branchsat/parser.hpp"
#include "branchsat/runtime.hpp"

namespace branchsat {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Tries rounding the candidate to few decimal digits; equality
/// branches often have exact rational targets the line search only
/// approaches. Returns true and updates x when a rounded point scores
/// exactly zero.
bool snap_to_zero(const Objective& obj, std::vector<double>& x) {
  auto rounded = [](double v, int k) {
    double scale = std::pow(10.0, k);
    return std::round(v * scale) / scale;
  };
  for (int k = 0; k <= 12; ++k) {
    std::vector<double> cand(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cand[i] = rounded(x[i], k);
    if (obj(cand) == 0.0) {
      x = cand;
      return true;
    }
  }
  if (x.size() > 1) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int k = 0; k <= 12; ++k) {
        std::vector<double> cand = x;
        cand[i] = rounded(x[i], k);
        if (obj(cand) == 0.0) {
          x = cand;
          return true;
        }
      }
    }
  }
  return false;
}

std::set<std::string> effective_targets(const TypedProgram& tp,
                                        const DriverConfig& cfg) {
  std::set<std::string> t = cfg.targets;
  if (t.empty()) t.insert(tp.entry);
  return t;
}

/// Records a zero-penalty input: reruns it plain, folds its trace into
/// the coverage, and appends a test when it covered anything new.
void admit_input(const InstrumentedProgram& ip, const std::vector<double>& x,
                 const DriverConfig& cfg, DriverResult& out) {
  ExecResult run = execute(ip, x, nullptr, cfg.epsilon, cfg.limits);
  if (run.aborted) return;
  std::vector<BranchId> fresh;
  for (BranchId b : run.trace.branches_taken())
    if (out.coverage.universe().count(b) && !out.coverage.is_covered(b))
      fresh.push_back(b);
  out.coverage.record_trace(run.trace);
  out.lines_hit.insert(run.trace.lines_hit.begin(), run.trace.lines_hit.end());
  if (!fresh.empty()) out.tests.push_back({x, fresh});
}

}  // namespace

std::vector<double> sample_start(int dim, double wide_pct, double small_pct,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(dim);
  for (int i = 0; i < dim; ++i) {
    double u = unit(rng);
    double range = u < wide_pct ? 1e8 : (u < wide_pct + small_pct ? 4.0 : 1e3);
    std::uniform_real_distribution<double> coord(-range, range);
    x[i] = coord(rng);
  }
  return x;
}

DriverResult generate_tests(std::shared_ptr<const TypedProgram> tp,
                            const DriverConfig& cfg) {
  if (cfg.n_start < 1 || cfg.wall_budget_sec <= 0.0 || cfg.epsilon <= 0.0)
    throw std::invalid_argument("invalid driver configuration");
  auto targets = effective_targets(*tp, cfg);
  auto ip = instrument(tp, targets);
  DriverResult out;
  out.coverage = CoverageState(*tp, targets);
  std::mt19937_64 rng(cfg.seed);
  auto t0 = Clock::now();

  out.termination = "starts-exhausted";
  for (int k = 0; k < cfg.n_start; ++k) {
    if (out.coverage.all_explored()) {
      out.termination = "all-explored";
      break;
    }
    if (seconds_since(t0) > cfg.wall_budget_sec) {
      out.termination = "time-out";
      break;
    }
    out.starts_used++;
    std::vector<double> x0 =
        sample_start(tp->input_dimension, cfg.sampler_wide_pct,
                     cfg.sampler_small_pct, rng);
    Objective obj(ip, out.coverage, cfg.epsilon, cfg.limits);
    McmcConfig mc = cfg.mcmc;
    mc.seed = rng();
    MinimizeResult res =
        mcmc_minimize([&obj](const std::vector<double>& x) { return obj(x); },
                      x0, mc);
    std::vector<double> xs = res.x_star;
    double fs = res.f_star;
    if (fs > 0.0 && std::isfinite(fs) && fs < 0.1 && snap_to_zero(obj, xs))
      fs = 0.0;
    out.evaluations += obj.evaluations;
    if (std::getenv("BRANCHSAT_DEBUG")) {
      std::fprintf(stderr, "[start %d] x0=%.17g f*=%.17g x*=(", k, x0[0], fs);
      for (std::size_t i = 0; i < xs.size(); ++i)
        std::fprintf(stderr, "%s%.17g", i ? "," : "", xs[i]);
      std::fprintf(stderr, ") covered=%zu/%zu\n", out.coverage.covered().size(),
                   out.coverage.universe().size());
    }
    if (fs == 0.0) {
      admit_input(*ip, xs, cfg, out);
    } else if (std::isfinite(fs)) {
      ExecResult run = execute(*ip, xs, nullptr, cfg.epsilon, cfg.limits);
      if (!run.aborted) out.coverage.mark_infeasible_from(run.trace);
    }
  }
  if (out.coverage.all_explored()) out.termination = "all-explored";
  out.wall_sec = seconds_since(t0);
  return out;
}

DriverResult random_baseline(std::shared_ptr<const TypedProgram> tp,
                             const DriverConfig& cfg) {
  auto targets = effective_targets(*tp, cfg);
  auto ip = instrument(tp, targets);
  DriverResult out;
  out.coverage = CoverageState(*tp, targets);
  std::mt19937_64 rng(cfg.seed);
  auto t0 = Clock::now();

  out.termination = "time-out";
  // Check the clock in batches; one trial is microseconds.
  for (;;) {
    if (out.coverage.covered().size() == out.coverage.universe().size()) {
      out.termination = "all-explored";
      break;
    }
    if (seconds_since(t0) > cfg.wall_budget_sec) break;
    for (int i = 0; i < 256; ++i) {
      std::vector<double> x =
          sample_start(tp->input_dimension, cfg.sampler_wide_pct,
                       cfg.sampler_small_pct, rng);
      out.starts_used++;
      out.evaluations++;
      admit_input(*ip, x, cfg, out);
    }
  }
  out.wall_sec = seconds_since(t0);
  return out;
}

std::vector<BenchmarkEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::vector<BenchmarkEntry> out;
  for (const auto& b : j.at("benchmarks")) {
    BenchmarkEntry e;
    e.file = b.at("file").get<std::string>();
    e.entry = b.at("entry").get<std::string>();
    if (b.contains("name")) {
      e.name = b.at("name").get<std::string>();
    } else {
      std::size_t slash = e.file.find_last_of('/');
      std::string stem =
          slash == std::string::npos ? e.file : e.file.substr(slash + 1);
      std::size_t dot = stem.find_last_of('.');
      e.name = dot == std::string::npos ? stem : stem.substr(0, dot);
    }
    out.push_back(std::move(e));
  }
  return out;
}

BenchmarkSummary run_benchmark_suite(const std::vector<BenchmarkEntry>& suite,
                                     const DriverConfig& cfg,
                                     double rand_wall_factor) {
  BenchmarkSummary summary;
  double opt_sum = 0.0, rand_sum = 0.0;
  int ok = 0;
  for (const auto& bench : suite) {
    BenchmarkRow row;
    row.name = bench.name;
    try {
      std::ifstream in(bench.file);
      if (!in) throw std::runtime_error("cannot open " + bench.file);
      std::stringstream ss;
      ss << in.rdbuf();
      auto tp = typecheck(parse(ss.str()), bench.entry);

      DriverConfig opt_cfg = cfg;
      opt_cfg.targets.clear();
      DriverResult opt = generate_tests(tp, opt_cfg);
      CoverageReport orep = make_report(*tp, opt.coverage, opt.lines_hit);

      DriverConfig rnd_cfg = opt_cfg;
      rnd_cfg.wall_budget_sec = cfg.wall_budget_sec * rand_wall_factor;
      DriverResult rnd = random_baseline(tp, rnd_cfg);
      CoverageReport rrep = make_report(*tp, rnd.coverage, rnd.lines_hit);

      row.branches_total = orep.branches_total;
      row.opt_pct = orep.branch_pct;
      row.opt_sec = opt.wall_sec;
      row.rand_pct = rrep.branch_pct;
      opt_sum += row.opt_pct;
      rand_sum += row.rand_pct;
      ok++;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    summary.rows.push_back(std::move(row));
  }
  if (ok > 0) {
    summary.opt_mean = opt_sum / ok;
    summary.rand_mean = rand_sum / ok;
  }
  return summary;
}

}  // namespace branchsat
