#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "branchsat/coverage.hpp"
#include "branchsat/typecheck.hpp"

namespace branchsat {

/// One penalty injection: the comparison recorded ahead of a
/// conditional. Operands are already annotated for double promotion.
struct Injection {
  CmpOp op;
  const Expr* lhs;
  const Expr* rhs;
  bool promote;  // integer comparands cast to double
  std::string function;
};

/// A typed program plus the penalty injections for its target
/// functions. Conditionals of non-target callees branch normally and
/// never touch r.
struct InstrumentedProgram {
  std::shared_ptr<const TypedProgram> base;
  std::set<std::string> targets;
  std::map<int, Injection> injections;  // keyed by conditional label
};

/// Instruments every conditional of every function in `targets`.
/// Targets must include the entry; unknown names are a FrontendError.
std::shared_ptr<const InstrumentedProgram> instrument(
    std::shared_ptr<const TypedProgram> tp,
    const std::set<std::string>& targets);

struct ExecLimits {
  std::uint64_t step_budget = 1000000;
  int call_depth = 256;
};

/// The representing function: maps an input vector to the penalty
/// accumulator of one instrumented run, +inf when the run aborts.
/// Carries its own snapshot of the coverage state, so recording new
/// coverage elsewhere does not shift the landscape mid-minimization.
class Objective {
 public:
  Objective(std::shared_ptr<const InstrumentedProgram> ip, CoverageState cov,
            double eps, ExecLimits limits);

  double operator()(const std::vector<double>& x) const;

  int dimension() const;
  const CoverageState& coverage() const { return cov_; }
  const InstrumentedProgram& program() const { return *ip_; }
  double epsilon() const { return eps_; }
  const ExecLimits& limits() const { return limits_; }

  mutable std::uint64_t evaluations = 0;

 private:
  std::shared_ptr<const InstrumentedProgram> ip_;
  CoverageState cov_;
  double eps_;
  ExecLimits limits_;
};

Objective make_objective(std::shared_ptr<const InstrumentedProgram> ip,
                         const CoverageState& snapshot, double eps,
                         ExecLimits limits = ExecLimits{});

/// Renders the program back to source with the penalty update spliced
/// in ahead of each instrumented conditional, for inspection.
std::string render_instrumented(const InstrumentedProgram& ip);

}  // namespace branchsat
