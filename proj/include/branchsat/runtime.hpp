#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "branchsat/coverage.hpp"
#include "branchsat/instrument.hpp"
#include "branchsat/trace.hpp"

namespace branchsat {

/// Distance-to-satisfaction of `a op b`. Non-negative, and zero exactly
/// when the comparison holds. Strict predicates pay `eps` at the
/// boundary; a squared difference that underflows on a false predicate
/// is floored at the smallest positive double. NaN operands give +inf.
double branch_distance(CmpOp op, double a, double b, double eps);

CmpOp opposite(CmpOp op);

/// Penalty update at one conditional. Returns the new value of the
/// accumulator r: 0 while both sides are unexplored, the distance
/// toward the unexplored side once the other is explored, and r
/// unchanged when both sides are explored.
double pen(int label, CmpOp op, double a, double b, double r,
           const CoverageState& cov, double eps);

struct ExecResult {
  double value = 0.0;  // entry return value (0 for aborted runs)
  double r = 1.0;      // penalty accumulator; +inf on abort
  ExecutionTrace trace;
  bool aborted = false;
  std::string abort_reason;  // "step-budget" | "runtime-error" detail
  std::uint64_t steps = 0;
};

/// Runs the entry function on the flattened input vector. When `cov` is
/// non-null, r starts at 1 and each instrumented conditional applies
/// pen against it; with null `cov` the run is plain execution. The
/// trace records branch events of instrumented conditionals only.
/// Division by zero, domain errors, and budget exhaustion abort the run
/// with r = +inf.
ExecResult execute(const InstrumentedProgram& ip,
                   const std::vector<double>& input, const CoverageState* cov,
                   double eps, const ExecLimits& limits = ExecLimits{});

}  // namespace branchsat
