#pragma once

#include <set>
#include <vector>

#include "branchsat/ast.hpp"

namespace branchsat {

/// One conditional evaluation during a run: which branch was taken and
/// the comparand values (already promoted to double).
struct BranchEvent {
  BranchId branch;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// What one execution did: the branch events in order plus the source
/// lines reached. `aborted` is set when the run hit a runtime error or
/// exhausted its step budget; aborted runs contribute no coverage.
struct ExecutionTrace {
  std::vector<BranchEvent> events;
  std::set<int> lines_hit;
  bool aborted = false;

  std::set<BranchId> branches_taken() const;
};

}  // namespace branchsat
