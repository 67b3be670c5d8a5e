#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "branchsat/cfg.hpp"
#include "branchsat/trace.hpp"
#include "branchsat/typecheck.hpp"

namespace branchsat {

/// Tracks which branches have been covered and which are explored.
/// A branch is explored once it is covered and all its descendants are
/// covered or infeasible; infeasible branches are explored outright.
/// The universe is the union of the target functions' branches.
class CoverageState {
 public:
  CoverageState() = default;
  CoverageState(const TypedProgram& tp, const std::set<std::string>& targets);

  void record_trace(const ExecutionTrace& trace);
  void mark_covered(BranchId b);
  void mark_infeasible(BranchId b);
  /// Flags the unvisited side of the last conditional on `trace` as
  /// infeasible. No-op on an empty trace.
  void mark_infeasible_from(const ExecutionTrace& trace);

  bool is_covered(BranchId b) const { return covered_.count(b) != 0; }
  bool is_explored(BranchId b) const { return explored_.count(b) != 0; }
  bool is_infeasible(BranchId b) const { return infeasible_.count(b) != 0; }
  bool all_explored() const { return explored_.size() == universe_.size(); }

  const std::set<BranchId>& universe() const { return universe_; }
  const std::set<BranchId>& covered() const { return covered_; }
  const std::set<BranchId>& explored() const { return explored_; }
  const std::set<BranchId>& infeasible() const { return infeasible_; }
  const std::set<BranchId>& descendants(BranchId b) const;

 private:
  void recompute_explored();

  std::set<BranchId> universe_;
  std::set<BranchId> covered_;
  std::set<BranchId> explored_;
  std::set<BranchId> infeasible_;
  std::map<BranchId, std::set<BranchId>> descendants_;
};

/// Standalone saturation per the definition: covered branches whose
/// descendants are all covered or infeasible, plus the infeasible set.
std::set<BranchId> recompute_saturation(
    const std::set<BranchId>& covered, const std::set<BranchId>& infeasible,
    const std::map<BranchId, std::set<BranchId>>& descendants);

/// Line and branch totals for reporting.
struct CoverageReport {
  int branches_total = 0;
  int branches_covered = 0;
  double branch_pct = 0.0;
  int lines_total = 0;
  int lines_hit = 0;
  double line_pct = 0.0;
  std::vector<BranchId> infeasible;
};

CoverageReport make_report(const TypedProgram& tp, const CoverageState& cov,
                           const std::set<int>& lines_hit);

/// Executable source lines of `tp`, the denominator of line coverage.
std::set<int> executable_lines(const TypedProgram& tp);

}  // namespace branchsat
