#include "branchsat/coverage.hpp"

#include <functional>

namespace branchsat {

CoverageState::CoverageState(const TypedProgram& tp,
                             const std::set<std::string>& targets) {
  std::set<std::string> effective = targets;
  if (effective.empty()) effective.insert(tp.entry);
  auto desc = all_descendants(tp);
  for (const auto& name : effective) {
    auto it = tp.labels_by_function.find(name);
    if (it == tp.labels_by_function.end()) continue;
    for (int label : it->second) {
      for (bool side : {true, false}) {
        BranchId b{label, side};
        universe_.insert(b);
        descendants_[b] = desc[b];
      }
    }
  }
  // Descendants outside the universe (a target whose conditionals reach
  // non-target labels cannot occur: descendants are intraprocedural and
  // a function is instrumented whole) stay as computed.
}

const std::set<BranchId>& CoverageState::descendants(BranchId b) const {
  auto it = descendants_.find(b);
  if (it == descendants_.end())
    throw std::out_of_range("unknown branch " + to_string(b));
  return it->second;
}

void CoverageState::record_trace(const ExecutionTrace& trace) {
  if (trace.aborted) return;
  for (const auto& e : trace.events)
    if (universe_.count(e.branch)) covered_.insert(e.branch);
  recompute_explored();
}

void CoverageState::mark_covered(BranchId b) {
  covered_.insert(b);
  recompute_explored();
}

void CoverageState::mark_infeasible(BranchId b) {
  infeasible_.insert(b);
  recompute_explored();
}

void CoverageState::mark_infeasible_from(const ExecutionTrace& trace) {
  if (trace.events.empty()) return;
  BranchId other = opposite_branch(trace.events.back().branch);
  if (is_covered(other) || is_explored(other)) return;
  mark_infeasible(other);
}

void CoverageState::recompute_explored() {
  explored_ = recompute_saturation(covered_, infeasible_, descendants_);
}

std::set<BranchId> recompute_saturation(
    const std::set<BranchId>& covered, const std::set<BranchId>& infeasible,
    const std::map<BranchId, std::set<BranchId>>& descendants) {
  std::set<BranchId> out = infeasible;
  for (BranchId b : covered) {
    bool sat = true;
    auto it = descendants.find(b);
    if (it != descendants.end()) {
      for (BranchId d : it->second) {
        if (!covered.count(d) && !infeasible.count(d)) {
          sat = false;
          break;
        }
      }
    }
    if (sat) out.insert(b);
  }
  return out;
}

std::set<int> executable_lines(const TypedProgram& tp) {
  std::set<int> out;
  std::function<void(const std::vector<StmtPtr>&)> walk =
      [&](const std::vector<StmtPtr>& body) {
        for (const auto& s : body) {
          out.insert(s->line);
          if (s->kind == Stmt::Kind::If || s->kind == Stmt::Kind::While) {
            walk(s->then_body);
            walk(s->else_body);
          }
        }
      };
  for (const auto& fn : tp.program->functions) walk(fn.body);
  return out;
}

CoverageReport make_report(const TypedProgram& tp, const CoverageState& cov,
                           const std::set<int>& lines_hit) {
  CoverageReport rep;
  rep.branches_total = static_cast<int>(cov.universe().size());
  rep.branches_covered = static_cast<int>(cov.covered().size());
  rep.branch_pct = rep.branches_total == 0
                       ? 100.0
                       : 100.0 * rep.branches_covered / rep.branches_total;
  std::set<int> all = executable_lines(tp);
  rep.lines_total = static_cast<int>(all.size());
  int hit = 0;
  for (int l : lines_hit)
    if (all.count(l)) hit++;
  rep.lines_hit = hit;
  rep.line_pct = rep.lines_total == 0 ? 100.0 : 100.0 * hit / rep.lines_total;
  rep.infeasible.assign(cov.infeasible().begin(), cov.infeasible().end());
  return rep;
}

}  // namespace branchsat
