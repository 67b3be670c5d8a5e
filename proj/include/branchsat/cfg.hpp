#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "branchsat/ast.hpp"
#include "branchsat/typecheck.hpp"

namespace branchsat {

/// Per-function control flow graph over basic-block nodes. Nodes are
/// opaque ints; `entry` is where execution starts, `exit` is the single
/// synthetic sink reached by every return.
struct Cfg {
  struct Edge {
    int from;
    int to;
    std::optional<BranchId> branch;  // set iff this edge takes a branch
  };
  int entry = 0;
  int exit = 0;
  int node_count = 0;
  std::vector<Edge> edges;

  std::vector<Edge> out_edges(int node) const;
};

/// Builds the CFG of one function. Loops contribute a back edge, so the
/// graph may be cyclic.
Cfg build_cfg(const FunctionDef& fn);

/// All branches appearing in `cfg`, i.e. both sides of every labeled
/// conditional of the function.
std::set<BranchId> list_branches(const Cfg& cfg);

/// Branches reachable strictly after taking `b`: the branches of every
/// edge leaving a node reachable from b's target, excluding b itself.
/// A loop branch is not its own descendant even when the back edge
/// returns to its conditional.
std::set<BranchId> descendants(const Cfg& cfg, BranchId b);

/// Descendant sets for every branch of every function in `tp`,
/// computed intraprocedurally.
std::map<BranchId, std::set<BranchId>> all_descendants(const TypedProgram& tp);

/// Union of list_branches over all functions: the branch universe.
std::set<BranchId> branch_universe(const TypedProgram& tp);

}  // namespace branchsat
