#include "branchsat/cfg.hpp"

#include <deque>

namespace branchsat {
namespace {

class Builder {
 public:
  explicit Builder(const FunctionDef& fn) : fn_(fn) {}

  Cfg run() {
    cfg_.entry = new_node();
    cfg_.exit = new_node();
    int end = lower_block(fn_.body, cfg_.entry);
    if (end >= 0) link(end, cfg_.exit);
    cfg_.node_count = next_;
    return std::move(cfg_);
  }

 private:
  int new_node() { return next_++; }

  void link(int from, int to, std::optional<BranchId> b = std::nullopt) {
    cfg_.edges.push_back({from, to, b});
  }

  /// Lowers a statement list starting in node `cur`; returns the node
  /// control falls out of, or -1 when every path returns.
  int lower_block(const std::vector<StmtPtr>& body, int cur) {
    for (const auto& s : body) {
      cur = lower_stmt(*s, cur);
      if (cur < 0) break;
    }
    return cur;
  }

  int lower_stmt(const Stmt& s, int cur) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign:
      case Stmt::Kind::ExprStmt:
        return cur;
      case Stmt::Kind::Return:
        link(cur, cfg_.exit);
        return -1;
      case Stmt::Kind::If: {
        int t = new_node();
        int f = new_node();
        link(cur, t, BranchId{s.cond.label, true});
        link(cur, f, BranchId{s.cond.label, false});
        int tend = lower_block(s.then_body, t);
        int fend = lower_block(s.else_body, f);
        if (tend < 0 && fend < 0) return -1;
        int join = new_node();
        if (tend >= 0) link(tend, join);
        if (fend >= 0) link(fend, join);
        return join;
      }
      case Stmt::Kind::While: {
        int head = new_node();
        int bodyn = new_node();
        int after = new_node();
        link(cur, head);
        link(head, bodyn, BranchId{s.cond.label, true});
        link(head, after, BranchId{s.cond.label, false});
        int bend = lower_block(s.then_body, bodyn);
        if (bend >= 0) link(bend, head);
        return after;
      }
    }
    return cur;
  }

  const FunctionDef& fn_;
  Cfg cfg_;
  int next_ = 0;
};

std::vector<bool> reachable_from(const Cfg& cfg, int start) {
  std::vector<std::vector<int>> adj(cfg.node_count);
  for (const auto& e : cfg.edges) adj[e.from].push_back(e.to);
  std::vector<bool> seen(cfg.node_count, false);
  std::deque<int> work{start};
  seen[start] = true;
  while (!work.empty()) {
    int n = work.front();
    work.pop_front();
    for (int m : adj[n]) {
      if (!seen[m]) {
        seen[m] = true;
        work.push_back(m);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Cfg::Edge> Cfg::out_edges(int node) const {
  std::vector<Edge> out;
  for (const auto& e : edges)
    if (e.from == node) out.push_back(e);
  return out;
}

Cfg build_cfg(const FunctionDef& fn) { return Builder(fn).run(); }

std::set<BranchId> list_branches(const Cfg& cfg) {
  std::set<BranchId> out;
  for (const auto& e : cfg.edges)
    if (e.branch) out.insert(*e.branch);
  return out;
}

std::set<BranchId> descendants(const Cfg& cfg, BranchId b) {
  const Cfg::Edge* edge = nullptr;
  for (const auto& e : cfg.edges)
    if (e.branch && *e.branch == b) edge = &e;
  if (!edge) throw std::out_of_range("unknown branch " + to_string(b));
  std::vector<bool> seen = reachable_from(cfg, edge->to);
  std::set<BranchId> out;
  for (const auto& e : cfg.edges)
    if (e.branch && *e.branch != b && seen[e.from]) out.insert(*e.branch);
  return out;
}

std::map<BranchId, std::set<BranchId>> all_descendants(const TypedProgram& tp) {
  std::map<BranchId, std::set<BranchId>> out;
  for (const auto& fn : tp.program->functions) {
    Cfg cfg = build_cfg(fn);
    for (BranchId b : list_branches(cfg)) out[b] = descendants(cfg, b);
  }
  return out;
}

std::set<BranchId> branch_universe(const TypedProgram& tp) {
  std::set<BranchId> out;
  for (const auto& [label, info] : tp.conds) {
    out.insert({label, true});
    out.insert({label, false});
  }
  return out;
}

}  // namespace branchsat
