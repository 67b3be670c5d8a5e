#include "branchsat/trace.hpp"

namespace branchsat {

std::set<BranchId> ExecutionTrace::branches_taken() const {
  std::set<BranchId> out;
  for (const auto& e : events) out.insert(e.branch);
  return out;
}

}  // namespace branchsat
