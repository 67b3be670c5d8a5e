#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "branchsat/ast.hpp"

namespace branchsat {

/// Comparison at one labeled conditional, after type analysis.
struct CondInfo {
  CmpOp op;
  const Expr* lhs;
  const Expr* rhs;
  bool promote;          // integer comparands, promoted to double for pen
  std::string function;  // owning function
};

/// A typechecked program. Owns the Program; the raw pointers in `conds`
/// point into it and stay valid for the TypedProgram's lifetime.
struct TypedProgram {
  std::shared_ptr<const Program> program;
  std::string entry;
  int input_dimension = 0;  // flattened: scalars 1 slot, arrays their length
  std::map<int, CondInfo> conds;
  std::map<std::string, const FunctionDef*> functions;
  std::map<std::string, std::vector<int>> labels_by_function;  // source order

  const FunctionDef& function(const std::string& name) const;
  /// Flattened input slots of the entry, in declaration order.
  std::vector<std::pair<std::string, int>> entry_layout() const;
};

/// Typechecks and resolves `program` with the given entry function.
/// Verifies: every call resolves, entry has floating-point inputs,
/// conditionals compare scalars, double functions return on all paths,
/// and no statement is unreachable. Throws FrontendError.
std::shared_ptr<const TypedProgram> typecheck(
    std::shared_ptr<const Program> program, const std::string& entry);

bool is_builtin(const std::string& name);

}  // namespace branchsat
