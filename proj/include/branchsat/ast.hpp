// AST for FPC, a minimal C-like floating-point language.
#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace branchsat {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BinOp { Add, Sub, Mul, Div };
enum class ScalarType { Double, Int };

const char* to_string(CmpOp op);
const char* to_string(BinOp op);

/// One side of one conditional; the unit of coverage accounting.
struct BranchId {
  int label = 0;
  bool side = true;  // true-branch or false-branch

  friend auto operator<=>(const BranchId&, const BranchId&) = default;
};

inline BranchId opposite_branch(BranchId b) { return {b.label, !b.side}; }

std::string to_string(BranchId b);  // "0T", "3F", ...
std::ostream& operator<<(std::ostream& os, BranchId b);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { DoubleLit, IntLit, Var, Index, Neg, Bin, Cast, Call };

  Kind kind;
  int line = 0, col = 0;
  double dval = 0.0;
  std::int32_t ival = 0;
  std::string name;            // Var / Index / Call
  BinOp bin = BinOp::Add;      // Bin
  ScalarType cast_to = ScalarType::Double;  // Cast
  std::vector<ExprPtr> args;   // Bin: [lhs, rhs]; Neg/Cast: [e]; Index: [index]; Call: args

  // Filled by typecheck. Array-valued expressions (whole-array call
  // arguments) are handled separately and never reach here.
  ScalarType type = ScalarType::Double;
};

/// A conditional's comparison. Each if/while condition is a single
/// comparison between scalars; `promote` marks integer comparands that the
/// instrumenter casts to double.
struct Cond {
  CmpOp op = CmpOp::Le;
  ExprPtr lhs, rhs;
  int label = -1;  // source-order label, assigned at parse time
  bool promote = false;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind { Decl, Assign, If, While, Return, ExprStmt };

  Kind kind;
  int line = 0;
  ScalarType decl_type = ScalarType::Double;  // Decl
  std::string name;                           // Decl / Assign
  ExprPtr expr;  // Decl init (optional), Assign rhs, Return value (optional), ExprStmt
  Cond cond;     // If / While
  std::vector<StmtPtr> then_body;  // If then-block, While body
  std::vector<StmtPtr> else_body;  // If else-block
};

struct Param {
  std::string name;
  bool is_array = false;
  int array_len = 0;  // > 0 when is_array
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  bool returns_double = true;  // false: void
  std::vector<StmtPtr> body;
  int line = 0;
};

struct Program {
  std::vector<FunctionDef> functions;
  int conditional_count = 0;  // labels are 0 .. conditional_count-1
};

struct FrontendError : std::runtime_error {
  FrontendError(std::string msg, int line, int col)
      : std::runtime_error(std::move(msg)), line(line), col(col) {}
  int line, col;
};

}  // namespace branchsat
