#include "branchsat/ast.hpp"

namespace branchsat {

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
  }
  return "?";
}

std::string to_string(BranchId b) {
  return std::to_string(b.label) + (b.side ? "T" : "F");
}

std::ostream& operator<<(std::ostream& os, BranchId b) {
  return os << to_string(b);
}

}  // namespace branchsat
