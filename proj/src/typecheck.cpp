#include "branchsat/typecheck.hpp"

#include <algorithm>
#include <optional>

namespace branchsat {
namespace {

struct BuiltinSig {
  int arity;
  ScalarType result;
  ScalarType arg2 = ScalarType::Double;  // second argument, when arity 2
};

const std::map<std::string, BuiltinSig>& builtins() {
  static const std::map<std::string, BuiltinSig> table = {
      {"sqrt", {1, ScalarType::Double}},
      {"fabs", {1, ScalarType::Double}},
      {"sin", {1, ScalarType::Double}},
      {"cos", {1, ScalarType::Double}},
      {"exp", {1, ScalarType::Double}},
      {"log", {1, ScalarType::Double}},
      {"floor", {1, ScalarType::Double}},
      {"highword", {1, ScalarType::Int}},
      {"lowword", {1, ScalarType::Int}},
      {"with_highword", {2, ScalarType::Double, ScalarType::Int}},
      {"with_lowword", {2, ScalarType::Double, ScalarType::Int}},
  };
  return table;
}

/// What a name denotes inside a function body.
struct Binding {
  ScalarType type = ScalarType::Double;
  bool is_array = false;
  int array_len = 0;
};

class Checker {
 public:
  Checker(const Program& prog, TypedProgram& out) : prog_(prog), out_(out) {}

  void run() {
    for (const auto& fn : prog_.functions) out_.functions[fn.name] = &fn;
    for (const auto& fn : prog_.functions) check_function(fn);
  }

 private:
  void check_function(const FunctionDef& fn) {
    scopes_.clear();
    scopes_.emplace_back();
    current_ = &fn;
    for (const auto& p : fn.params) {
      Binding b;
      b.is_array = p.is_array;
      b.array_len = p.array_len;
      scopes_.back()[p.name] = b;
    }
    check_block(fn.body);
    if (fn.returns_double && !block_returns(fn.body))
      throw FrontendError("function '" + fn.name + "' may fall off the end "
                          "without returning", fn.line, 1);
    scopes_.pop_back();
  }

  void check_block(const std::vector<StmtPtr>& body) {
    scopes_.emplace_back();
    bool done = false;
    for (const auto& s : body) {
      if (done)
        throw FrontendError("unreachable statement", s->line, 1);
      check_stmt(*s);
      if (stmt_returns(*s)) done = true;
    }
    scopes_.pop_back();
  }

  void check_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Decl: {
        if (scopes_.back().count(s.name) || find(s.name))
          throw FrontendError("redeclaration of '" + s.name + "'", s.line, 1);
        if (s.expr) {
          ScalarType t = type_of(*s.expr);
          if (s.decl_type == ScalarType::Int && t == ScalarType::Double)
            throw FrontendError("cannot initialize int from double without a "
                                "cast", s.line, 1);
        }
        Binding b;
        b.type = s.decl_type;
        scopes_.back()[s.name] = b;
        break;
      }
      case Stmt::Kind::Assign: {
        const Binding* b = find(s.name);
        if (!b)
          throw FrontendError("assignment to undeclared '" + s.name + "'",
                              s.line, 1);
        if (b->is_array)
          throw FrontendError("cannot assign to array '" + s.name + "'",
                              s.line, 1);
        ScalarType t = type_of(*s.expr);
        if (b->type == ScalarType::Int && t == ScalarType::Double)
          throw FrontendError("cannot assign double to int '" + s.name +
                              "' without a cast", s.line, 1);
        break;
      }
      case Stmt::Kind::If:
      case Stmt::Kind::While: {
        check_cond(s.cond, s.line);
        check_block(s.then_body);
        if (!s.else_body.empty()) check_block(s.else_body);
        break;
      }
      case Stmt::Kind::Return: {
        if (current_->returns_double) {
          if (!s.expr)
            throw FrontendError("missing return value", s.line, 1);
          type_of(*s.expr);  // any scalar promotes to double
        } else if (s.expr) {
          throw FrontendError("void function returns a value", s.line, 1);
        }
        break;
      }
      case Stmt::Kind::ExprStmt: {
        if (s.expr->kind == Expr::Kind::Call && !is_builtin(s.expr->name)) {
          check_call_args(*s.expr, /*value_needed=*/false);
        } else {
          type_of(*s.expr);
        }
        break;
      }
    }
  }

  void check_cond(const Cond& c, int line) {
    ScalarType lt = type_of(*c.lhs);
    ScalarType rt = type_of(*c.rhs);
    CondInfo info;
    info.op = c.op;
    info.lhs = c.lhs.get();
    info.rhs = c.rhs.get();
    info.promote = lt == ScalarType::Int || rt == ScalarType::Int;
    info.function = current_->name;
    out_.conds[c.label] = info;
    out_.labels_by_function[current_->name].push_back(c.label);
    (void)line;
  }

  ScalarType type_of(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::DoubleLit:
        return ScalarType::Double;
      case Expr::Kind::IntLit:
        return ScalarType::Int;
      case Expr::Kind::Var: {
        const Binding* b = find(e.name);
        if (!b)
          throw FrontendError("undeclared variable '" + e.name + "'", e.line,
                              e.col);
        if (b->is_array)
          throw FrontendError("array '" + e.name + "' used as a scalar",
                              e.line, e.col);
        return b->type;
      }
      case Expr::Kind::Index: {
        const Binding* b = find(e.name);
        if (!b)
          throw FrontendError("undeclared variable '" + e.name + "'", e.line,
                              e.col);
        if (!b->is_array)
          throw FrontendError("'" + e.name + "' is not an array", e.line,
                              e.col);
        if (type_of(*e.args[0]) != ScalarType::Int)
          throw FrontendError("array index must be int", e.line, e.col);
        return ScalarType::Double;
      }
      case Expr::Kind::Neg:
        return type_of(*e.args[0]);
      case Expr::Kind::Bin: {
        ScalarType a = type_of(*e.args[0]);
        ScalarType b = type_of(*e.args[1]);
        return (a == ScalarType::Int && b == ScalarType::Int)
                   ? ScalarType::Int
                   : ScalarType::Double;
      }
      case Expr::Kind::Cast:
        type_of(*e.args[0]);
        return e.cast_to;
      case Expr::Kind::Call:
        return check_call_args(e);
    }
    throw FrontendError("malformed expression", e.line, e.col);
  }

  ScalarType check_call_args(const Expr& e, bool value_needed = true) {
    auto bit = builtins().find(e.name);
    if (bit != builtins().end()) {
      const BuiltinSig& sig = bit->second;
      if (static_cast<int>(e.args.size()) != sig.arity)
        throw FrontendError("builtin '" + e.name + "' takes " +
                            std::to_string(sig.arity) + " argument(s)",
                            e.line, e.col);
      type_of(*e.args[0]);  // scalar; int promotes
      if (sig.arity == 2 && type_of(*e.args[1]) != sig.arg2)
        throw FrontendError("second argument of '" + e.name + "' must be int",
                            e.line, e.col);
      return sig.result;
    }
    auto fit = out_.functions.find(e.name);
    if (fit == out_.functions.end())
      throw FrontendError("call to undefined function '" + e.name + "'",
                          e.line, e.col);
    const FunctionDef& callee = *fit->second;
    if (e.args.size() != callee.params.size())
      throw FrontendError("'" + e.name + "' expects " +
                          std::to_string(callee.params.size()) + " argument(s)",
                          e.line, e.col);
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const Param& p = callee.params[i];
      const Expr& a = *e.args[i];
      if (p.is_array) {
        const Binding* b =
            a.kind == Expr::Kind::Var ? find(a.name) : nullptr;
        if (!b || !b->is_array || b->array_len != p.array_len)
          throw FrontendError("argument " + std::to_string(i + 1) + " of '" +
                              e.name + "' must be a double[" +
                              std::to_string(p.array_len) + "] array",
                              a.line, a.col);
      } else {
        type_of(a);
      }
    }
    if (!callee.returns_double && value_needed)
      throw FrontendError("void function '" + e.name + "' used as a value",
                          e.line, e.col);
    return ScalarType::Double;
  }

  static bool stmt_returns(const Stmt& s) {
    if (s.kind == Stmt::Kind::Return) return true;
    if (s.kind == Stmt::Kind::If && !s.else_body.empty())
      return block_returns(s.then_body) && block_returns(s.else_body);
    return false;
  }

  static bool block_returns(const std::vector<StmtPtr>& body) {
    return std::any_of(body.begin(), body.end(),
                       [](const StmtPtr& s) { return stmt_returns(*s); });
  }

  const Binding* find(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  const Program& prog_;
  TypedProgram& out_;
  const FunctionDef* current_ = nullptr;
  std::vector<std::map<std::string, Binding>> scopes_;
};

}  // namespace

bool is_builtin(const std::string& name) {
  return builtins().count(name) != 0;
}

const FunctionDef& TypedProgram::function(const std::string& name) const {
  return *functions.at(name);
}

std::vector<std::pair<std::string, int>> TypedProgram::entry_layout() const {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& p : function(entry).params)
    out.emplace_back(p.name, p.is_array ? p.array_len : 1);
  return out;
}

std::shared_ptr<const TypedProgram> typecheck(
    std::shared_ptr<const Program> program, const std::string& entry) {
  auto tp = std::make_shared<TypedProgram>();
  tp->program = program;
  tp->entry = entry;
  Checker checker(*program, *tp);
  checker.run();
  auto it = tp->functions.find(entry);
  if (it == tp->functions.end())
    throw FrontendError("entry function '" + entry + "' not found", 1, 1);
  int dim = 0;
  for (const auto& p : it->second->params) dim += p.is_array ? p.array_len : 1;
  if (dim == 0)
    throw FrontendError("entry function '" + entry +
                        "' has no floating-point inputs", it->second->line, 1);
  tp->input_dimension = dim;
  return tp;
}

}  // namespace branchsat
