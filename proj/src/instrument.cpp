#include "branchsat/instrument.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "branchsat/runtime.hpp"

namespace branchsat {

std::shared_ptr<const InstrumentedProgram> instrument(
    std::shared_ptr<const TypedProgram> tp,
    const std::set<std::string>& targets) {
  auto ip = std::make_shared<InstrumentedProgram>();
  ip->base = tp;
  ip->targets = targets;
  if (ip->targets.empty()) ip->targets.insert(tp->entry);
  if (!ip->targets.count(tp->entry))
    throw FrontendError("targets must include the entry '" + tp->entry + "'",
                        1, 1);
  for (const auto& name : ip->targets) {
    if (!tp->functions.count(name))
      throw FrontendError("target function '" + name + "' not found", 1, 1);
  }
  for (const auto& [label, info] : tp->conds) {
    if (!ip->targets.count(info.function)) continue;
    ip->injections[label] = Injection{info.op, info.lhs, info.rhs,
                                      info.promote, info.function};
  }
  return ip;
}

Objective::Objective(std::shared_ptr<const InstrumentedProgram> ip,
                     CoverageState cov, double eps, ExecLimits limits)
    : ip_(std::move(ip)), cov_(std::move(cov)), eps_(eps), limits_(limits) {}

double Objective::operator()(const std::vector<double>& x) const {
  evaluations++;
  ExecResult res = execute(*ip_, x, &cov_, eps_, limits_);
  return res.r;
}

int Objective::dimension() const { return ip_->base->input_dimension; }

Objective make_objective(std::shared_ptr<const InstrumentedProgram> ip,
                         const CoverageState& snapshot, double eps,
                         ExecLimits limits) {
  return Objective(std::move(ip), snapshot, eps, limits);
}

namespace {

void render_expr(std::ostringstream& os, const Expr& e);

void render_paren(std::ostringstream& os, const Expr& e) {
  bool paren = e.kind == Expr::Kind::Bin;
  if (paren) os << "(";
  render_expr(os, e);
  if (paren) os << ")";
}

void render_expr(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::DoubleLit: {
      std::ostringstream num;
      num << e.dval;
      std::string s = num.str();
      if (s.find_first_of(".einf") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    case Expr::Kind::IntLit:
      os << e.ival;
      return;
    case Expr::Kind::Var:
      os << e.name;
      return;
    case Expr::Kind::Index:
      os << e.name << "[";
      render_expr(os, *e.args[0]);
      os << "]";
      return;
    case Expr::Kind::Neg:
      os << "-";
      render_paren(os, *e.args[0]);
      return;
    case Expr::Kind::Bin:
      render_paren(os, *e.args[0]);
      os << " " << to_string(e.bin) << " ";
      render_paren(os, *e.args[1]);
      return;
    case Expr::Kind::Cast:
      os << (e.cast_to == ScalarType::Int ? "(int)" : "(double)");
      render_paren(os, *e.args[0]);
      return;
    case Expr::Kind::Call:
      os << e.name << "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        render_expr(os, *e.args[i]);
      }
      os << ")";
      return;
  }
}

std::string expr_str(const Expr& e) {
  std::ostringstream os;
  render_expr(os, e);
  return os.str();
}

class Renderer {
 public:
  explicit Renderer(const InstrumentedProgram& ip) : ip_(ip) {}

  std::string run() {
    for (const auto& fn : ip_.base->program->functions) {
      os_ << (fn.returns_double ? "double " : "void ") << fn.name << "(";
      for (std::size_t i = 0; i < fn.params.size(); ++i) {
        if (i) os_ << ", ";
        os_ << "double " << fn.params[i].name;
        if (fn.params[i].is_array)
          os_ << "[" << fn.params[i].array_len << "]";
      }
      os_ << ") {\n";
      render_block(fn.body, 1);
      os_ << "}\n\n";
    }
    return os_.str();
  }

 private:
  void indent(int n) {
    for (int i = 0; i < n; ++i) os_ << "  ";
  }

  void render_cond_head(const Cond& c, int level, const char* kw) {
    if (ip_.injections.count(c.label)) {
      const Injection& inj = ip_.injections.at(c.label);
      indent(level);
      os_ << "r = pen(l" << c.label << ", \"" << to_string(inj.op) << "\", "
          << (inj.promote ? "(double)" : "") << expr_str(*inj.lhs) << ", "
          << (inj.promote ? "(double)" : "") << expr_str(*inj.rhs) << ");\n";
    }
    indent(level);
    os_ << kw << " (" << expr_str(*c.lhs) << " " << to_string(c.op) << " "
        << expr_str(*c.rhs) << ")";
  }

  void render_block(const std::vector<StmtPtr>& body, int level) {
    for (const auto& s : body) render_stmt(*s, level);
  }

  void render_stmt(const Stmt& s, int level) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        indent(level);
        os_ << (s.decl_type == ScalarType::Double ? "double " : "int ")
            << s.name;
        if (s.expr) os_ << " = " << expr_str(*s.expr);
        os_ << ";\n";
        return;
      case Stmt::Kind::Assign:
        indent(level);
        os_ << s.name << " = " << expr_str(*s.expr) << ";\n";
        return;
      case Stmt::Kind::If:
        render_cond_head(s.cond, level, "if");
        os_ << " {\n";
        render_block(s.then_body, level + 1);
        indent(level);
        os_ << "}";
        if (!s.else_body.empty()) {
          os_ << " else {\n";
          render_block(s.else_body, level + 1);
          indent(level);
          os_ << "}";
        }
        os_ << "\n";
        return;
      case Stmt::Kind::While:
        render_cond_head(s.cond, level, "while");
        os_ << " {\n";
        render_block(s.then_body, level + 1);
        indent(level);
        os_ << "}\n";
        return;
      case Stmt::Kind::Return:
        indent(level);
        os_ << "return";
        if (s.expr) os_ << " " << expr_str(*s.expr);
        os_ << ";\n";
        return;
      case Stmt::Kind::ExprStmt:
        indent(level);
        os_ << expr_str(*s.expr) << ";\n";
        return;
    }
  }

  const InstrumentedProgram& ip_;
  std::ostringstream os_;
};

}  // namespace

std::string render_instrumented(const InstrumentedProgram& ip) {
  return Renderer(ip).run();
}

}  // namespace branchsat
