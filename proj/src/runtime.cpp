#include "branchsat/runtime.hpp"

#include <bit>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>

namespace branchsat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Squared difference with equal infinities collapsing to 0 instead of
/// NaN, floored at the smallest positive double when the operands
/// differ, so a false predicate can never score 0 through underflow.
double sq_diff(double a, double b) {
  if (a == b) return 0.0;
  double d = (a - b) * (a - b);
  return d == 0.0 ? DBL_TRUE_MIN : d;
}

}  // namespace

double branch_distance(CmpOp op, double a, double b, double eps) {
  if (std::isnan(a) || std::isnan(b)) return kInf;
  switch (op) {
    case CmpOp::Eq: return a == b ? 0.0 : sq_diff(a, b);
    case CmpOp::Ne: return a != b ? 0.0 : eps;
    case CmpOp::Le: return a <= b ? 0.0 : sq_diff(a, b);
    case CmpOp::Lt: return a < b ? 0.0 : sq_diff(a, b) + eps;
    case CmpOp::Ge: return branch_distance(CmpOp::Le, b, a, eps);
    case CmpOp::Gt: return branch_distance(CmpOp::Lt, b, a, eps);
  }
  return kInf;
}

CmpOp opposite(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
  }
  return op;
}

namespace {

double pen_dispatch(bool t, bool f, CmpOp op, double a, double b, double r,
                    double eps) {
  if (!t && !f) return 0.0;
  if (t && f) return r;
  if (!t) return branch_distance(op, a, b, eps);
  return branch_distance(opposite(op), a, b, eps);
}

}  // namespace

double pen(int label, CmpOp op, double a, double b, double r,
           const CoverageState& cov, double eps) {
  return pen_dispatch(cov.is_explored({label, true}),
                      cov.is_explored({label, false}), op, a, b, r, eps);
}

namespace {

using Value = std::variant<double, std::int32_t>;

double to_double(const Value& v) {
  return std::holds_alternative<double>(v)
             ? std::get<double>(v)
             : static_cast<double>(std::get<std::int32_t>(v));
}

std::int32_t wrap32(std::int64_t v) {
  return static_cast<std::int32_t>(static_cast<std::uint64_t>(v));
}

std::int32_t cast_to_int(double d) {
  if (std::isnan(d)) return 0;
  if (d >= 2147483647.0) return 2147483647;
  if (d <= -2147483648.0) return -2147483648;
  return static_cast<std::int32_t>(d);
}

bool compare(CmpOp op, double a, double b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

struct AbortError {
  std::string reason;
};

struct Frame {
  std::map<std::string, Value> scalars;
  std::map<std::string, const std::vector<double>*> arrays;
};

class Interp {
 public:
  Interp(const InstrumentedProgram& ip, const CoverageState* cov, double eps,
         const ExecLimits& limits)
      : ip_(ip), cov_(cov), eps_(eps), limits_(limits) {}

  ExecResult run(const std::vector<double>& input) {
    const TypedProgram& tp = *ip_.base;
    ExecResult res;
    if (static_cast<int>(input.size()) != tp.input_dimension)
      throw std::invalid_argument(
          "input has " + std::to_string(input.size()) + " values, entry '" +
          tp.entry + "' needs " + std::to_string(tp.input_dimension));
    const FunctionDef& entry = tp.function(tp.entry);
    Frame frame;
    std::size_t off = 0;
    for (const auto& p : entry.params) {
      if (p.is_array) {
        array_pool_.emplace_back(input.begin() + off,
                                 input.begin() + off + p.array_len);
        frame.arrays[p.name] = &array_pool_.back();
        off += p.array_len;
      } else {
        frame.scalars[p.name] = input[off++];
      }
    }
    try {
      auto ret = exec_block(entry.body, frame, 0);
      if (ret) res.value = to_double(*ret);
      res.r = r_;
    } catch (const AbortError& a) {
      res.aborted = true;
      res.abort_reason = a.reason;
      res.r = kInf;
    }
    res.trace = std::move(trace_);
    res.trace.aborted = res.aborted;
    res.steps = steps_;
    return res;
  }

 private:
  void tick() {
    if (++steps_ > limits_.step_budget) throw AbortError{"step-budget"};
  }

  std::optional<Value> exec_block(const std::vector<StmtPtr>& body,
                                  Frame& frame, int depth) {
    for (const auto& s : body) {
      auto ret = exec_stmt(*s, frame, depth);
      if (ret) return ret;
    }
    return std::nullopt;
  }

  std::optional<Value> exec_stmt(const Stmt& s, Frame& frame, int depth) {
    tick();
    trace_.lines_hit.insert(s.line);
    switch (s.kind) {
      case Stmt::Kind::Decl: {
        Value v = s.expr ? eval(*s.expr, frame, depth)
                         : (s.decl_type == ScalarType::Double
                                ? Value{0.0}
                                : Value{std::int32_t{0}});
        if (s.decl_type == ScalarType::Double) v = Value{to_double(v)};
        frame.scalars[s.name] = v;
        return std::nullopt;
      }
      case Stmt::Kind::Assign: {
        Value v = eval(*s.expr, frame, depth);
        Value& slot = frame.scalars.at(s.name);
        if (std::holds_alternative<double>(slot)) slot = Value{to_double(v)};
        else slot = v;
        return std::nullopt;
      }
      case Stmt::Kind::If: {
        bool taken = eval_cond(s.cond, frame, depth);
        return exec_block(taken ? s.then_body : s.else_body, frame, depth);
      }
      case Stmt::Kind::While: {
        while (eval_cond(s.cond, frame, depth)) {
          auto ret = exec_block(s.then_body, frame, depth);
          if (ret) return ret;
          tick();
        }
        return std::nullopt;
      }
      case Stmt::Kind::Return:
        if (s.expr) return eval(*s.expr, frame, depth);
        return Value{0.0};
      case Stmt::Kind::ExprStmt:
        eval(*s.expr, frame, depth);
        return std::nullopt;
    }
    return std::nullopt;
  }

  bool eval_cond(const Cond& c, Frame& frame, int depth) {
    double a = to_double(eval(*c.lhs, frame, depth));
    double b = to_double(eval(*c.rhs, frame, depth));
    bool instrumented = ip_.injections.count(c.label) != 0;
    if (instrumented && cov_) {
      const Injection& inj = ip_.injections.at(c.label);
      // A side taken earlier in this run counts as explored for the
      // penalty: loop exit tests would otherwise overwrite a winning r
      // with the strict-inequality floor and mask the new coverage.
      bool t = cov_->is_explored({c.label, true}) ||
               taken_.count({c.label, true}) != 0;
      bool f = cov_->is_explored({c.label, false}) ||
               taken_.count({c.label, false}) != 0;
      r_ = pen_dispatch(t, f, inj.op, a, b, r_, eps_);
    }
    bool taken = compare(c.op, a, b);
    if (instrumented) {
      trace_.events.push_back({BranchId{c.label, taken}, a, b});
      taken_.insert({c.label, taken});
    }
    return taken;
  }

  Value eval(const Expr& e, Frame& frame, int depth) {
    tick();
    switch (e.kind) {
      case Expr::Kind::DoubleLit:
        return Value{e.dval};
      case Expr::Kind::IntLit:
        return Value{e.ival};
      case Expr::Kind::Var:
        return frame.scalars.at(e.name);
      case Expr::Kind::Index: {
        const std::vector<double>& arr = *frame.arrays.at(e.name);
        std::int32_t idx =
            std::get<std::int32_t>(eval(*e.args[0], frame, depth));
        if (idx < 0 || static_cast<std::size_t>(idx) >= arr.size())
          throw AbortError{"array index out of range"};
        return Value{arr[idx]};
      }
      case Expr::Kind::Neg: {
        Value v = eval(*e.args[0], frame, depth);
        if (std::holds_alternative<double>(v))
          return Value{-std::get<double>(v)};
        return Value{wrap32(-static_cast<std::int64_t>(
            std::get<std::int32_t>(v)))};
      }
      case Expr::Kind::Bin:
        return eval_bin(e, frame, depth);
      case Expr::Kind::Cast: {
        Value v = eval(*e.args[0], frame, depth);
        if (e.cast_to == ScalarType::Double) return Value{to_double(v)};
        if (std::holds_alternative<std::int32_t>(v)) return v;
        return Value{cast_to_int(std::get<double>(v))};
      }
      case Expr::Kind::Call:
        return eval_call(e, frame, depth);
    }
    throw AbortError{"malformed expression"};
  }

  Value eval_bin(const Expr& e, Frame& frame, int depth) {
    Value a = eval(*e.args[0], frame, depth);
    Value b = eval(*e.args[1], frame, depth);
    if (std::holds_alternative<std::int32_t>(a) &&
        std::holds_alternative<std::int32_t>(b)) {
      std::int64_t x = std::get<std::int32_t>(a);
      std::int64_t y = std::get<std::int32_t>(b);
      switch (e.bin) {
        case BinOp::Add: return Value{wrap32(x + y)};
        case BinOp::Sub: return Value{wrap32(x - y)};
        case BinOp::Mul: return Value{wrap32(x * y)};
        case BinOp::Div:
          if (y == 0) throw AbortError{"integer division by zero"};
          return Value{wrap32(x / y)};
      }
    }
    double x = to_double(a);
    double y = to_double(b);
    switch (e.bin) {
      case BinOp::Add: return Value{x + y};
      case BinOp::Sub: return Value{x - y};
      case BinOp::Mul: return Value{x * y};
      case BinOp::Div:
        if (y == 0.0) throw AbortError{"division by zero"};
        return Value{x / y};
    }
    throw AbortError{"malformed expression"};
  }

  Value eval_call(const Expr& e, Frame& frame, int depth) {
    if (is_builtin(e.name)) return eval_builtin(e, frame, depth);
    if (depth + 1 > limits_.call_depth) throw AbortError{"call depth exceeded"};
    const FunctionDef& callee = ip_.base->function(e.name);
    Frame inner;
    for (std::size_t i = 0; i < callee.params.size(); ++i) {
      const Param& p = callee.params[i];
      if (p.is_array) {
        inner.arrays[p.name] = frame.arrays.at(e.args[i]->name);
      } else {
        inner.scalars[p.name] =
            Value{to_double(eval(*e.args[i], frame, depth))};
      }
    }
    auto ret = exec_block(callee.body, inner, depth + 1);
    return ret ? *ret : Value{0.0};
  }

  Value eval_builtin(const Expr& e, Frame& frame, int depth) {
    double x = to_double(eval(*e.args[0], frame, depth));
    if (e.name == "sqrt") {
      if (x < 0.0) throw AbortError{"sqrt of negative"};
      return Value{std::sqrt(x)};
    }
    if (e.name == "fabs") return Value{std::fabs(x)};
    if (e.name == "sin") return Value{std::sin(x)};
    if (e.name == "cos") return Value{std::cos(x)};
    if (e.name == "exp") return Value{std::exp(x)};
    if (e.name == "log") {
      if (x <= 0.0) throw AbortError{"log of non-positive"};
      return Value{std::log(x)};
    }
    if (e.name == "floor") return Value{std::floor(x)};
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    if (e.name == "highword")
      return Value{static_cast<std::int32_t>(
          static_cast<std::uint32_t>(bits >> 32))};
    if (e.name == "lowword")
      return Value{static_cast<std::int32_t>(
          static_cast<std::uint32_t>(bits & 0xffffffffu))};
    std::uint32_t half = static_cast<std::uint32_t>(
        std::get<std::int32_t>(eval(*e.args[1], frame, depth)));
    if (e.name == "with_highword") {
      bits = (static_cast<std::uint64_t>(half) << 32) | (bits & 0xffffffffu);
      return Value{std::bit_cast<double>(bits)};
    }
    if (e.name == "with_lowword") {
      bits = (bits & 0xffffffff00000000u) | half;
      return Value{std::bit_cast<double>(bits)};
    }
    throw AbortError{"unknown builtin " + e.name};
  }

  const InstrumentedProgram& ip_;
  const CoverageState* cov_;
  double eps_;
  ExecLimits limits_;
  double r_ = 1.0;
  std::set<BranchId> taken_;
  std::uint64_t steps_ = 0;
  ExecutionTrace trace_;
  std::deque<std::vector<double>> array_pool_;
};

}  // namespace

ExecResult execute(const InstrumentedProgram& ip,
                   const std::vector<double>& input, const CoverageState* cov,
                   double eps, const ExecLimits& limits) {
  Interp interp(ip, cov, eps, limits);
  return interp.run(input);
}

}  // namespace branchsat
