#include "branchsat/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

namespace branchsat {
namespace {

enum class Tok {
  Ident, Keyword, IntLit, DoubleLit,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Assign,
  Plus, Minus, Star, Slash,
  EqEq, NotEq, Lt, Le, Gt, Ge,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double dval = 0.0;
  std::int32_t ival = 0;
  int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "double", "int", "void", "if", "else", "while", "return"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws_and_comments();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  char peek(int k = 0) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    return c;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (peek() == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (peek() == '/' && peek(1) == '*') {
        int l = line_, c = col_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw FrontendError("unterminated comment", l, c);
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        s += advance();
      t.kind = kKeywords.count(s) ? Tok::Keyword : Tok::Ident;
      t.text = std::move(s);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number(t);
    }
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ';': t.kind = Tok::Semi; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '=':
        if (peek() == '=') { advance(); t.kind = Tok::EqEq; } else { t.kind = Tok::Assign; }
        return t;
      case '!':
        if (peek() == '=') { advance(); t.kind = Tok::NotEq; return t; }
        throw FrontendError("expected '=' after '!'", t.line, t.col);
      case '<':
        if (peek() == '=') { advance(); t.kind = Tok::Le; } else { t.kind = Tok::Lt; }
        return t;
      case '>':
        if (peek() == '=') { advance(); t.kind = Tok::Ge; } else { t.kind = Tok::Gt; }
        return t;
    }
    throw FrontendError(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

  Token number(Token t) {
    std::string s;
    bool is_double = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      s += advance();
      s += advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '.')
        s += advance();
      if (peek() == 'p' || peek() == 'P') {
        is_double = true;
        s += advance();
        if (peek() == '+' || peek() == '-') s += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
      } else if (s.find('.') != std::string::npos) {
        throw FrontendError("hex float literal needs a 'p' exponent", t.line, t.col);
      }
      if (is_double) {
        t.kind = Tok::DoubleLit;
        t.dval = std::strtod(s.c_str(), nullptr);
      } else {
        t.kind = Tok::IntLit;
        unsigned long long v = std::strtoull(s.c_str() + 2, nullptr, 16);
        if (v > 0xffffffffull)
          throw FrontendError("hex literal exceeds 32 bits", t.line, t.col);
        t.ival = static_cast<std::int32_t>(static_cast<std::uint32_t>(v));
      }
      t.text = s;
      return t;
    }
    while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
    if (peek() == '.') {
      is_double = true;
      s += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      is_double = true;
      s += advance();
      if (peek() == '+' || peek() == '-') s += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
    }
    t.text = s;
    if (is_double) {
      t.kind = Tok::DoubleLit;
      t.dval = std::strtod(s.c_str(), nullptr);
    } else {
      t.kind = Tok::IntLit;
      long long v = std::strtoll(s.c_str(), nullptr, 10);
      if (v > 0x7fffffffll)
        throw FrontendError("integer literal out of range", t.line, t.col);
      t.ival = static_cast<std::int32_t>(v);
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::shared_ptr<const Program> run() {
    auto prog = std::make_shared<Program>();
    while (!at(Tok::End)) prog->functions.push_back(function());
    std::set<std::string> names;
    for (const auto& f : prog->functions) {
      if (!names.insert(f.name).second)
        throw FrontendError("duplicate function name '" + f.name + "'", f.line, 1);
    }
    prog->conditional_count = next_label_;
    return prog;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(int k = 1) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_kw(const char* kw) const {
    return cur().kind == Tok::Keyword && cur().text == kw;
  }

  Token eat(Tok k, const char* what) {
    if (!at(k))
      throw FrontendError(std::string("expected ") + what, cur().line, cur().col);
    return toks_[i_++];
  }

  void eat_kw(const char* kw) {
    if (!at_kw(kw))
      throw FrontendError(std::string("expected '") + kw + "'", cur().line, cur().col);
    i_++;
  }

  FunctionDef function() {
    FunctionDef fn;
    fn.line = cur().line;
    if (at_kw("double")) {
      fn.returns_double = true;
    } else if (at_kw("void")) {
      fn.returns_double = false;
    } else {
      throw FrontendError("expected 'double' or 'void' return type",
                          cur().line, cur().col);
    }
    i_++;
    fn.name = eat(Tok::Ident, "function name").text;
    eat(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      for (;;) {
        fn.params.push_back(param());
        if (!at(Tok::Comma)) break;
        i_++;
      }
    }
    eat(Tok::RParen, "')'");
    std::set<std::string> pnames;
    for (const auto& p : fn.params) {
      if (!pnames.insert(p.name).second)
        throw FrontendError("duplicate parameter name '" + p.name + "'",
                            fn.line, 1);
    }
    fn.body = block();
    return fn;
  }

  Param param() {
    eat_kw("double");
    Param p;
    p.name = eat(Tok::Ident, "parameter name").text;
    if (at(Tok::LBracket)) {
      i_++;
      Token len = eat(Tok::IntLit, "array length");
      if (len.ival <= 0)
        throw FrontendError("array length must be positive", len.line, len.col);
      p.is_array = true;
      p.array_len = len.ival;
      eat(Tok::RBracket, "']'");
    }
    return p;
  }

  std::vector<StmtPtr> block() {
    eat(Tok::LBrace, "'{'");
    std::vector<StmtPtr> out;
    while (!at(Tok::RBrace)) out.push_back(statement());
    i_++;
    return out;
  }

  StmtPtr statement() {
    auto s = std::make_unique<Stmt>();
    s->line = cur().line;
    if (at_kw("double") || at_kw("int")) {
      s->kind = Stmt::Kind::Decl;
      s->decl_type = cur().text == "double" ? ScalarType::Double : ScalarType::Int;
      i_++;
      s->name = eat(Tok::Ident, "variable name").text;
      if (at(Tok::Assign)) {
        i_++;
        s->expr = expression();
      }
      eat(Tok::Semi, "';'");
      return s;
    }
    if (at_kw("if")) return conditional(std::move(s));
    if (at_kw("while")) {
      i_++;
      s->kind = Stmt::Kind::While;
      eat(Tok::LParen, "'('");
      s->cond = condition();
      eat(Tok::RParen, "')'");
      s->then_body = block();
      return s;
    }
    if (at_kw("return")) {
      i_++;
      s->kind = Stmt::Kind::Return;
      if (!at(Tok::Semi)) s->expr = expression();
      eat(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::Ident) && peek().kind == Tok::Assign) {
      s->kind = Stmt::Kind::Assign;
      s->name = cur().text;
      i_ += 2;
      s->expr = expression();
      eat(Tok::Semi, "';'");
      return s;
    }
    s->kind = Stmt::Kind::ExprStmt;
    s->expr = expression();
    eat(Tok::Semi, "';'");
    return s;
  }

  StmtPtr conditional(StmtPtr s) {
    eat_kw("if");
    s->kind = Stmt::Kind::If;
    eat(Tok::LParen, "'('");
    s->cond = condition();
    eat(Tok::RParen, "')'");
    s->then_body = block();
    if (at_kw("else")) {
      i_++;
      if (at_kw("if")) {
        auto nested = std::make_unique<Stmt>();
        nested->line = cur().line;
        s->else_body.push_back(conditional(std::move(nested)));
      } else {
        s->else_body = block();
      }
    }
    return s;
  }

  Cond condition() {
    Cond c;
    c.label = next_label_++;
    c.lhs = expression();
    switch (cur().kind) {
      case Tok::EqEq: c.op = CmpOp::Eq; break;
      case Tok::NotEq: c.op = CmpOp::Ne; break;
      case Tok::Lt: c.op = CmpOp::Lt; break;
      case Tok::Le: c.op = CmpOp::Le; break;
      case Tok::Gt: c.op = CmpOp::Gt; break;
      case Tok::Ge: c.op = CmpOp::Ge; break;
      default:
        throw FrontendError("expected comparison operator", cur().line, cur().col);
    }
    i_++;
    c.rhs = expression();
    return c;
  }

  ExprPtr expression() {
    ExprPtr lhs = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      int line = cur().line, col = cur().col;
      i_++;
      lhs = make_bin(op, std::move(lhs), term(), line, col);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (at(Tok::Star) || at(Tok::Slash)) {
      BinOp op = at(Tok::Star) ? BinOp::Mul : BinOp::Div;
      int line = cur().line, col = cur().col;
      i_++;
      lhs = make_bin(op, std::move(lhs), factor(), line, col);
    }
    return lhs;
  }

  static ExprPtr make_bin(BinOp op, ExprPtr a, ExprPtr b, int line, int col) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Bin;
    e->bin = op;
    e->line = line;
    e->col = col;
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  ExprPtr factor() {
    if (at(Tok::Minus)) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Neg;
      e->line = cur().line;
      e->col = cur().col;
      i_++;
      e->args.push_back(factor());
      return e;
    }
    if (at(Tok::LParen) && peek().kind == Tok::Keyword &&
        (peek().text == "int" || peek().text == "double") &&
        peek(2).kind == Tok::RParen) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Cast;
      e->line = cur().line;
      e->col = cur().col;
      e->cast_to = peek().text == "int" ? ScalarType::Int : ScalarType::Double;
      i_ += 3;
      e->args.push_back(factor());
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    auto e = std::make_unique<Expr>();
    e->line = cur().line;
    e->col = cur().col;
    if (at(Tok::DoubleLit)) {
      e->kind = Expr::Kind::DoubleLit;
      e->dval = cur().dval;
      i_++;
      return e;
    }
    if (at(Tok::IntLit)) {
      e->kind = Expr::Kind::IntLit;
      e->ival = cur().ival;
      i_++;
      return e;
    }
    if (at(Tok::LParen)) {
      i_++;
      ExprPtr inner = expression();
      eat(Tok::RParen, "')'");
      return inner;
    }
    if (at(Tok::Ident)) {
      e->name = cur().text;
      i_++;
      if (at(Tok::LParen)) {
        i_++;
        e->kind = Expr::Kind::Call;
        if (!at(Tok::RParen)) {
          for (;;) {
            e->args.push_back(expression());
            if (!at(Tok::Comma)) break;
            i_++;
          }
        }
        eat(Tok::RParen, "')'");
        return e;
      }
      if (at(Tok::LBracket)) {
        i_++;
        e->kind = Expr::Kind::Index;
        e->args.push_back(expression());
        eat(Tok::RBracket, "']'");
        return e;
      }
      e->kind = Expr::Kind::Var;
      return e;
    }
    throw FrontendError("expected expression", cur().line, cur().col);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int next_label_ = 0;
};

}  // namespace

std::shared_ptr<const Program> parse(std::string_view source) {
  Lexer lex(source);
  Parser p(lex.run());
  return p.run();
}

}  // namespace branchsat
