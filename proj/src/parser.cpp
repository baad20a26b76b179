#include "awd/parser.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace awd {

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  String,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Colon,
  Plus,
  Minus,
  Star,
  Slash,
  Assign,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  AndAnd,
  OrOr,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double num = 0.0;
  SourceLoc loc;
};

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"input", "real", "int",    "in",
                                           "let",   "if",   "else",   "while",
                                           "for",   "fn",   "return", "reach"};
  return kw.count(s) != 0;
}

std::optional<Builtin> lookup_builtin(const std::string& name) {
  static const std::map<std::string, Builtin> table = {
      {"sin", Builtin::Sin},     {"cos", Builtin::Cos},
      {"tan", Builtin::Tan},     {"fabs", Builtin::Fabs},
      {"floor", Builtin::Floor}, {"ceil", Builtin::Ceil},
      {"sqrt", Builtin::Sqrt},   {"exp", Builtin::Exp},
      {"log", Builtin::Log},     {"pow", Builtin::Pow},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t = next_token();
      bool done = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (done) break;
    }
    return out;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char peek2() const {
    return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek2() == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token next_token() {
    Token t;
    t.loc = SourceLoc{line_, col_};
    if (at_end()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                           peek() == '_')) {
        t.text.push_back(advance());
      }
      t.kind = Tok::Ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return lex_number(t);
    }
    if (c == '"') {
      advance();
      while (!at_end() && peek() != '"' && peek() != '\n') {
        t.text.push_back(advance());
      }
      if (at_end() || peek() != '"') {
        throw ParseError(t.loc, "unterminated string literal");
      }
      advance();
      t.kind = Tok::String;
      return t;
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
      case ':': t.kind = Tok::Colon; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '=':
        if (!at_end() && peek() == '=') {
          advance();
          t.kind = Tok::Eq;
        } else {
          t.kind = Tok::Assign;
        }
        return t;
      case '!':
        if (!at_end() && peek() == '=') {
          advance();
          t.kind = Tok::Ne;
          return t;
        }
        throw ParseError(t.loc, "unexpected character '!'");
      case '<':
        if (!at_end() && peek() == '=') {
          advance();
          t.kind = Tok::Le;
        } else {
          t.kind = Tok::Lt;
        }
        return t;
      case '>':
        if (!at_end() && peek() == '=') {
          advance();
          t.kind = Tok::Ge;
        } else {
          t.kind = Tok::Gt;
        }
        return t;
      case '&':
        if (!at_end() && peek() == '&') {
          advance();
          t.kind = Tok::AndAnd;
          return t;
        }
        throw ParseError(t.loc, "unexpected character '&'");
      case '|':
        if (!at_end() && peek() == '|') {
          advance();
          t.kind = Tok::OrOr;
          return t;
        }
        throw ParseError(t.loc, "unexpected character '|'");
      default:
        throw ParseError(t.loc,
                         std::string("unexpected character '") + c + "'");
    }
  }

  Token lex_number(Token t) {
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      digits.push_back(advance());
    }
    if (!at_end() && peek() == '.' &&
        std::isdigit(static_cast<unsigned char>(peek2()))) {
      digits.push_back(advance());
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        digits.push_back(advance());
      }
    }
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      char e = peek2();
      std::size_t look = pos_ + 2;
      bool signed_exp = e == '+' || e == '-';
      char first_digit = signed_exp
                             ? (look < text_.size() ? text_[look] : '\0')
                             : e;
      if (std::isdigit(static_cast<unsigned char>(first_digit))) {
        digits.push_back(advance());
        if (signed_exp) digits.push_back(advance());
        while (!at_end() &&
               std::isdigit(static_cast<unsigned char>(peek()))) {
          digits.push_back(advance());
        }
      }
    }
    double value = 0.0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(),
                               value);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() ||
        !std::isfinite(value)) {
      throw ParseError(t.loc, "number literal out of range: " + digits);
    }
    t.kind = Tok::Number;
    t.text = std::move(digits);
    t.num = value;
    return t;
  }
};

struct FnDef {
  std::vector<std::string> params;
  Block body;
  SourceLoc loc;
};

ExprPtr make_expr(SourceLoc loc,
                  std::variant<NumberExpr, VarExpr, NegExpr, BinaryExpr,
                               CallExpr> node) {
  auto e = std::make_unique<Expr>();
  e->loc = loc;
  e->node = std::move(node);
  return e;
}

void rename_expr(Expr& e, const std::string& prefix) {
  if (auto* v = std::get_if<VarExpr>(&e.node)) {
    v->name = prefix + v->name;
  } else if (auto* u = std::get_if<NegExpr>(&e.node)) {
    rename_expr(*u->operand, prefix);
  } else if (auto* b = std::get_if<BinaryExpr>(&e.node)) {
    rename_expr(*b->lhs, prefix);
    rename_expr(*b->rhs, prefix);
  } else if (auto* c = std::get_if<CallExpr>(&e.node)) {
    for (auto& a : c->args) rename_expr(*a, prefix);
  }
}

void rename_stmt(Stmt& s, const std::string& prefix) {
  if (auto* let = std::get_if<LetStmt>(&s.node)) {
    let->name = prefix + let->name;
    rename_expr(*let->value, prefix);
  } else if (auto* asg = std::get_if<AssignStmt>(&s.node)) {
    asg->name = prefix + asg->name;
    rename_expr(*asg->value, prefix);
  } else if (auto* iff = std::get_if<IfStmt>(&s.node)) {
    rename_expr(*iff->cond.lhs, prefix);
    rename_expr(*iff->cond.rhs, prefix);
    for (auto& t : iff->then_body) rename_stmt(t, prefix);
    for (auto& t : iff->else_body) rename_stmt(t, prefix);
  } else if (auto* wh = std::get_if<WhileStmt>(&s.node)) {
    rename_expr(*wh->cond.lhs, prefix);
    rename_expr(*wh->cond.rhs, prefix);
    for (auto& t : wh->body) rename_stmt(t, prefix);
  }
}

// Selective renaming for block clones: only names declared inside the cloned
// block change, references to outer variables stay intact.
void collect_let_names(const Block& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (const auto* let = std::get_if<LetStmt>(&s.node)) {
      out.insert(let->name);
    } else if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
      collect_let_names(iff->then_body, out);
      collect_let_names(iff->else_body, out);
    } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
      collect_let_names(wh->body, out);
    }
  }
}

void rename_selected_expr(Expr& e, const std::set<std::string>& names,
                          const std::string& prefix) {
  if (auto* v = std::get_if<VarExpr>(&e.node)) {
    if (names.count(v->name)) v->name = prefix + v->name;
  } else if (auto* u = std::get_if<NegExpr>(&e.node)) {
    rename_selected_expr(*u->operand, names, prefix);
  } else if (auto* b = std::get_if<BinaryExpr>(&e.node)) {
    rename_selected_expr(*b->lhs, names, prefix);
    rename_selected_expr(*b->rhs, names, prefix);
  } else if (auto* c = std::get_if<CallExpr>(&e.node)) {
    for (auto& a : c->args) rename_selected_expr(*a, names, prefix);
  }
}

void rename_selected_stmt(Stmt& s, const std::set<std::string>& names,
                          const std::string& prefix) {
  if (auto* let = std::get_if<LetStmt>(&s.node)) {
    if (names.count(let->name)) let->name = prefix + let->name;
    rename_selected_expr(*let->value, names, prefix);
  } else if (auto* asg = std::get_if<AssignStmt>(&s.node)) {
    if (names.count(asg->name)) asg->name = prefix + asg->name;
    rename_selected_expr(*asg->value, names, prefix);
  } else if (auto* iff = std::get_if<IfStmt>(&s.node)) {
    rename_selected_expr(*iff->cond.lhs, names, prefix);
    rename_selected_expr(*iff->cond.rhs, names, prefix);
    for (auto& t : iff->then_body) rename_selected_stmt(t, names, prefix);
    for (auto& t : iff->else_body) rename_selected_stmt(t, names, prefix);
  } else if (auto* wh = std::get_if<WhileStmt>(&s.node)) {
    rename_selected_expr(*wh->cond.lhs, names, prefix);
    rename_selected_expr(*wh->cond.rhs, names, prefix);
    for (auto& t : wh->body) rename_selected_stmt(t, names, prefix);
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SourceProgram run() {
    SourceProgram prog;
    bool saw_stmt = false;
    while (!check(Tok::End)) {
      if (check_ident("input")) {
        if (saw_stmt) {
          throw ParseError(peek().loc,
                           "input declarations must precede statements");
        }
        parse_input(prog);
      } else if (check_ident("fn")) {
        if (saw_stmt) {
          throw ParseError(peek().loc,
                           "function definitions must precede statements");
        }
        parse_fn();
      } else {
        parse_stmt(prog.body, false);
        saw_stmt = true;
      }
    }
    validate(prog);
    return prog;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, FnDef> fns_;
  std::string current_fn_;
  int inline_count_ = 0;
  int clone_count_ = 0;
  std::set<std::string> used_reach_labels_;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& prev() const { return tokens_[pos_ - 1]; }
  bool check(Tok k) const { return peek().kind == k; }
  bool check_ident(const char* text) const {
    return peek().kind == Tok::Ident && peek().text == text;
  }

  const Token& advance() { return tokens_[pos_++]; }

  bool match(Tok k) {
    if (!check(k)) return false;
    ++pos_;
    return true;
  }

  bool match_ident(const char* text) {
    if (!check_ident(text)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok k, const char* what) {
    if (!check(k)) {
      throw ParseError(peek().loc, std::string("expected ") + what);
    }
    return advance();
  }

  std::string expect_name(const char* what) {
    if (!check(Tok::Ident) || is_keyword(peek().text)) {
      throw ParseError(peek().loc, std::string("expected ") + what);
    }
    return advance().text;
  }

  // ---- declarations ----

  void parse_input(SourceProgram& prog) {
    InputDecl decl;
    decl.loc = peek().loc;
    advance();  // input
    decl.name = expect_name("input name");
    expect(Tok::Colon, "':' after input name");
    if (match_ident("real")) {
      decl.kind = InputKind::Real;
    } else if (match_ident("int")) {
      decl.kind = InputKind::Int;
    } else {
      throw ParseError(peek().loc, "expected input kind 'real' or 'int'");
    }
    if (!match_ident("in")) {
      throw ParseError(peek().loc, "expected 'in' before input range");
    }
    expect(Tok::LBracket, "'['");
    decl.lo = parse_bound();
    expect(Tok::Comma, "','");
    decl.hi = parse_bound();
    expect(Tok::RBracket, "']'");
    expect(Tok::Semi, "';'");
    prog.inputs.push_back(std::move(decl));
  }

  double parse_bound() {
    bool neg = match(Tok::Minus);
    const Token& t = expect(Tok::Number, "numeric bound");
    return neg ? -t.num : t.num;
  }

  void parse_fn() {
    SourceLoc loc = peek().loc;
    advance();  // fn
    std::string name = expect_name("function name");
    if (fns_.count(name)) {
      throw ParseError(loc, "duplicate function '" + name + "'");
    }
    if (lookup_builtin(name)) {
      throw ParseError(loc, "function name '" + name + "' shadows a builtin");
    }
    FnDef def;
    def.loc = loc;
    expect(Tok::LParen, "'('");
    if (!check(Tok::RParen)) {
      do {
        std::string p = expect_name("parameter name");
        for (const auto& q : def.params) {
          if (q == p) {
            throw ParseError(prev().loc, "duplicate parameter '" + p + "'");
          }
        }
        def.params.push_back(std::move(p));
      } while (match(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    current_fn_ = name;
    def.body = parse_block(true);
    current_fn_.clear();
    check_fn_body(def);
    fns_.emplace(std::move(name), std::move(def));
  }

  // Helper bodies are restricted so inlining them is exact: locals only,
  // no loops or reach markers, and a trailing return on some path.
  void check_fn_body(const FnDef& def) {
    std::set<std::string> declared(def.params.begin(), def.params.end());
    declared.insert("__ret");
    int returns = 0;
    check_fn_block(def.body, declared, returns);
    if (returns == 0) {
      throw ParseError(def.loc, "function never returns a value");
    }
  }

  void check_fn_block(const Block& body, std::set<std::string>& declared,
                      int& returns) {
    for (const auto& s : body) {
      if (const auto* let = std::get_if<LetStmt>(&s.node)) {
        check_fn_expr(*let->value, declared);
        declared.insert(let->name);
      } else if (const auto* asg = std::get_if<AssignStmt>(&s.node)) {
        check_fn_expr(*asg->value, declared);
        if (!declared.count(asg->name)) {
          throw ParseError(s.loc, "function bodies may only use parameters "
                                  "and local variables: '" +
                                      asg->name + "'");
        }
        if (asg->name == "__ret") ++returns;
      } else if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
        check_fn_expr(*iff->cond.lhs, declared);
        check_fn_expr(*iff->cond.rhs, declared);
        check_fn_block(iff->then_body, declared, returns);
        check_fn_block(iff->else_body, declared, returns);
      }
    }
  }

  void check_fn_expr(const Expr& e, const std::set<std::string>& declared) {
    if (const auto* v = std::get_if<VarExpr>(&e.node)) {
      if (!declared.count(v->name)) {
        throw ParseError(e.loc, "function bodies may only use parameters "
                                "and local variables: '" +
                                    v->name + "'");
      }
    } else if (const auto* u = std::get_if<NegExpr>(&e.node)) {
      check_fn_expr(*u->operand, declared);
    } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
      check_fn_expr(*b->lhs, declared);
      check_fn_expr(*b->rhs, declared);
    } else if (const auto* c = std::get_if<CallExpr>(&e.node)) {
      for (const auto& a : c->args) check_fn_expr(*a, declared);
    }
  }

  // ---- statements ----

  Block parse_block(bool in_fn) {
    expect(Tok::LBrace, "'{'");
    Block body;
    while (!check(Tok::RBrace)) {
      if (check(Tok::End)) {
        throw ParseError(peek().loc, "unterminated block");
      }
      parse_stmt(body, in_fn);
    }
    advance();  // }
    return body;
  }

  void parse_stmt(Block& out, bool in_fn) {
    const Token& t = peek();
    if (check_ident("let")) {
      parse_let(out);
    } else if (check_ident("if")) {
      parse_if(out, in_fn);
    } else if (check_ident("while")) {
      if (in_fn) throw ParseError(t.loc, "loops are not allowed in functions");
      parse_while(out);
    } else if (check_ident("for")) {
      if (in_fn) throw ParseError(t.loc, "loops are not allowed in functions");
      parse_for(out);
    } else if (check_ident("return")) {
      if (!in_fn) {
        throw ParseError(t.loc, "return is only allowed in functions");
      }
      parse_return(out);
    } else if (check_ident("reach")) {
      if (in_fn) {
        throw ParseError(t.loc, "reach markers are not allowed in functions");
      }
      parse_reach(out);
    } else if (check(Tok::Ident) && !is_keyword(t.text)) {
      parse_assign(out);
    } else {
      throw ParseError(t.loc, "expected a statement");
    }
  }

  void parse_let(Block& out) {
    SourceLoc loc = peek().loc;
    advance();  // let
    std::string name = expect_name("variable name");
    expect(Tok::Assign, "'='");
    ExprPtr value = parse_expr();
    expect(Tok::Semi, "';'");
    value = expand_calls(std::move(value), out);
    Stmt s;
    s.loc = loc;
    s.node = LetStmt{std::move(name), -1, std::move(value)};
    out.push_back(std::move(s));
  }

  void parse_assign(Block& out) {
    SourceLoc loc = peek().loc;
    std::string name = advance().text;
    expect(Tok::Assign, "'='");
    ExprPtr value = parse_expr();
    expect(Tok::Semi, "';'");
    value = expand_calls(std::move(value), out);
    Stmt s;
    s.loc = loc;
    s.node = AssignStmt{std::move(name), -1, std::move(value)};
    out.push_back(std::move(s));
  }

  void parse_return(Block& out) {
    SourceLoc loc = peek().loc;
    advance();  // return
    ExprPtr value = parse_expr();
    expect(Tok::Semi, "';'");
    value = expand_calls(std::move(value), out);
    Stmt s;
    s.loc = loc;
    s.node = AssignStmt{"__ret", -1, std::move(value)};
    out.push_back(std::move(s));
    if (!check(Tok::RBrace)) {
      throw ParseError(peek().loc, "return must be the last statement in "
                                   "its block");
    }
  }

  void parse_reach(Block& out) {
    SourceLoc loc = peek().loc;
    advance();  // reach
    expect(Tok::LParen, "'('");
    const Token& label = expect(Tok::String, "quoted label");
    if (label.text.empty()) {
      throw ParseError(label.loc, "reach label must not be empty");
    }
    std::string text = label.text;
    if (!used_reach_labels_.insert(text).second) {
      throw ParseError(label.loc,
                       "duplicate reach label \"" + text + "\"");
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Semi, "';'");
    Stmt s;
    s.loc = loc;
    s.node = ReachStmt{std::move(text)};
    out.push_back(std::move(s));
  }

  // One comparison of a compound condition, with the statements that bind
  // any inlined helper results it relies on.
  struct CondUnit {
    Condition cond;
    Block bindings;
  };

  CondUnit parse_cond_unit(bool allow_calls) {
    CondUnit unit;
    unit.cond.loc = peek().loc;
    ExprPtr lhs = parse_expr();
    const Token& op = peek();
    switch (op.kind) {
      case Tok::Lt: unit.cond.op = Cmp::Lt; break;
      case Tok::Le: unit.cond.op = Cmp::Le; break;
      case Tok::Gt: unit.cond.op = Cmp::Gt; break;
      case Tok::Ge: unit.cond.op = Cmp::Ge; break;
      case Tok::Eq: unit.cond.op = Cmp::Eq; break;
      case Tok::Ne: unit.cond.op = Cmp::Ne; break;
      case Tok::Assign:
        throw ParseError(op.loc, "'=' is assignment; use '==' to compare");
      default:
        throw ParseError(op.loc, "expected a comparison operator");
    }
    advance();
    ExprPtr rhs = parse_expr();
    if (allow_calls) {
      lhs = expand_calls(std::move(lhs), unit.bindings);
      rhs = expand_calls(std::move(rhs), unit.bindings);
    } else {
      reject_user_calls(*lhs, "loop conditions");
      reject_user_calls(*rhs, "loop conditions");
    }
    unit.cond.lhs = std::move(lhs);
    unit.cond.rhs = std::move(rhs);
    return unit;
  }

  void parse_if(Block& out, bool in_fn) {
    SourceLoc loc = peek().loc;
    advance();  // if
    expect(Tok::LParen, "'('");
    std::vector<CondUnit> units;
    units.push_back(parse_cond_unit(true));
    while (match(Tok::AndAnd)) {
      units.push_back(parse_cond_unit(true));
    }
    if (check(Tok::OrOr)) {
      throw ParseError(peek().loc,
                       "'||' is not supported; use separate conditionals");
    }
    expect(Tok::RParen, "')'");
    Block then_body = parse_block(in_fn);
    Block else_body;
    if (match_ident("else")) {
      if (check_ident("if")) {
        parse_if(else_body, in_fn);
      } else {
        else_body = parse_block(in_fn);
      }
    }

    // a && b nests: each extra comparison becomes an inner conditional whose
    // else-branch repeats the outer else.  Lets declared in the repeated
    // block get fresh names per copy so the flat scope stays collision-free.
    std::set<std::string> else_lets;
    collect_let_names(else_body, else_lets);
    int copies = 0;
    auto else_copy = [&] {
      Block b = clone_block(else_body);
      if (copies++ > 0 && !else_lets.empty()) {
        std::string prefix = "__c" + std::to_string(clone_count_++) + "_";
        for (auto& s : b) rename_selected_stmt(s, else_lets, prefix);
      }
      return b;
    };

    Stmt inner;
    inner.loc = loc;
    {
      IfStmt node;
      node.cond = std::move(units.back().cond);
      node.then_body = std::move(then_body);
      node.else_body = else_copy();
      inner.node = std::move(node);
    }
    for (std::size_t k = units.size() - 1; k-- > 0;) {
      Block tb = std::move(units[k + 1].bindings);
      tb.push_back(std::move(inner));
      IfStmt node;
      node.cond = std::move(units[k].cond);
      node.then_body = std::move(tb);
      node.else_body = else_copy();
      Stmt wrap;
      wrap.loc = loc;
      wrap.node = std::move(node);
      inner = std::move(wrap);
    }
    for (auto& s : units.front().bindings) out.push_back(std::move(s));
    out.push_back(std::move(inner));
  }

  static Block clone_block(const Block& body) {
    Block out;
    out.reserve(body.size());
    for (const auto& s : body) out.push_back(s.clone());
    return out;
  }

  void parse_while(Block& out) {
    SourceLoc loc = peek().loc;
    advance();  // while
    expect(Tok::LParen, "'('");
    CondUnit unit = parse_cond_unit(false);
    if (check(Tok::AndAnd) || check(Tok::OrOr)) {
      throw ParseError(peek().loc,
                       "loop conditions must be a single comparison");
    }
    expect(Tok::RParen, "')'");
    Block body = parse_block(false);
    Stmt s;
    s.loc = loc;
    s.node = WhileStmt{std::move(unit.cond), std::move(body)};
    out.push_back(std::move(s));
  }

  // for (init; cond; update) { body }  =>  init; while (cond) { body; update }
  void parse_for(Block& out) {
    SourceLoc loc = peek().loc;
    advance();  // for
    expect(Tok::LParen, "'('");
    if (check_ident("let")) {
      SourceLoc lloc = peek().loc;
      advance();
      std::string name = expect_name("variable name");
      expect(Tok::Assign, "'='");
      ExprPtr value = parse_expr();
      value = expand_calls(std::move(value), out);
      Stmt s;
      s.loc = lloc;
      s.node = LetStmt{std::move(name), -1, std::move(value)};
      out.push_back(std::move(s));
    } else {
      SourceLoc aloc = peek().loc;
      std::string name = expect_name("variable name");
      expect(Tok::Assign, "'='");
      ExprPtr value = parse_expr();
      value = expand_calls(std::move(value), out);
      Stmt s;
      s.loc = aloc;
      s.node = AssignStmt{std::move(name), -1, std::move(value)};
      out.push_back(std::move(s));
    }
    expect(Tok::Semi, "';'");
    CondUnit unit = parse_cond_unit(false);
    if (check(Tok::AndAnd) || check(Tok::OrOr)) {
      throw ParseError(peek().loc,
                       "loop conditions must be a single comparison");
    }
    expect(Tok::Semi, "';'");
    SourceLoc uloc = peek().loc;
    std::string uname = expect_name("variable name");
    expect(Tok::Assign, "'='");
    ExprPtr uvalue = parse_expr();
    expect(Tok::RParen, "')'");
    Block body = parse_block(false);
    uvalue = expand_calls(std::move(uvalue), body);
    Stmt update;
    update.loc = uloc;
    update.node = AssignStmt{std::move(uname), -1, std::move(uvalue)};
    body.push_back(std::move(update));
    Stmt s;
    s.loc = loc;
    s.node = WhileStmt{std::move(unit.cond), std::move(body)};
    out.push_back(std::move(s));
  }

  // ---- expressions ----

  ExprPtr parse_expr() { return parse_additive(); }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    for (;;) {
      SourceLoc loc = peek().loc;
      BinOp op;
      if (match(Tok::Plus)) {
        op = BinOp::Add;
      } else if (match(Tok::Minus)) {
        op = BinOp::Sub;
      } else {
        return lhs;
      }
      ExprPtr rhs = parse_multiplicative();
      lhs = make_expr(loc, BinaryExpr{op, std::move(lhs), std::move(rhs)});
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      SourceLoc loc = peek().loc;
      BinOp op;
      if (match(Tok::Star)) {
        op = BinOp::Mul;
      } else if (match(Tok::Slash)) {
        op = BinOp::Div;
      } else {
        return lhs;
      }
      ExprPtr rhs = parse_unary();
      lhs = make_expr(loc, BinaryExpr{op, std::move(lhs), std::move(rhs)});
    }
  }

  ExprPtr parse_unary() {
    if (check(Tok::Minus)) {
      SourceLoc loc = advance().loc;
      return make_expr(loc, NegExpr{parse_unary()});
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      advance();
      return make_expr(t.loc, NumberExpr{t.num});
    }
    if (t.kind == Tok::LParen) {
      advance();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      advance();
      if (check(Tok::LParen)) {
        advance();
        CallExpr call;
        call.callee = t.text;
        if (!check(Tok::RParen)) {
          do {
            call.args.push_back(parse_expr());
          } while (match(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        if (call.callee == current_fn_ && !current_fn_.empty()) {
          throw ParseError(t.loc, "recursive functions are not supported");
        }
        return make_expr(t.loc, std::move(call));
      }
      return make_expr(t.loc, VarExpr{t.text, -1});
    }
    throw ParseError(t.loc, "expected an expression");
  }

  // ---- helper inlining ----

  void reject_user_calls(const Expr& e, const char* where) {
    if (const auto* c = std::get_if<CallExpr>(&e.node)) {
      if (fns_.count(c->callee)) {
        throw ParseError(e.loc, std::string("function calls are not allowed "
                                            "in ") +
                                    where);
      }
      for (const auto& a : c->args) reject_user_calls(*a, where);
    } else if (const auto* u = std::get_if<NegExpr>(&e.node)) {
      reject_user_calls(*u->operand, where);
    } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
      reject_user_calls(*b->lhs, where);
      reject_user_calls(*b->rhs, where);
    }
  }

  // Replaces helper calls with references to freshly bound result variables,
  // emitting the argument bindings and the renamed body into `out`.
  ExprPtr expand_calls(ExprPtr e, Block& out) {
    if (auto* u = std::get_if<NegExpr>(&e->node)) {
      u->operand = expand_calls(std::move(u->operand), out);
      return e;
    }
    if (auto* b = std::get_if<BinaryExpr>(&e->node)) {
      b->lhs = expand_calls(std::move(b->lhs), out);
      b->rhs = expand_calls(std::move(b->rhs), out);
      return e;
    }
    auto* call = std::get_if<CallExpr>(&e->node);
    if (call == nullptr) return e;
    for (auto& a : call->args) {
      a = expand_calls(std::move(a), out);
    }
    auto it = fns_.find(call->callee);
    if (it == fns_.end()) return e;

    const FnDef& fn = it->second;
    if (call->args.size() != fn.params.size()) {
      throw ParseError(e->loc, "function '" + call->callee + "' expects " +
                                   std::to_string(fn.params.size()) +
                                   " argument(s)");
    }
    std::string prefix = "__i" + std::to_string(inline_count_++) + "_";
    for (std::size_t k = 0; k < fn.params.size(); ++k) {
      Stmt bind;
      bind.loc = e->loc;
      bind.node = LetStmt{prefix + fn.params[k], -1,
                          std::move(call->args[k])};
      out.push_back(std::move(bind));
    }
    std::string ret = prefix + "__ret";
    Stmt init;
    init.loc = e->loc;
    init.node = LetStmt{ret, -1, make_expr(e->loc, NumberExpr{0.0})};
    out.push_back(std::move(init));
    for (const auto& s : fn.body) {
      Stmt copy = s.clone();
      rename_stmt(copy, prefix);
      out.push_back(std::move(copy));
    }
    return make_expr(e->loc, VarExpr{std::move(ret), -1});
  }

  // ---- validation ----

  struct ValidateState {
    std::map<std::string, int> slots;
    int next_slot = 0;
    int next_label = 0;
    int loop_depth = 0;
    std::set<std::string> reach_seen;
  };

  void validate(SourceProgram& prog) {
    ValidateState st;
    for (auto& in : prog.inputs) {
      if (!std::isfinite(in.lo) || !std::isfinite(in.hi)) {
        throw ParseError(in.loc, "input '" + in.name + "' needs finite "
                                                       "bounds");
      }
      if (!(in.lo <= in.hi)) {
        throw ParseError(in.loc, "input '" + in.name + "' has an empty "
                                                       "range");
      }
      if (in.kind == InputKind::Int &&
          (in.lo != std::floor(in.lo) || in.hi != std::floor(in.hi))) {
        throw ParseError(in.loc, "input '" + in.name + "' is int but has "
                                                       "non-integer bounds");
      }
      if (st.slots.count(in.name)) {
        throw ParseError(in.loc, "duplicate declaration of '" + in.name +
                                     "'");
      }
      in.slot = st.next_slot++;
      st.slots.emplace(in.name, in.slot);
    }
    validate_block(prog.body, prog, st);
    prog.slot_count = st.next_slot;
  }

  void validate_block(Block& body, SourceProgram& prog, ValidateState& st) {
    for (auto& s : body) {
      if (auto* let = std::get_if<LetStmt>(&s.node)) {
        validate_expr(*let->value, st);
        if (st.slots.count(let->name)) {
          throw ParseError(s.loc, "duplicate declaration of '" + let->name +
                                      "'");
        }
        let->slot = st.next_slot++;
        st.slots.emplace(let->name, let->slot);
      } else if (auto* asg = std::get_if<AssignStmt>(&s.node)) {
        validate_expr(*asg->value, st);
        auto it = st.slots.find(asg->name);
        if (it == st.slots.end()) {
          throw ParseError(s.loc, "assignment to undeclared variable '" +
                                      asg->name + "'");
        }
        asg->slot = it->second;
      } else if (auto* iff = std::get_if<IfStmt>(&s.node)) {
        validate_condition(iff->cond, prog, st, /*is_loop=*/false);
        validate_block(iff->then_body, prog, st);
        validate_block(iff->else_body, prog, st);
      } else if (auto* wh = std::get_if<WhileStmt>(&s.node)) {
        validate_condition(wh->cond, prog, st, /*is_loop=*/true);
        ++st.loop_depth;
        validate_block(wh->body, prog, st);
        --st.loop_depth;
      } else if (auto* r = std::get_if<ReachStmt>(&s.node)) {
        // Conjunction rewriting can copy a marker into several arms; record
        // the label once.  Written duplicates were rejected at parse time.
        if (st.reach_seen.insert(r->label).second) {
          prog.reach_labels.push_back(r->label);
          if (st.loop_depth > 0) {
            prog.reach_labels_in_loops.push_back(r->label);
          }
        }
      }
    }
  }

  void validate_condition(Condition& cond, SourceProgram& prog,
                          ValidateState& st, bool is_loop) {
    validate_expr(*cond.lhs, st);
    validate_expr(*cond.rhs, st);
    cond.label = st.next_label++;
    cond.in_loop = is_loop || st.loop_depth > 0;
    BranchSite site;
    site.label = cond.label;
    site.op = cond.op;
    site.in_loop = cond.in_loop;
    site.loc = cond.loc;
    site.lhs = cond.lhs.get();
    site.rhs = cond.rhs.get();
    prog.branch_sites.push_back(site);
  }

  void validate_expr(Expr& e, ValidateState& st) {
    if (auto* v = std::get_if<VarExpr>(&e.node)) {
      auto it = st.slots.find(v->name);
      if (it == st.slots.end()) {
        throw ParseError(e.loc, "use of undeclared variable '" + v->name +
                                    "'");
      }
      v->slot = it->second;
    } else if (auto* u = std::get_if<NegExpr>(&e.node)) {
      validate_expr(*u->operand, st);
    } else if (auto* b = std::get_if<BinaryExpr>(&e.node)) {
      validate_expr(*b->lhs, st);
      validate_expr(*b->rhs, st);
    } else if (auto* c = std::get_if<CallExpr>(&e.node)) {
      auto builtin = lookup_builtin(c->callee);
      if (!builtin) {
        throw ParseError(e.loc, "unknown function '" + c->callee + "'");
      }
      std::size_t arity = *builtin == Builtin::Pow ? 2 : 1;
      if (c->args.size() != arity) {
        throw ParseError(e.loc, "'" + c->callee + "' expects " +
                                    std::to_string(arity) + " argument(s)");
      }
      c->builtin = *builtin;
      c->resolved = true;
      for (auto& a : c->args) validate_expr(*a, st);
    }
  }
};

}  // namespace

SourceProgram parse_program(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace awd
