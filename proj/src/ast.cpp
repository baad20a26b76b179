#include "awd/ast.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>

#include "awd/text.hpp"

namespace awd {

namespace {

bool same_double(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// Printing precedence: additive 1, multiplicative 2, unary minus 3, atoms 4.
int precedence(BinOp op) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub:
      return 1;
    case BinOp::Mul:
    case BinOp::Div:
      return 2;
  }
  return 1;
}

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
  }
  return "?";
}

void print_expr(std::ostream& os, const Expr& e, int min_prec);

void print_child(std::ostream& os, const Expr& e, int min_prec) {
  int prec = 4;
  if (std::holds_alternative<BinaryExpr>(e.node)) {
    prec = precedence(std::get<BinaryExpr>(e.node).op);
  } else if (std::holds_alternative<NegExpr>(e.node)) {
    prec = 3;
  }
  if (prec < min_prec) {
    os << "(";
    print_expr(os, e, 0);
    os << ")";
  } else {
    print_expr(os, e, 0);
  }
}

void print_expr(std::ostream& os, const Expr& e, int min_prec) {
  if (const auto* n = std::get_if<NumberExpr>(&e.node)) {
    os << format_double(n->value);
  } else if (const auto* v = std::get_if<VarExpr>(&e.node)) {
    os << v->name;
  } else if (const auto* u = std::get_if<NegExpr>(&e.node)) {
    os << "-";
    print_child(os, *u->operand, 4);
  } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    int prec = precedence(b->op);
    print_child(os, *b->lhs, prec);
    os << " " << binop_symbol(b->op) << " ";
    print_child(os, *b->rhs, prec + 1);
  } else if (const auto* c = std::get_if<CallExpr>(&e.node)) {
    os << c->callee << "(";
    for (std::size_t i = 0; i < c->args.size(); ++i) {
      if (i != 0) os << ", ";
      print_expr(os, *c->args[i], 0);
    }
    os << ")";
  }
  (void)min_prec;
}

void print_condition(std::ostream& os, const Condition& c) {
  print_expr(os, *c.lhs, 0);
  os << " " << to_string(c.op) << " ";
  print_expr(os, *c.rhs, 0);
}

void print_block(std::ostream& os, const Block& body, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (const auto* let = std::get_if<LetStmt>(&s.node)) {
    os << pad << "let " << let->name << " = ";
    print_expr(os, *let->value, 0);
    os << ";\n";
  } else if (const auto* asg = std::get_if<AssignStmt>(&s.node)) {
    os << pad << asg->name << " = ";
    print_expr(os, *asg->value, 0);
    os << ";\n";
  } else if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
    os << pad << "if (";
    print_condition(os, iff->cond);
    os << ") {\n";
    print_block(os, iff->then_body, indent + 1);
    os << pad << "}";
    if (!iff->else_body.empty()) {
      os << " else {\n";
      print_block(os, iff->else_body, indent + 1);
      os << pad << "}";
    }
    os << "\n";
  } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
    os << pad << "while (";
    print_condition(os, wh->cond);
    os << ") {\n";
    print_block(os, wh->body, indent + 1);
    os << pad << "}\n";
  } else if (const auto* r = std::get_if<ReachStmt>(&s.node)) {
    os << pad << "reach(\"" << r->label << "\");\n";
  }
}

void print_block(std::ostream& os, const Block& body, int indent) {
  for (const auto& s : body) {
    print_stmt(os, s, indent);
  }
}

bool equal_expr(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* n = std::get_if<NumberExpr>(&a.node)) {
    return same_double(n->value, std::get<NumberExpr>(b.node).value);
  }
  if (const auto* v = std::get_if<VarExpr>(&a.node)) {
    return v->name == std::get<VarExpr>(b.node).name;
  }
  if (const auto* u = std::get_if<NegExpr>(&a.node)) {
    return equal_expr(*u->operand, *std::get<NegExpr>(b.node).operand);
  }
  if (const auto* x = std::get_if<BinaryExpr>(&a.node)) {
    const auto& y = std::get<BinaryExpr>(b.node);
    return x->op == y.op && equal_expr(*x->lhs, *y.lhs) &&
           equal_expr(*x->rhs, *y.rhs);
  }
  if (const auto* c = std::get_if<CallExpr>(&a.node)) {
    const auto& d = std::get<CallExpr>(b.node);
    if (c->callee != d.callee || c->args.size() != d.args.size()) return false;
    for (std::size_t i = 0; i < c->args.size(); ++i) {
      if (!equal_expr(*c->args[i], *d.args[i])) return false;
    }
    return true;
  }
  return false;
}

bool equal_condition(const Condition& a, const Condition& b) {
  return a.op == b.op && a.label == b.label && a.in_loop == b.in_loop &&
         equal_expr(*a.lhs, *b.lhs) && equal_expr(*a.rhs, *b.rhs);
}

bool equal_block(const Block& a, const Block& b);

bool equal_stmt(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* x = std::get_if<LetStmt>(&a.node)) {
    const auto& y = std::get<LetStmt>(b.node);
    return x->name == y.name && equal_expr(*x->value, *y.value);
  }
  if (const auto* x = std::get_if<AssignStmt>(&a.node)) {
    const auto& y = std::get<AssignStmt>(b.node);
    return x->name == y.name && equal_expr(*x->value, *y.value);
  }
  if (const auto* x = std::get_if<IfStmt>(&a.node)) {
    const auto& y = std::get<IfStmt>(b.node);
    return equal_condition(x->cond, y.cond) &&
           equal_block(x->then_body, y.then_body) &&
           equal_block(x->else_body, y.else_body);
  }
  if (const auto* x = std::get_if<WhileStmt>(&a.node)) {
    const auto& y = std::get<WhileStmt>(b.node);
    return equal_condition(x->cond, y.cond) && equal_block(x->body, y.body);
  }
  if (const auto* x = std::get_if<ReachStmt>(&a.node)) {
    return x->label == std::get<ReachStmt>(b.node).label;
  }
  return false;
}

bool equal_block(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!equal_stmt(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

ExprPtr Expr::clone() const {
  auto out = std::make_unique<Expr>();
  out->loc = loc;
  if (const auto* n = std::get_if<NumberExpr>(&node)) {
    out->node = NumberExpr{n->value};
  } else if (const auto* v = std::get_if<VarExpr>(&node)) {
    out->node = VarExpr{v->name, v->slot};
  } else if (const auto* u = std::get_if<NegExpr>(&node)) {
    out->node = NegExpr{u->operand->clone()};
  } else if (const auto* b = std::get_if<BinaryExpr>(&node)) {
    out->node = BinaryExpr{b->op, b->lhs->clone(), b->rhs->clone()};
  } else if (const auto* c = std::get_if<CallExpr>(&node)) {
    CallExpr copy;
    copy.callee = c->callee;
    copy.builtin = c->builtin;
    copy.resolved = c->resolved;
    copy.args.reserve(c->args.size());
    for (const auto& a : c->args) copy.args.push_back(a->clone());
    out->node = std::move(copy);
  }
  return out;
}

Condition Condition::clone() const {
  Condition out;
  out.op = op;
  out.lhs = lhs->clone();
  out.rhs = rhs->clone();
  out.label = label;
  out.in_loop = in_loop;
  out.loc = loc;
  return out;
}

Stmt Stmt::clone() const {
  Stmt out;
  out.loc = loc;
  if (const auto* let = std::get_if<LetStmt>(&node)) {
    out.node = LetStmt{let->name, let->slot, let->value->clone()};
  } else if (const auto* asg = std::get_if<AssignStmt>(&node)) {
    out.node = AssignStmt{asg->name, asg->slot, asg->value->clone()};
  } else if (const auto* iff = std::get_if<IfStmt>(&node)) {
    IfStmt copy;
    copy.cond = iff->cond.clone();
    copy.then_body.reserve(iff->then_body.size());
    for (const auto& s : iff->then_body) copy.then_body.push_back(s.clone());
    copy.else_body.reserve(iff->else_body.size());
    for (const auto& s : iff->else_body) copy.else_body.push_back(s.clone());
    out.node = std::move(copy);
  } else if (const auto* wh = std::get_if<WhileStmt>(&node)) {
    WhileStmt copy;
    copy.cond = wh->cond.clone();
    copy.body.reserve(wh->body.size());
    for (const auto& s : wh->body) copy.body.push_back(s.clone());
    out.node = std::move(copy);
  } else if (const auto* r = std::get_if<ReachStmt>(&node)) {
    out.node = ReachStmt{r->label};
  }
  return out;
}

bool SourceProgram::has_reach_label(const std::string& label) const {
  return std::find(reach_labels.begin(), reach_labels.end(), label) !=
         reach_labels.end();
}

bool SourceProgram::reach_label_in_loop(const std::string& label) const {
  return std::find(reach_labels_in_loops.begin(), reach_labels_in_loops.end(),
                   label) != reach_labels_in_loops.end();
}

std::string SourceProgram::to_source() const {
  std::ostringstream os;
  for (const auto& in : inputs) {
    os << "input " << in.name << ": "
       << (in.kind == InputKind::Int ? "int" : "real") << " in ["
       << format_double(in.lo) << ", " << format_double(in.hi) << "];\n";
  }
  if (!inputs.empty() && !body.empty()) os << "\n";
  print_block(os, body, 0);
  return os.str();
}

bool structurally_equal(const SourceProgram& a, const SourceProgram& b) {
  if (a.inputs.size() != b.inputs.size()) return false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    const auto& x = a.inputs[i];
    const auto& y = b.inputs[i];
    if (x.name != y.name || x.kind != y.kind || !same_double(x.lo, y.lo) ||
        !same_double(x.hi, y.hi)) {
      return false;
    }
  }
  if (a.reach_labels != b.reach_labels) return false;
  if (a.reach_labels_in_loops != b.reach_labels_in_loops) return false;
  if (a.slot_count != b.slot_count) return false;
  return equal_block(a.body, b.body);
}

const char* builtin_name(Builtin b) {
  switch (b) {
    case Builtin::Sin: return "sin";
    case Builtin::Cos: return "cos";
    case Builtin::Tan: return "tan";
    case Builtin::Fabs: return "fabs";
    case Builtin::Floor: return "floor";
    case Builtin::Ceil: return "ceil";
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Exp: return "exp";
    case Builtin::Log: return "log";
    case Builtin::Pow: return "pow";
  }
  return "?";
}

}  // namespace awd
