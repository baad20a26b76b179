#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "awd/compare.hpp"
#include "awd/diagnostics.hpp"

namespace awd {

enum class BinOp { Add, Sub, Mul, Div };

enum class Builtin { Sin, Cos, Tan, Fabs, Floor, Ceil, Sqrt, Exp, Log, Pow };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NumberExpr {
  double value = 0.0;  // literals are unsigned; negation is a unary node
};

struct VarExpr {
  std::string name;
  int slot = -1;  // environment slot, filled in by validation
};

struct NegExpr {
  ExprPtr operand;
};

struct BinaryExpr {
  BinOp op{};
  ExprPtr lhs;
  ExprPtr rhs;
};

struct CallExpr {
  std::string callee;
  std::vector<ExprPtr> args;
  Builtin builtin{};      // resolved by validation; user functions are gone by then
  bool resolved = false;
};

struct Expr {
  SourceLoc loc;
  std::variant<NumberExpr, VarExpr, NegExpr, BinaryExpr, CallExpr> node;

  ExprPtr clone() const;
};

// A single comparison guarding a conditional or loop.  Every condition in a
// validated program carries a dense label assigned in source order.
struct Condition {
  Cmp op{};
  ExprPtr lhs;
  ExprPtr rhs;
  int label = -1;
  bool in_loop = false;
  SourceLoc loc;

  Condition clone() const;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct LetStmt {
  std::string name;
  int slot = -1;
  ExprPtr value;
};

struct AssignStmt {
  std::string name;
  int slot = -1;
  ExprPtr value;
};

struct IfStmt {
  Condition cond;
  Block then_body;
  Block else_body;
};

struct WhileStmt {
  Condition cond;
  Block body;
};

struct ReachStmt {
  std::string label;
};

struct Stmt {
  SourceLoc loc;
  std::variant<LetStmt, AssignStmt, IfStmt, WhileStmt, ReachStmt> node;

  Stmt clone() const;
};

enum class InputKind { Real, Int };

struct InputDecl {
  std::string name;
  InputKind kind = InputKind::Real;
  double lo = 0.0;
  double hi = 0.0;
  int slot = -1;
  SourceLoc loc;
};

// One comparison condition of the program, identified by its dense label.
// lhs/rhs borrow the owning program's expression nodes.
struct BranchSite {
  int label = -1;
  Cmp op{};
  bool in_loop = false;  // loop header, or lexically inside a loop body
  SourceLoc loc;
  const Expr* lhs = nullptr;
  const Expr* rhs = nullptr;
};

// Validated program: inputs with finite boxes, a statement tree in which
// user-defined helpers have been inlined and compound conditions split into
// nested single-comparison branches.
struct SourceProgram {
  std::vector<InputDecl> inputs;
  Block body;
  std::vector<BranchSite> branch_sites;
  std::vector<std::string> reach_labels;           // unique, in source order
  std::vector<std::string> reach_labels_in_loops;  // subset located inside loops
  int slot_count = 0;

  bool has_reach_label(const std::string& label) const;
  bool reach_label_in_loop(const std::string& label) const;

  // Canonical source form; parsing it back yields an equivalent program.
  std::string to_source() const;
};

// Equality of program structure, ignoring source locations.
bool structurally_equal(const SourceProgram& a, const SourceProgram& b);

const char* builtin_name(Builtin b);

}  // namespace awd
