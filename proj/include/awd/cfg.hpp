#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "awd/ast.hpp"

namespace awd {

// Control-flow graph over basic blocks.  Successor id kExitId marks program
// exit; there is no explicit exit node, so a straight-line program lowers to
// a single block.  Nodes borrow statement and expression nodes from the
// program, which must outlive the graph.
inline constexpr int kExitId = -1;

struct CfgNode {
  enum class Term { Jump, Branch, Exit };

  std::vector<const Stmt*> actions;    // straight-line lets and assignments
  std::vector<std::string> reaches;    // reach labels marked in this block
  Term term = Term::Exit;
  int next = kExitId;                  // Jump successor
  int site = -1;                       // Branch: branch-site label
  bool in_loop = false;                // Branch: loop header or in a loop body
  int on_true = kExitId;
  int on_false = kExitId;
};

struct Cfg {
  std::vector<CfgNode> nodes;
  int entry = kExitId;
  std::map<std::string, int> reach_nodes;  // label -> containing block
  std::set<std::string> reach_in_loop;     // labels located inside loop bodies
  int branch_count = 0;
};

Cfg lower_to_cfg(const SourceProgram& prog);

}  // namespace awd
