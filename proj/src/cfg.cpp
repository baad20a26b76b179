#include "awd/cfg.hpp"

#include <span>

namespace awd {

namespace {

class Builder {
 public:
  explicit Builder(const SourceProgram& prog) : prog_(prog) {}

  Cfg take() && {
    cfg_.entry = build(std::span<const Stmt>(prog_.body), kExitId);
    cfg_.branch_count = static_cast<int>(prog_.branch_sites.size());
    for (const auto& label : prog_.reach_labels_in_loops) {
      cfg_.reach_in_loop.insert(label);
    }
    return std::move(cfg_);
  }

 private:
  const SourceProgram& prog_;
  Cfg cfg_;

  int new_node() {
    cfg_.nodes.emplace_back();
    return static_cast<int>(cfg_.nodes.size()) - 1;
  }

  // Lowers a statement sequence; control continues to `cont` afterwards.
  // Returns the entry block id.
  int build(std::span<const Stmt> stmts, int cont) {
    int id = new_node();
    for (std::size_t k = 0; k < stmts.size(); ++k) {
      const Stmt& s = stmts[k];
      if (std::holds_alternative<LetStmt>(s.node) ||
          std::holds_alternative<AssignStmt>(s.node)) {
        cfg_.nodes[id].actions.push_back(&s);
        continue;
      }
      if (const auto* r = std::get_if<ReachStmt>(&s.node)) {
        cfg_.nodes[id].reaches.push_back(r->label);
        cfg_.reach_nodes.emplace(r->label, id);
        continue;
      }
      std::span<const Stmt> rest = stmts.subspan(k + 1);
      int rest_id = rest.empty() ? cont : build(rest, cont);
      if (const auto* iff = std::get_if<IfStmt>(&s.node)) {
        int t_id = iff->then_body.empty()
                       ? rest_id
                       : build(std::span<const Stmt>(iff->then_body), rest_id);
        int e_id = iff->else_body.empty()
                       ? rest_id
                       : build(std::span<const Stmt>(iff->else_body), rest_id);
        CfgNode& n = cfg_.nodes[id];
        n.term = CfgNode::Term::Branch;
        n.site = iff->cond.label;
        n.in_loop = iff->cond.in_loop;
        n.on_true = t_id;
        n.on_false = e_id;
      } else {
        const auto& wh = std::get<WhileStmt>(s.node);
        int header = new_node();
        int body_id = wh.body.empty()
                          ? header
                          : build(std::span<const Stmt>(wh.body), header);
        CfgNode& h = cfg_.nodes[header];
        h.term = CfgNode::Term::Branch;
        h.site = wh.cond.label;
        h.in_loop = wh.cond.in_loop;
        h.on_true = body_id;
        h.on_false = rest_id;
        CfgNode& n = cfg_.nodes[id];
        n.term = CfgNode::Term::Jump;
        n.next = header;
      }
      return id;
    }
    cfg_.nodes[id].term = cont == kExitId ? CfgNode::Term::Exit
                                          : CfgNode::Term::Jump;
    cfg_.nodes[id].next = cont;
    return id;
  }
};

}  // namespace

Cfg lower_to_cfg(const SourceProgram& prog) {
  return Builder(prog).take();
}

}  // namespace awd
