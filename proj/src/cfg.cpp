/*
 * Copyright (c) 2026, the actdrv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "actdrv/cfg.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace actdrv {

std::vector<int> DriverCfg::successors(int node) const {
  const CfgNode& n = nodes[node];
  switch (n.kind) {
    case NodeKind::Branch:
      return {n.succ_true, n.succ_false};
    case NodeKind::Return:
      return {};
    default:
      return {n.succ};
  }
}

std::vector<int> DriverCfg::initial_valuation() const {
  std::vector<int> v;
  v.reserve(vars.size());
  for (const auto& decl : vars) v.push_back(decl.init);
  return v;
}

bool eval_expr(const Expr& e, const std::vector<int>& valuation) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.const_value;
    case Expr::Kind::VarRef:
      return valuation[e.var] != 0;
    case Expr::Kind::CmpEq: {
      bool eq = valuation[e.var] == e.cmp_value;
      return e.cmp_negated ? !eq : eq;
    }
    case Expr::Kind::Not:
      return !eval_expr(*e.lhs, valuation);
    case Expr::Kind::And:
      return eval_expr(*e.lhs, valuation) && eval_expr(*e.rhs, valuation);
    case Expr::Kind::Or:
      return eval_expr(*e.lhs, valuation) || eval_expr(*e.rhs, valuation);
  }
  return false;
}

namespace {

ExprPtr clone_expr_tree(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->const_value = e.const_value;
  out->var = e.var;
  out->cmp_value = e.cmp_value;
  out->cmp_negated = e.cmp_negated;
  out->loc = e.loc;
  if (e.lhs) out->lhs = clone_expr_tree(*e.lhs);
  if (e.rhs) out->rhs = clone_expr_tree(*e.rhs);
  return out;
}

std::shared_ptr<Expr> clone_expr(const Expr& e) {
  return std::shared_ptr<Expr>(clone_expr_tree(e));
}

class Lowerer {
 public:
  Lowerer(const DriverProgram& prog, const LowerOptions& opts)
      : prog_(prog), opts_(opts) {}

  DriverCfg run() {
    DriverCfg cfg;
    cfg.name = prog_.name;
    cfg.vars = prog_.vars;
    cfg.protocols = prog_.protocols;

    CfgNode ret;
    ret.kind = NodeKind::Return;
    int implicit_return = add(std::move(ret));
    int entry = lower_block(prog_.main_body, implicit_return, kNoLoop);

    cfg.nodes = std::move(nodes_);
    cfg.entry = entry;
    renumber_preorder(cfg);
    return cfg;
  }

 private:
  static constexpr int kNoLoop = -1;

  int add(CfgNode n) {
    if (nodes_.size() >= opts_.max_nodes) {
      throw ResourceLimitError("inlining budget exceeded while lowering '" +
                                   prog_.name + "'",
                               opts_.max_nodes, nodes_.size() + 1);
    }
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int lower_block(const Block& block, int next, int break_target) {
    int entry = next;
    for (auto it = block.rbegin(); it != block.rend(); ++it) {
      entry = lower_stmt(**it, entry, break_target);
    }
    return entry;
  }

  int lower_stmt(const Stmt& s, int next, int break_target) {
    switch (s.kind) {
      case Stmt::Kind::AssignBool: {
        CfgNode n;
        n.kind = NodeKind::Assign;
        n.loc = s.loc;
        n.var = s.var;
        n.expr = clone_expr(*s.expr);
        n.succ = next;
        return add(std::move(n));
      }
      case Stmt::Kind::AssignEnum: {
        CfgNode n;
        n.kind = NodeKind::Assign;
        n.loc = s.loc;
        n.var = s.var;
        n.value = s.enum_value;
        n.succ = next;
        return add(std::move(n));
      }
      case Stmt::Kind::Emit: {
        CfgNode n;
        n.kind = NodeKind::Emit;
        n.loc = s.loc;
        n.mailbox = s.mailbox;
        n.succ = next;
        return add(std::move(n));
      }
      case Stmt::Kind::Await: {
        CfgNode n;
        n.kind = NodeKind::Await;
        n.loc = s.loc;
        n.var = s.var;
        n.await_set = s.await_set;
        n.succ = next;
        return add(std::move(n));
      }
      case Stmt::Kind::If: {
        int then_entry = lower_block(s.then_block, next, break_target);
        int else_entry = lower_block(s.else_block, next, break_target);
        CfgNode n;
        n.kind = NodeKind::Branch;
        n.loc = s.loc;
        n.expr = clone_expr(*s.expr);
        n.succ_true = then_entry;
        n.succ_false = else_entry;
        return add(std::move(n));
      }
      case Stmt::Kind::While: {
        CfgNode placeholder;
        placeholder.kind = NodeKind::Branch;
        placeholder.loc = s.loc;
        int head = add(std::move(placeholder));
        int body_entry = lower_block(s.then_block, head, next);
        nodes_[head].expr = clone_expr(*s.expr);
        nodes_[head].succ_true = body_entry;
        nodes_[head].succ_false = next;
        return head;
      }
      case Stmt::Kind::Loop: {
        // Header skip node carries the back edge; `loop { }` is exactly
        // one node with a self edge.
        CfgNode header;
        header.kind = NodeKind::Assign;
        header.loc = s.loc;
        header.var = -1;
        int head = add(std::move(header));
        int body_entry = lower_block(s.then_block, head, next);
        nodes_[head].succ = body_entry == head ? head : body_entry;
        return head;
      }
      case Stmt::Kind::Break: {
        if (break_target == kNoLoop) {
          throw ParseError("break outside of a loop", s.loc);
        }
        return break_target;
      }
      case Stmt::Kind::Return: {
        CfgNode n;
        n.kind = NodeKind::Return;
        n.loc = s.loc;
        return add(std::move(n));
      }
      case Stmt::Kind::Choose: {
        CfgNode set_true;
        set_true.kind = NodeKind::Assign;
        set_true.loc = s.loc;
        set_true.var = s.var;
        auto cv = std::make_shared<Expr>();
        cv->kind = Expr::Kind::Const;
        cv->const_value = true;
        set_true.expr = cv;
        set_true.succ = next;
        int t = add(std::move(set_true));

        CfgNode set_false;
        set_false.kind = NodeKind::Assign;
        set_false.loc = s.loc;
        set_false.var = s.var;
        auto cf = std::make_shared<Expr>();
        cf->kind = Expr::Kind::Const;
        cf->const_value = false;
        set_false.expr = cf;
        set_false.succ = next;
        int f = add(std::move(set_false));

        CfgNode n;
        n.kind = NodeKind::Branch;
        n.loc = s.loc;
        n.expr = nullptr;  // nondeterministic
        n.succ_true = t;
        n.succ_false = f;
        return add(std::move(n));
      }
      case Stmt::Kind::Call: {
        // Breaks do not cross function boundaries.
        return lower_block(prog_.functions[s.callee].body, next, kNoLoop);
      }
    }
    throw ParseError("unhandled statement kind", s.loc);
  }

  const DriverProgram& prog_;
  const LowerOptions& opts_;
  std::vector<CfgNode> nodes_;
};

void check_expr_vars(const Expr& e, const DriverCfg& cfg,
                     std::vector<Diagnostic>& diags) {
  if (e.kind == Expr::Kind::VarRef || e.kind == Expr::Kind::CmpEq) {
    if (e.var < 0 || e.var >= static_cast<int>(cfg.vars.size())) {
      diags.push_back({Severity::Error,
                       "expression references a variable outside the "
                       "program",
                       e.loc});
    }
  }
  if (e.lhs) check_expr_vars(*e.lhs, cfg, diags);
  if (e.rhs) check_expr_vars(*e.rhs, cfg, diags);
}

}  // namespace

DriverCfg lower(const DriverProgram& prog, const LowerOptions& opts) {
  return Lowerer(prog, opts).run();
}

void renumber_preorder(DriverCfg& cfg) {
  std::vector<int> order;
  std::vector<int> old_to_new(cfg.nodes.size(), -1);
  std::function<void(int)> visit = [&](int n) {
    if (old_to_new[n] >= 0) return;
    old_to_new[n] = static_cast<int>(order.size());
    order.push_back(n);
    for (int s : cfg.successors(n)) visit(s);
  };
  visit(cfg.entry);

  std::vector<CfgNode> renumbered(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    CfgNode n = std::move(cfg.nodes[order[i]]);
    auto remap = [&](int idx) { return idx < 0 ? idx : old_to_new[idx]; };
    n.succ = remap(n.succ);
    n.succ_true = remap(n.succ_true);
    n.succ_false = remap(n.succ_false);
    renumbered[i] = std::move(n);
  }
  cfg.nodes = std::move(renumbered);
  cfg.entry = 0;
}

std::vector<Diagnostic> well_formed(const DriverCfg& cfg,
                                    const ProtocolSet& protocols) {
  std::vector<Diagnostic> diags;
  auto error = [&](std::string msg, SourceLoc loc = {}) {
    diags.push_back({Severity::Error, std::move(msg), loc});
  };

  int n = static_cast<int>(cfg.nodes.size());
  if (n == 0 || cfg.entry < 0 || cfg.entry >= n) {
    error("entry node out of range");
    return diags;
  }
  auto in_range = [&](int idx) { return idx >= 0 && idx < n; };
  int num_mailboxes = static_cast<int>(protocols.mailboxes.size());

  for (int i = 0; i < n; ++i) {
    const CfgNode& node = cfg.nodes[i];
    for (int s : cfg.successors(i)) {
      if (!in_range(s)) {
        error("node " + std::to_string(i) + " has a dangling successor",
              node.loc);
      }
    }
    switch (node.kind) {
      case NodeKind::Assign:
        if (node.var >= static_cast<int>(cfg.vars.size())) {
          error("assignment to unknown variable", node.loc);
        }
        if (node.expr) check_expr_vars(*node.expr, cfg, diags);
        break;
      case NodeKind::Branch:
        if (node.expr) check_expr_vars(*node.expr, cfg, diags);
        break;
      case NodeKind::Emit:
        if (node.mailbox < 0 || node.mailbox >= num_mailboxes) {
          error("emit on unknown mailbox", node.loc);
        } else if (protocols.mailboxes[node.mailbox].direction !=
                   Direction::Out) {
          error("emit on mailbox '" +
                    protocols.mailboxes[node.mailbox].name +
                    "' which is declared 'in'",
                node.loc);
        }
        break;
      case NodeKind::Await: {
        if (node.await_set.empty()) {
          error("await with empty mailbox set", node.loc);
        }
        for (int g : node.await_set) {
          if (g < 0 || g >= num_mailboxes) {
            error("await on unknown mailbox", node.loc);
          } else if (protocols.mailboxes[g].direction != Direction::In) {
            error("await on mailbox '" + protocols.mailboxes[g].name +
                      "' which is declared 'out'",
                  node.loc);
          }
        }
        if (node.var < 0 || node.var >= static_cast<int>(cfg.vars.size()) ||
            cfg.vars[node.var].kind != VarDecl::Kind::MboxResult) {
          error("await result variable is not an mbox variable", node.loc);
        }
        break;
      }
      case NodeKind::Return:
        break;
    }
  }

  // Reachability.
  std::vector<char> reach(n, 0);
  std::vector<int> stack{cfg.entry};
  reach[cfg.entry] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int s : cfg.successors(v)) {
      if (in_range(s) && !reach[s]) {
        reach[s] = 1;
        stack.push_back(s);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!reach[i]) {
      error("node " + std::to_string(i) + " is unreachable from entry",
            cfg.nodes[i].loc);
    }
  }
  return diags;
}

}  // namespace actdrv
