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

#ifndef ACTDRV_CFG_HPP_
#define ACTDRV_CFG_HPP_

#include <memory>
#include <string>
#include <vector>

#include "actdrv/driver_ast.hpp"

namespace actdrv {

// Control-flow graph a driver program lowers to. Functions are fully
// inlined, structured control flow becomes edges, and nodes are numbered
// in pre-order from the entry so identical sources produce identical
// graphs.

enum class NodeKind { Assign, Branch, Emit, Await, Return };

struct CfgNode {
  NodeKind kind = NodeKind::Assign;
  SourceLoc loc;

  // Assign. var < 0 is a skip (no effect). For bool vars `expr` holds the
  // right-hand side; for enum vars `value` holds the literal index.
  int var = -1;
  std::shared_ptr<Expr> expr;  // Assign rhs or Branch condition
  int value = 0;

  // Branch. expr == nullptr means a nondeterministic branch (`choose`
  // havoc); the checker explores both arms, the simulator flips a coin.
  int succ_true = -1;
  int succ_false = -1;

  // Emit / Await.
  int mailbox = -1;              // Emit: global mailbox id
  std::vector<int> await_set;    // Await: global ids, name-sorted
  int succ = -1;                 // single successor (Assign/Emit/Await)
};

struct DriverCfg {
  std::string name;
  std::vector<VarDecl> vars;
  ProtocolSet protocols;
  std::vector<CfgNode> nodes;
  int entry = 0;

  std::vector<int> successors(int node) const;
  std::vector<int> initial_valuation() const;
};

struct LowerOptions {
  std::size_t max_nodes = 10000;  // inlining budget
};

/// Lowers a parsed program to its CFG. Throws ResourceLimitError when
/// inlining exceeds the node budget.
DriverCfg lower(const DriverProgram& prog, const LowerOptions& opts = {});

/// CFG invariants plus mailbox/direction binding against `protocols`.
/// Empty result iff clean.
std::vector<Diagnostic> well_formed(const DriverCfg& cfg,
                                    const ProtocolSet& protocols);

/// Evaluates a boolean expression under a valuation.
bool eval_expr(const Expr& e, const std::vector<int>& valuation);

/// Renumbers nodes in pre-order from the entry (true arm first) and drops
/// unreachable ones. Identity on graphs already in this form.
void renumber_preorder(DriverCfg& cfg);

}  // namespace actdrv

#endif  // ACTDRV_CFG_HPP_
