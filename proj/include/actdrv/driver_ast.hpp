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

#ifndef ACTDRV_DRIVER_AST_HPP_
#define ACTDRV_DRIVER_AST_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "actdrv/diag.hpp"
#include "actdrv/protocol.hpp"

namespace actdrv {

// The driver model language: an imperative skeleton with EMIT/AWAIT over
// the mailboxes of the protocols it uses, finite-domain variables only.
// Device-register logic is out of the model; writers abstract it as
// comments or no-ops.

struct VarDecl {
  enum class Kind { Bool, Enum, MboxResult };

  std::string name;
  Kind kind = Kind::Bool;
  std::vector<std::string> enum_literals;  // Kind::Enum only
  int init = 0;  // bool: 0/1; enum: literal index; mbox: always "none"
};

// Values at runtime are small integers: bool 0/1, enum literal index, and
// for mbox-result variables 0 = none, k+1 = global mailbox id k.
inline constexpr int kMboxNone = 0;

struct Expr {
  enum class Kind { Const, VarRef, CmpEq, Not, And, Or };

  Kind kind = Kind::Const;
  bool const_value = false;           // Const
  int var = -1;                       // VarRef, CmpEq
  int cmp_value = 0;                  // CmpEq: encoded operand value
  bool cmp_negated = false;           // CmpEq: true for !=
  std::unique_ptr<Expr> lhs, rhs;     // Not (lhs), And/Or
  SourceLoc loc;
};

using ExprPtr = std::unique_ptr<Expr>;

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind {
    AssignBool,   // var = <bool expr>
    AssignEnum,   // var = <literal>
    Emit,         // emit(m)
    Await,        // var = await(m1, ..)
    If,           // cond, then_block, else_block
    While,        // cond, body
    Loop,         // body
    Break,
    Return,
    Choose,       // boolean havoc on var
    Call,         // call f()
  };

  Kind kind;
  SourceLoc loc;
  int var = -1;
  ExprPtr expr;                  // AssignBool rhs, If/While cond
  int enum_value = 0;            // AssignEnum
  int mailbox = -1;              // Emit: global mailbox id
  std::vector<int> await_set;    // Await: global mailbox ids (name sorted)
  Block then_block, else_block;  // If; While/Loop use then_block
  int callee = -1;               // Call: function index
};

struct Function {
  std::string name;
  Block body;
};

struct DriverProgram {
  std::string name;
  std::vector<std::string> uses;  // protocol names, declaration order
  std::vector<VarDecl> vars;
  std::vector<Function> functions;
  Block main_body;

  // The protocol set the program was bound against (uses order).
  ProtocolSet protocols;

  int var_index(std::string_view var_name) const;
};

/// Parses and binds a driver program against the given protocols. The
/// `uses` clause selects protocols by name from `available`; every mailbox
/// referenced by EMIT/AWAIT must belong to a used protocol with the right
/// direction. Rejects recursive or undefined function calls.
DriverProgram parse_driver(std::string_view text,
                           const std::vector<Protocol>& available);

}  // namespace actdrv

#endif  // ACTDRV_DRIVER_AST_HPP_
