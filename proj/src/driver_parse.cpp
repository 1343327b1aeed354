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

#include <algorithm>
#include <functional>
#include <utility>

#include "actdrv/driver_ast.hpp"
#include "actdrv/lexer.hpp"

namespace actdrv {

namespace {

constexpr int kMaxEnumLiterals = 16;

class DriverParser {
 public:
  DriverParser(std::string_view text, const std::vector<Protocol>& available)
      : lex_(text), available_(available) {}

  DriverProgram parse() {
    lex_.expect_keyword("driver");
    prog_.name = lex_.expect_ident().text;
    if (lex_.accept_ident("uses")) {
      do {
        Token t = lex_.expect_ident();
        prog_.uses.push_back(t.text);
      } while (lex_.accept(","));
    }
    bind_protocols();
    lex_.expect("{");

    while (lex_.peek().is_ident("var")) parse_var_decl();

    // Collect function names first so that call sites can be resolved in
    // one pass regardless of declaration order.
    std::size_t fn_scan = 0;
    {
      Lexer probe = lex_;
      while (probe.accept_ident("fn")) {
        Token name = probe.expect_ident();
        prog_.functions.push_back({name.text, {}});
        probe.expect("(");
        probe.expect(")");
        skip_block(probe);
        ++fn_scan;
      }
    }

    for (std::size_t i = 0; i < fn_scan; ++i) {
      lex_.expect_keyword("fn");
      Token name = lex_.expect_ident();
      lex_.expect("(");
      lex_.expect(")");
      lex_.expect("{");
      current_fn_ = static_cast<int>(i);
      prog_.functions[i].body = parse_block();
      current_fn_ = -1;
      (void)name;
    }

    lex_.expect_keyword("main");
    lex_.expect("{");
    prog_.main_body = parse_block();
    lex_.expect("}");
    if (!lex_.at_end()) {
      throw ParseError("trailing input after driver body", lex_.peek().loc);
    }
    check_call_graph();
    return std::move(prog_);
  }

 private:
  void bind_protocols() {
    std::vector<Protocol> used;
    for (const auto& name : prog_.uses) {
      auto it = std::find_if(available_.begin(), available_.end(),
                             [&](const Protocol& p) { return p.name == name; });
      if (it == available_.end()) {
        throw ParseError("driver uses unknown protocol '" + name + "'",
                         SourceLoc{});
      }
      used.push_back(*it);
    }
    prog_.protocols = make_protocol_set(std::move(used));
  }

  static void skip_block(Lexer& probe) {
    probe.expect("{");
    int depth = 1;
    while (depth > 0) {
      if (probe.at_end()) {
        throw ParseError("unterminated block", probe.peek().loc);
      }
      Token t = probe.next();
      if (t.is("{")) ++depth;
      if (t.is("}")) --depth;
    }
  }

  void parse_var_decl() {
    lex_.expect_keyword("var");
    Token name = lex_.expect_ident();
    if (prog_.var_index(name.text) >= 0) {
      throw ParseError("duplicate variable '" + name.text + "'", name.loc);
    }
    lex_.expect(":");
    Token type = lex_.expect_ident();
    VarDecl decl;
    decl.name = name.text;
    if (type.text == "bool") {
      decl.kind = VarDecl::Kind::Bool;
      lex_.expect("=");
      Token v = lex_.expect_ident();
      if (v.text == "true") {
        decl.init = 1;
      } else if (v.text == "false") {
        decl.init = 0;
      } else {
        throw ParseError("bool initializer must be true or false", v.loc);
      }
    } else if (type.text == "enum") {
      decl.kind = VarDecl::Kind::Enum;
      lex_.expect("{");
      do {
        Token lit = lex_.expect_ident();
        if (std::find(decl.enum_literals.begin(), decl.enum_literals.end(),
                      lit.text) != decl.enum_literals.end()) {
          throw ParseError("duplicate enum literal '" + lit.text + "'",
                           lit.loc);
        }
        decl.enum_literals.push_back(lit.text);
      } while (lex_.accept(","));
      lex_.expect("}");
      if (static_cast<int>(decl.enum_literals.size()) > kMaxEnumLiterals) {
        throw ParseError("enum domain exceeds " +
                             std::to_string(kMaxEnumLiterals) + " literals",
                         name.loc);
      }
      lex_.expect("=");
      Token v = lex_.expect_ident();
      auto it = std::find(decl.enum_literals.begin(),
                          decl.enum_literals.end(), v.text);
      if (it == decl.enum_literals.end()) {
        throw ParseError("initializer '" + v.text +
                             "' is not a literal of the enum",
                         v.loc);
      }
      decl.init = static_cast<int>(it - decl.enum_literals.begin());
    } else if (type.text == "mbox") {
      decl.kind = VarDecl::Kind::MboxResult;
      decl.init = kMboxNone;
    } else {
      throw ParseError("unknown type '" + type.text + "'", type.loc);
    }
    lex_.expect(";");
    prog_.vars.push_back(std::move(decl));
  }

  Block parse_block() {
    Block block;
    while (!lex_.accept("}")) {
      block.push_back(parse_stmt());
    }
    return block;
  }

  StmtPtr parse_stmt() {
    Token head = lex_.expect_ident();
    auto stmt = std::make_unique<Stmt>();
    stmt->loc = head.loc;
    if (head.text == "emit") {
      stmt->kind = Stmt::Kind::Emit;
      lex_.expect("(");
      stmt->mailbox = resolve_mailbox(lex_.expect_ident(), Direction::Out,
                                      "emit");
      lex_.expect(")");
      lex_.expect(";");
    } else if (head.text == "if") {
      stmt->kind = Stmt::Kind::If;
      lex_.expect("(");
      stmt->expr = parse_expr();
      lex_.expect(")");
      lex_.expect("{");
      stmt->then_block = parse_block();
      if (lex_.accept_ident("else")) {
        lex_.expect("{");
        stmt->else_block = parse_block();
      }
    } else if (head.text == "while") {
      stmt->kind = Stmt::Kind::While;
      lex_.expect("(");
      stmt->expr = parse_expr();
      lex_.expect(")");
      lex_.expect("{");
      stmt->then_block = parse_block();
    } else if (head.text == "loop") {
      stmt->kind = Stmt::Kind::Loop;
      lex_.expect("{");
      stmt->then_block = parse_block();
    } else if (head.text == "break") {
      stmt->kind = Stmt::Kind::Break;
      lex_.expect(";");
    } else if (head.text == "return") {
      stmt->kind = Stmt::Kind::Return;
      lex_.expect(";");
    } else if (head.text == "choose") {
      stmt->kind = Stmt::Kind::Choose;
      Token v = lex_.expect_ident();
      stmt->var = resolve_var(v);
      if (prog_.vars[stmt->var].kind != VarDecl::Kind::Bool) {
        throw ParseError("choose requires a bool variable", v.loc);
      }
      lex_.expect(";");
    } else if (head.text == "call") {
      stmt->kind = Stmt::Kind::Call;
      Token f = lex_.expect_ident();
      stmt->callee = -1;
      for (std::size_t i = 0; i < prog_.functions.size(); ++i) {
        if (prog_.functions[i].name == f.text) {
          stmt->callee = static_cast<int>(i);
          break;
        }
      }
      if (stmt->callee < 0) {
        throw ParseError("call to undefined function '" + f.text + "'", f.loc);
      }
      if (current_fn_ >= 0) {
        calls_.emplace_back(current_fn_, stmt->callee);
      }
      lex_.expect("(");
      lex_.expect(")");
      lex_.expect(";");
    } else {
      // assignment or await: <var> = ...
      int var = resolve_var(head);
      stmt->var = var;
      lex_.expect("=");
      const VarDecl& decl = prog_.vars[var];
      if (lex_.peek().is_ident("await")) {
        Token kw = lex_.next();
        if (decl.kind != VarDecl::Kind::MboxResult) {
          throw ParseError("await result must go to an mbox variable",
                           kw.loc);
        }
        stmt->kind = Stmt::Kind::Await;
        lex_.expect("(");
        do {
          int g = resolve_mailbox(lex_.expect_ident(), Direction::In, "await");
          if (std::find(stmt->await_set.begin(), stmt->await_set.end(), g) !=
              stmt->await_set.end()) {
            throw ParseError("duplicate mailbox in await set", kw.loc);
          }
          stmt->await_set.push_back(g);
        } while (lex_.accept(","));
        lex_.expect(")");
        // Canonical order keeps exploration and reports deterministic.
        std::sort(stmt->await_set.begin(), stmt->await_set.end(),
                  [&](int a, int b) {
                    return prog_.protocols.mailboxes[a].name <
                           prog_.protocols.mailboxes[b].name;
                  });
      } else if (decl.kind == VarDecl::Kind::Bool) {
        stmt->kind = Stmt::Kind::AssignBool;
        stmt->expr = parse_expr();
      } else if (decl.kind == VarDecl::Kind::Enum) {
        stmt->kind = Stmt::Kind::AssignEnum;
        Token lit = lex_.expect_ident();
        auto it = std::find(decl.enum_literals.begin(),
                            decl.enum_literals.end(), lit.text);
        if (it == decl.enum_literals.end()) {
          throw ParseError("'" + lit.text + "' is not a literal of enum '" +
                               decl.name + "'",
                           lit.loc);
        }
        stmt->enum_value = static_cast<int>(it - decl.enum_literals.begin());
      } else {
        throw ParseError("mbox variable '" + decl.name +
                             "' can only be assigned from await",
                         head.loc);
      }
      lex_.expect(";");
    }
    return stmt;
  }

  // expr := and_expr { '||' and_expr }
  // and_expr := unary { '&&' unary }
  // unary := '!' unary | '(' expr ')' | atom
  // atom := true | false | var | var ==/!= operand
  ExprPtr parse_expr() {
    ExprPtr e = parse_and();
    while (lex_.peek().is("||")) {
      Token op = lex_.next();
      auto parent = std::make_unique<Expr>();
      parent->kind = Expr::Kind::Or;
      parent->loc = op.loc;
      parent->lhs = std::move(e);
      parent->rhs = parse_and();
      e = std::move(parent);
    }
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_unary();
    while (lex_.peek().is("&&")) {
      Token op = lex_.next();
      auto parent = std::make_unique<Expr>();
      parent->kind = Expr::Kind::And;
      parent->loc = op.loc;
      parent->lhs = std::move(e);
      parent->rhs = parse_unary();
      e = std::move(parent);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (lex_.peek().is("!")) {
      Token op = lex_.next();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::Not;
      e->loc = op.loc;
      e->lhs = parse_unary();
      return e;
    }
    if (lex_.accept("(")) {
      ExprPtr e = parse_expr();
      lex_.expect(")");
      return e;
    }
    Token t = lex_.expect_ident();
    auto e = std::make_unique<Expr>();
    e->loc = t.loc;
    if (t.text == "true" || t.text == "false") {
      e->kind = Expr::Kind::Const;
      e->const_value = t.text == "true";
      return e;
    }
    int var = resolve_var(t);
    const VarDecl& decl = prog_.vars[var];
    if (lex_.peek().is("==") || lex_.peek().is("!=")) {
      Token op = lex_.next();
      Token operand = lex_.expect_ident();
      e->kind = Expr::Kind::CmpEq;
      e->var = var;
      e->cmp_negated = op.text == "!=";
      if (decl.kind == VarDecl::Kind::Enum) {
        auto it = std::find(decl.enum_literals.begin(),
                            decl.enum_literals.end(), operand.text);
        if (it == decl.enum_literals.end()) {
          throw ParseError("'" + operand.text +
                               "' is not a literal of enum '" + decl.name +
                               "'",
                           operand.loc);
        }
        e->cmp_value = static_cast<int>(it - decl.enum_literals.begin());
      } else if (decl.kind == VarDecl::Kind::MboxResult) {
        int g = resolve_mailbox(operand, Direction::In, "compare");
        e->cmp_value = g + 1;  // mbox encoding: 0 = none
      } else {
        throw ParseError("'==' needs an enum or mbox variable", op.loc);
      }
      return e;
    }
    if (decl.kind != VarDecl::Kind::Bool) {
      throw ParseError("variable '" + decl.name +
                           "' is not bool and cannot stand alone in a "
                           "condition",
                       t.loc);
    }
    e->kind = Expr::Kind::VarRef;
    e->var = var;
    return e;
  }

  int resolve_var(const Token& t) {
    int var = prog_.var_index(t.text);
    if (var < 0) {
      throw ParseError("unknown variable '" + t.text + "'", t.loc);
    }
    return var;
  }

  int resolve_mailbox(const Token& t, Direction want, const char* what) {
    int g = prog_.protocols.mailbox_index(t.text);
    if (g < 0) {
      throw ParseError("unknown mailbox '" + t.text + "'", t.loc);
    }
    if (prog_.protocols.mailboxes[g].direction != want) {
      throw ParseError(std::string(what) + " on mailbox '" + t.text +
                           "' has the wrong direction (declared '" +
                           (prog_.protocols.mailboxes[g].direction ==
                                    Direction::In
                                ? "in"
                                : "out") +
                           "')",
                       t.loc);
    }
    return g;
  }

  void check_call_graph() {
    // DFS for a cycle; the call graph is tiny.
    int n = static_cast<int>(prog_.functions.size());
    std::vector<int> color(n, 0);
    std::vector<std::vector<int>> succ(n);
    for (auto [from, to] : calls_) succ[from].push_back(to);
    std::function<void(int)> visit = [&](int f) {
      color[f] = 1;
      for (int g : succ[f]) {
        if (color[g] == 1) {
          throw ParseError("recursion detected involving function '" +
                               prog_.functions[f].name + "'",
                           SourceLoc{});
        }
        if (color[g] == 0) visit(g);
      }
      color[f] = 2;
    };
    for (int f = 0; f < n; ++f) {
      if (color[f] == 0) visit(f);
    }
  }

  Lexer lex_;
  const std::vector<Protocol>& available_;
  DriverProgram prog_;
  int current_fn_ = -1;
  std::vector<std::pair<int, int>> calls_;
};

}  // namespace

int DriverProgram::var_index(std::string_view var_name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == var_name) return static_cast<int>(i);
  }
  return -1;
}

DriverProgram parse_driver(std::string_view text,
                           const std::vector<Protocol>& available) {
  return DriverParser(text, available).parse();
}

}  // namespace actdrv
