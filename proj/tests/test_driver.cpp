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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "actdrv/cfg.hpp"
#include "actdrv/driver_ast.hpp"
#include "actdrv/io.hpp"
#include "oracle.hpp"

using namespace actdrv;

namespace {

std::vector<Protocol> fixture_protocols() {
  return {parse_protocol(read_file(oracle::fixture_path("power_mgmt.prot"))),
          parse_protocol(read_file(oracle::fixture_path("ping.prot")))};
}

DriverCfg lower_fixture(const std::string& rel) {
  DriverProgram prog =
      parse_driver(read_file(oracle::fixture_path(rel)), fixture_protocols());
  return lower(prog);
}

int count_kind(const DriverCfg& cfg, NodeKind kind) {
  int n = 0;
  for (const auto& node : cfg.nodes) {
    if (node.kind == kind) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("suspend_bug parses and its awaits have the documented arity") {
  DriverProgram prog = parse_driver(
      read_file(oracle::fixture_path("suspend_bug.drv")), fixture_protocols());
  CHECK(prog.name == "suspend_bug");
  CHECK(prog.uses == std::vector<std::string>{"power_mgmt"});

  DriverCfg cfg = lower(prog);
  std::vector<std::size_t> arities;
  for (const auto& node : cfg.nodes) {
    if (node.kind == NodeKind::Await) arities.push_back(node.await_set.size());
  }
  REQUIRE(arities.size() == 2);
  CHECK(arities[0] == 2);
  CHECK(arities[1] == 1);  // the buggy narrow await: resume only
  CHECK(count_kind(cfg, NodeKind::Emit) == 1);
  CHECK(count_kind(cfg, NodeKind::Branch) >= 2);
}

TEST_CASE("trivial program without protocols is valid") {
  DriverProgram prog = parse_driver("driver t { main { return ; } }", {});
  CHECK(prog.uses.empty());
  DriverCfg cfg = lower(prog);
  CHECK(cfg.nodes.size() == 1);
  CHECK(cfg.nodes[0].kind == NodeKind::Return);
}

TEST_CASE("direction misuse and unknown mailboxes are parse errors") {
  auto protocols = fixture_protocols();
  CHECK_THROWS_AS(parse_driver("driver d uses power_mgmt { main { "
                               "emit(suspend) ; } }",
                               protocols),
                  ParseError);  // emit on an 'in' mailbox
  CHECK_THROWS_AS(parse_driver("driver d uses power_mgmt { var mb : mbox ; "
                               "main { mb = await(suspend_complete) ; } }",
                               protocols),
                  ParseError);  // await on an 'out' mailbox
  CHECK_THROWS_AS(parse_driver("driver d uses power_mgmt { main { "
                               "emit(warp_core) ; } }",
                               protocols),
                  ParseError);
  CHECK_THROWS_AS(parse_driver("driver d uses nonexistent { main { } }",
                               protocols),
                  ParseError);
}

TEST_CASE("recursion and undefined calls are rejected") {
  auto protocols = fixture_protocols();
  CHECK_THROWS_AS(parse_driver("driver d { fn f() { call g() ; } "
                               "fn g() { call f() ; } main { call f() ; } }",
                               protocols),
                  ParseError);
  CHECK_THROWS_AS(parse_driver("driver d { main { call nothing() ; } }",
                               protocols),
                  ParseError);
  // Acyclic calls are fine and inline.
  DriverProgram ok = parse_driver(
      "driver d uses power_mgmt { var flag : bool = false ; "
      "fn leaf() { flag = true ; } fn mid() { call leaf() ; } "
      "main { call mid() ; call leaf() ; } }",
      protocols);
  DriverCfg cfg = lower(ok);
  CHECK(count_kind(cfg, NodeKind::Assign) == 2);
}

TEST_CASE("straight-line programs lower to n+1 nodes") {
  DriverProgram prog = parse_driver(
      "driver d { var a : bool = false ; var b : bool = true ; main { "
      "a = true ; b = a ; a = !b ; } }",
      {});
  DriverCfg cfg = lower(prog);
  CHECK(cfg.nodes.size() == 4);  // 3 assigns + implicit return
  CHECK(cfg.nodes[3].kind == NodeKind::Return);
}

TEST_CASE("empty loop is one node with a self edge") {
  DriverProgram prog = parse_driver("driver d { main { loop { } } }", {});
  DriverCfg cfg = lower(prog);
  REQUIRE(cfg.nodes.size() == 1);
  CHECK(cfg.successors(0) == std::vector<int>{0});
}

TEST_CASE("lowering is deterministic pre-order") {
  DriverCfg a = lower_fixture("suspend_ok.drv");
  DriverCfg b = lower_fixture("suspend_ok.drv");
  REQUIRE(a.nodes.size() == b.nodes.size());
  CHECK(a.entry == 0);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].kind == b.nodes[i].kind);
    CHECK(a.successors(static_cast<int>(i)) ==
          b.successors(static_cast<int>(i)));
  }
}

TEST_CASE("inlining budget trips as a resource error") {
  std::string text = "driver d { var a : bool = false ; main { ";
  for (int i = 0; i < 50; ++i) text += "a = true ; ";
  text += "} }";
  DriverProgram prog = parse_driver(text, {});
  LowerOptions opts;
  opts.max_nodes = 10;
  CHECK_THROWS_AS(lower(prog, opts), ResourceLimitError);
}

TEST_CASE("well_formed accepts the fixture corpus") {
  for (const char* rel : {"suspend_bug.drv", "suspend_ok.drv",
                          "ignore_suspend.drv", "stuck_suspending.drv",
                          "double_test.drv"}) {
    DriverCfg cfg = lower_fixture(rel);
    CHECK(well_formed(cfg, cfg.protocols).empty());
  }
}

TEST_CASE("well_formed reports dangling and ill-typed nodes") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  DriverCfg bad = cfg;
  for (auto& node : bad.nodes) {
    if (node.kind == NodeKind::Emit) node.mailbox = 99;
  }
  CHECK_FALSE(well_formed(bad, bad.protocols).empty());

  DriverCfg dangling = cfg;
  dangling.nodes[0].succ = 10000;
  CHECK_FALSE(well_formed(dangling, dangling.protocols).empty());
}

TEST_CASE("breaks outside loops are rejected at lowering") {
  DriverProgram prog = parse_driver("driver d { main { break ; } }", {});
  CHECK_THROWS_AS(lower(prog), ParseError);
}

TEST_CASE("AST interpretation and CFG execution produce identical traces") {
  std::mt19937_64 rng(2026);
  int interesting = 0;
  for (int round = 0; round < 200; ++round) {
    Protocol p = oracle::random_protocol(rng, "p");
    std::string text = oracle::random_driver_text(rng, p, "d");
    CAPTURE(text);
    DriverProgram prog = parse_driver(text, {p});
    DriverCfg cfg = lower(prog);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto ast_trace = oracle::interpret_ast(prog, seed, 40);
      auto cfg_trace = oracle::interpret_cfg(cfg, seed, 40);
      CHECK(ast_trace == cfg_trace);
      if (ast_trace.size() >= 3) ++interesting;
    }
  }
  CHECK(interesting > 30);  // the generator produces real behavior
}

TEST_CASE("fixture drivers behave identically as AST and CFG") {
  auto protocols = fixture_protocols();
  for (const char* rel : {"suspend_bug.drv", "suspend_ok.drv",
                          "double_test.drv", "mutants/m10_ignore_ping.drv"}) {
    DriverProgram prog =
        parse_driver(read_file(oracle::fixture_path(rel)), protocols);
    DriverCfg cfg = lower(prog);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      CHECK(oracle::interpret_ast(prog, seed, 60) ==
            oracle::interpret_cfg(cfg, seed, 60));
    }
  }
}
