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
#include <set>

#include "actdrv/io.hpp"
#include "actdrv/protocol.hpp"
#include "oracle.hpp"

using namespace actdrv;

namespace {

Protocol load_power_mgmt() {
  return parse_protocol(read_file(oracle::fixture_path("power_mgmt.prot")));
}

std::set<std::string> enabled_names(const Protocol& p, StateId s,
                                    Direction d) {
  std::set<std::string> names;
  for (int m : p.enabled(s, d)) names.insert(p.mailboxes[m].name);
  return names;
}

}  // namespace

TEST_CASE("power_mgmt fixture parses with the documented shape") {
  Protocol p = load_power_mgmt();
  CHECK(p.name == "power_mgmt");
  CHECK(p.num_states() == 6);
  CHECK(p.transitions.size() == 7);
  CHECK(p.mailboxes.size() == 6);
  CHECK(p.state_names[p.initial] == "RUNNING");

  StateId suspended = p.state_index("SUSPENDED");
  StateId running = p.state_index("RUNNING");
  StateId unplugged = p.state_index("UNPLUGGED");
  REQUIRE(suspended != kReject);
  CHECK(p.is_fair[suspended]);
  CHECK(p.is_fair[running]);
  CHECK(p.is_final[unplugged]);
  CHECK(p.is_timed[p.state_index("SUSPENDING")]);
  CHECK_FALSE(p.is_timed[running]);
}

TEST_CASE("degenerate single-state protocol accepts only the empty word") {
  Protocol p = parse_protocol(
      "protocol empty { state ONLY initial final ; }");
  CHECK(p.num_states() == 1);
  CHECK(p.transitions.empty());
  CHECK(oracle::dfa_accepts(p, {}));
  CHECK(validate(p).empty());
}

TEST_CASE("nondeterministic transition table is a parse error") {
  const char* text =
      "protocol nd {\n"
      "  mailbox in suspend ;\n"
      "  state S initial ;\n"
      "  state A ;\n"
      "  state B ;\n"
      "  S -> A on ?suspend ;\n"
      "  S -> B on ?suspend ;\n"
      "}\n";
  CHECK_THROWS_AS(parse_protocol(text), ParseError);
}

TEST_CASE("parse errors carry positions and name the problem") {
  CHECK_THROWS_AS(parse_protocol("protocol p { mailbox in a ; mailbox in a ; "
                                 "state S initial ; }"),
                  ParseError);
  CHECK_THROWS_AS(parse_protocol("protocol p { state S initial ; state S ; }"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_protocol("protocol p { mailbox in a ; state S initial ; "
                     "S -> T on ?a ; }"),
      ParseError);
  // Direction mismatch on the label.
  CHECK_THROWS_AS(
      parse_protocol("protocol p { mailbox in a ; state S initial ; "
                     "S -> S on !a ; }"),
      ParseError);
  // Two initial states.
  CHECK_THROWS_AS(
      parse_protocol("protocol p { state S initial ; state T initial ; }"),
      ParseError);
  // No initial state.
  CHECK_THROWS_AS(parse_protocol("protocol p { state S ; }"), ParseError);
  try {
    parse_protocol("protocol p {\n  mailbox in a\n}");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 3);
  }
}

TEST_CASE("validate flags fair states without incoming transitions") {
  Protocol p = parse_protocol(
      "protocol p {\n"
      "  mailbox out done ;\n"
      "  state S initial fair ;\n"
      "  state T ;\n"
      "  S -> T on !done ;\n"
      "}");
  auto diags = validate(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::Error);
  CHECK(diags[0].message.find("fair") != std::string::npos);
}

TEST_CASE("validate accepts power_mgmt with no diagnostics") {
  CHECK(validate(load_power_mgmt()).empty());
}

TEST_CASE("validate warns about unreachable states") {
  Protocol p = parse_protocol(
      "protocol p {\n"
      "  state S initial ;\n"
      "  state ORPHAN ;\n"
      "}");
  auto diags = validate(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Severity::Warning);
  CHECK(diags[0].message.find("ORPHAN") != std::string::npos);
}

TEST_CASE("enabled sets match the documented fixture values") {
  Protocol p = load_power_mgmt();
  CHECK(enabled_names(p, p.state_index("SUSPENDED"), Direction::In) ==
        std::set<std::string>{"resume", "unplug"});
  CHECK(enabled_names(p, p.state_index("UNPLUGGED"), Direction::In).empty());
  CHECK(enabled_names(p, p.state_index("UNPLUGGED"), Direction::Out).empty());
  CHECK(enabled_names(p, p.state_index("RUNNING"), Direction::In) ==
        std::set<std::string>{"suspend", "unplug"});
}

TEST_CASE("step follows the fixture transition table and rejects elsewhere") {
  Protocol p = load_power_mgmt();
  int suspend = p.mailbox_index("suspend");
  int suspend_complete = p.mailbox_index("suspend_complete");
  StateId running = p.state_index("RUNNING");
  StateId suspending = p.state_index("SUSPENDING");
  StateId suspended = p.state_index("SUSPENDED");

  CHECK(p.step(running, suspend) == suspending);
  CHECK(p.step(suspended, suspend_complete) == kReject);
  // Composition over an accepted prefix stays defined.
  StateId s = p.step(running, suspend);
  s = p.step(s, suspend_complete);
  CHECK(s == suspended);
}

TEST_CASE("unknown states are rejected explicitly") {
  Protocol p = load_power_mgmt();
  CHECK_THROWS_AS(p.enabled(99, Direction::In), std::out_of_range);
  CHECK_THROWS_AS(p.step(-2, 0), std::out_of_range);
}

TEST_CASE("step never invents states") {
  Protocol p = load_power_mgmt();
  for (StateId s = 0; s < p.num_states(); ++s) {
    for (std::size_t m = 0; m < p.mailboxes.size(); ++m) {
      StateId to = p.step(s, static_cast<int>(m));
      CHECK(to >= kReject);
      CHECK(to < p.num_states());
    }
  }
}

TEST_CASE("deterministic acceptor agrees with naive NFA simulation") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 60; ++round) {
    Protocol p = oracle::random_protocol(rng, "rnd");
    int alphabet = static_cast<int>(p.mailboxes.size());
    for (int w = 0; w < 50; ++w) {
      std::vector<int> word;
      int len = static_cast<int>(rng() % 8);
      for (int i = 0; i < len; ++i) {
        word.push_back(static_cast<int>(rng() % alphabet));
      }
      CHECK(oracle::dfa_accepts(p, word) == oracle::nfa_accepts(p, word));
    }
  }
}

TEST_CASE("print/parse round trip is structural identity") {
  Protocol p = load_power_mgmt();
  CHECK(parse_protocol(print_protocol(p)) == p);

  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    Protocol q = oracle::random_protocol(rng, "roundtrip");
    CHECK(parse_protocol(print_protocol(q)) == q);
  }
}

TEST_CASE("protocol sets reject duplicate mailboxes unless synchronized") {
  Protocol a = parse_protocol(
      "protocol a { mailbox in m ; state S initial ; S -> S on ?m ; }");
  Protocol b = parse_protocol(
      "protocol b { mailbox in m ; state T initial ; T -> T on ?m ; }");
  CHECK_THROWS_AS(make_protocol_set({a, b}), ParseError);
  ProtocolSet set = make_protocol_set({a, b}, true);
  CHECK(set.mailboxes.size() == 1);
  CHECK(set.mailboxes[0].bindings.size() == 2);

  // Synchronized stepping requires every declaring protocol to accept.
  auto states = set.initial_states();
  CHECK(set.step(states, 0));
  Protocol c = parse_protocol(
      "protocol c { mailbox in m ; state U initial ; state V ; "
      "U -> V on ?m ; }");
  ProtocolSet set2 = make_protocol_set({a, c}, true);
  auto st2 = set2.initial_states();
  CHECK(set2.step(st2, 0));   // U -> V, a self-loops
  CHECK_FALSE(set2.step(st2, 0));  // V has no ?m: rejected
}
