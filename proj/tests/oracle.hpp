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

// Test-only reference implementations. Everything here is deliberately
// simple and independent of the production search machinery: the checker
// is validated against these, not the other way round.

#ifndef ACTDRV_TESTS_ORACLE_HPP_
#define ACTDRV_TESTS_ORACLE_HPP_

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "actdrv/cfg.hpp"
#include "actdrv/checker.hpp"
#include "actdrv/decompose.hpp"
#include "actdrv/driver_ast.hpp"
#include "actdrv/protocol.hpp"

namespace actdrv::oracle {

/// Naive nondeterministic simulation of the transition set (no
/// determinism assumption): steps a set of states per symbol.
bool nfa_accepts(const Protocol& p, const std::vector<int>& word);

/// Acceptance via the deterministic (initial, finals, step) view.
bool dfa_accepts(const Protocol& p, const std::vector<int>& word);

/// Feasibility via the deterministic view: the word never hits REJECT.
bool dfa_feasible(const Protocol& p, const std::vector<int>& word);

/// Breadth-first enumeration of words over the parent alphabet (name
/// order) up to max_len, pruning prefixes dead on both sides. Returns the
/// first word on which the parent and the completed-part intersection
/// disagree (feasibility or acceptance), or nullopt.
std::optional<std::vector<int>> enumerate_language_difference(
    const Decomposition& d, int max_len);

/// Event traces ("!m" / "?m") from directly interpreting the AST and from
/// walking the CFG, both resolving awaits and havoc branches with the
/// same seeded stream. "TIMEOUT" is appended when no event happens for a
/// long stretch (both interpreters are deterministic, so they time out
/// together or not at all).
std::vector<std::string> interpret_ast(const DriverProgram& prog,
                                       std::uint64_t seed,
                                       std::size_t max_events);
std::vector<std::string> interpret_cfg(const DriverCfg& cfg,
                                       std::uint64_t seed,
                                       std::size_t max_events);

/// Brute-force verdicts for the five rules: exhaustive configuration
/// exploration (recursive, visited set) plus per-obligation cycle
/// existence via DFS back-edges. Status only, no traces.
struct OracleVerdicts {
  bool emit_fail = false;
  bool await2_fail = false;
  bool termination_fail = false;
  bool await1_fail = false;
  bool timed_fail = false;
};

OracleVerdicts brute_force_verdicts(const DriverCfg& cfg,
                                    const ProtocolSet& protocols);

/// Random protocol over fresh state/mailbox names; always satisfies the
/// structural invariants (deterministic, fair states have an incoming
/// transition).
Protocol random_protocol(std::mt19937_64& rng, const std::string& name);

/// Random driver source over the given protocols' mailboxes.
std::string random_driver_text(std::mt19937_64& rng, const Protocol& p,
                               const std::string& name);
std::string random_driver_text(std::mt19937_64& rng,
                               const std::vector<Protocol>& protocols,
                               const std::string& name);

std::string fixture_path(const std::string& rel);

}  // namespace actdrv::oracle

#endif  // ACTDRV_TESTS_ORACLE_HPP_
