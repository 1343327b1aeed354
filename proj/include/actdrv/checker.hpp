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

#ifndef ACTDRV_CHECKER_HPP_
#define ACTDRV_CHECKER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actdrv/cfg.hpp"
#include "actdrv/protocol.hpp"

namespace actdrv {

// Explicit-state checker for the five protocol-compliance rules over the
// product of a driver CFG and its protocol set. Protocol state advances
// inside EMIT (send) and AWAIT (receive); the checker explores every
// deliverable choice at an AWAIT and both arms of nondeterministic
// branches. Exploration order is fixed, so identical inputs give
// byte-identical reports.

enum class Rule { Emit, Await1, Await2, Timed, Termination };

const char* rule_name(Rule r);
bool is_safety_rule(Rule r);

enum class VerdictStatus { Pass, Fail, Blocked };

const char* verdict_status_name(VerdictStatus s);

struct TraceStep {
  int dest_node = -1;      // CFG node the step lands on
  int event_mailbox = -1;  // protocol-set mailbox id, -1 for internal steps
  std::vector<StateId> pstates_after;
};

struct CounterexampleTrace {
  std::vector<TraceStep> steps;
  // For liveness lassos: index into steps where the cycle begins. The
  // configuration after the last step equals the configuration entering
  // steps[lasso_start]. -1 for finite (safety) traces.
  int lasso_start = -1;
};

struct Verdict {
  Rule rule = Rule::Emit;
  VerdictStatus status = VerdictStatus::Pass;
  std::optional<CounterexampleTrace> trace;
  std::string detail;
  int violation_node = -1;
  int violation_mailbox = -1;   // Emit: rejected; Await1: ignored
  int violation_protocol = -1;  // Timed / Termination
};

struct ProductState {
  int node = 0;
  std::vector<int> valuation;
  std::vector<StateId> pstates;

  bool operator==(const ProductState&) const = default;
};

struct ProductEdge {
  int to = -1;
  int event_mailbox = -1;  // -1 = internal (NONE label)
};

struct EmitReject {
  int state = -1;
  int mailbox = -1;  // protocol-set id of the rejected send
};

struct ProductGraph {
  const DriverCfg* cfg = nullptr;
  const ProtocolSet* protocols = nullptr;
  // cfg-set mailbox id -> checking-set mailbox id (by name).
  std::vector<int> mbox_map;

  std::vector<ProductState> states;  // BFS discovery order; 0 = initial
  std::vector<std::vector<ProductEdge>> edges;
  std::vector<int> depth;
  std::vector<int> parent;        // BFS tree predecessor; -1 for initial
  std::vector<int> parent_event;  // event on the tree edge; -1 internal
  std::vector<EmitReject> emit_rejects;  // exploration stops at these

  std::size_t num_edges() const;

  /// Awaited mailboxes of an Await node, translated to checking-set ids
  /// and kept in name order.
  std::vector<int> await_set_ids(int node) const;
};

struct CheckOptions {
  std::size_t max_product_states = 1000000;
};

/// BFS of the reachable product configurations. A rejected EMIT is
/// recorded and that branch is not explored further; an AWAIT fans out one
/// successor per deliverable awaited mailbox. Throws ResourceLimitError
/// when the state budget is exceeded.
ProductGraph build_product(const DriverCfg& cfg, const ProtocolSet& protocols,
                           const CheckOptions& opts = {});

/// Rule 1: every send the driver performs must be accepted by the
/// protocols. FAIL iff a rejected send is reachable.
Verdict check_emit(const ProductGraph& g);

/// Rule 3: every AWAIT must happen with at least one protocol in a fair
/// state whose enabled incoming messages are all awaited.
Verdict check_await2(const ProductGraph& g);

/// Rule 5: if the driver returns, every protocol must be in a final state.
Verdict check_termination(const ProductGraph& g);

/// Rule 2: no reachable cycle may keep an incoming message enabled at
/// every state without ever awaiting it on the cycle.
Verdict check_await1(const ProductGraph& g);

/// Rule 4: no reachable cycle may keep a protocol inside timed states.
Verdict check_timed(const ProductGraph& g);

/// True when some protocol is in a fair state whose enabled incoming
/// obligations (completion self-loops excluded) are all in `awaited`
/// (protocol-set ids). Shared with the runtime monitor.
bool await_fairness_satisfied(const ProtocolSet& set,
                              const std::vector<StateId>& pstates,
                              const std::vector<int>& awaited);

struct CheckReport {
  std::vector<Verdict> verdicts;  // EMIT, AWAIT2, TERMINATION, AWAIT1, TIMED
  std::size_t product_states = 0;
  std::size_t product_edges = 0;

  bool any_fail() const;
  const Verdict& verdict_for(Rule r) const;
};

/// Runs all five checks. Liveness rules are reported BLOCKED when any
/// safety rule fails, since their cycle analysis assumes every explored
/// AWAIT returns. Every FAIL trace is replay-validated before the report
/// is returned.
CheckReport check_all(const DriverCfg& cfg, const ProtocolSet& protocols,
                      const CheckOptions& opts = {});

/// Replays a FAIL verdict's trace through the CFG and protocol steps and
/// confirms it reproduces the violation (including cycle recurrence for
/// lassos). Self-validation for every counterexample the checker emits.
bool validate_trace(const DriverCfg& cfg, const ProtocolSet& protocols,
                    const Verdict& v);

}  // namespace actdrv

#endif  // ACTDRV_CHECKER_HPP_
