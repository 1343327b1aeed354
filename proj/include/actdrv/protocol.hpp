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

#ifndef ACTDRV_PROTOCOL_HPP_
#define ACTDRV_PROTOCOL_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "actdrv/diag.hpp"

namespace actdrv {

// A driver interface protocol: a deterministic finite state machine over
// directed mailbox labels. `?m` is a receive on an IN mailbox (OS to
// driver), `!m` a send on an OUT mailbox (driver to OS). States may be
// annotated final, fair, or timed. Immutable after construction; safe to
// share across threads.

enum class Direction { In, Out };

inline char direction_symbol(Direction d) {
  return d == Direction::In ? '?' : '!';
}

struct Mailbox {
  std::string name;
  Direction direction = Direction::In;

  bool operator==(const Mailbox&) const = default;
};

using StateId = int;
inline constexpr StateId kReject = -1;

struct Transition {
  StateId from = 0;
  int mailbox = 0;  // index into Protocol::mailboxes
  StateId to = 0;
  // Set on self-loops inserted by decomposition completion. Such
  // transitions accept the message but do not count as protocol
  // obligations: fairness_enabled() skips them.
  bool from_completion = false;

  bool operator==(const Transition&) const = default;
};

struct Protocol {
  std::string name;
  std::vector<Mailbox> mailboxes;
  std::vector<std::string> state_names;
  StateId initial = 0;
  std::vector<char> is_final;
  std::vector<char> is_fair;
  std::vector<char> is_timed;
  std::vector<Transition> transitions;  // declaration order

  int num_states() const { return static_cast<int>(state_names.size()); }

  int mailbox_index(std::string_view mbox_name) const;
  StateId state_index(std::string_view st_name) const;

  /// Deterministic successor of `s` on mailbox `mailbox`, or kReject when
  /// no transition matches. Never invents states.
  StateId step(StateId s, int mailbox) const;

  /// Mailboxes with a transition out of `s` in the given direction
  /// (declaration order). Includes completion self-loops.
  std::vector<int> enabled(StateId s, Direction dir) const;

  /// IN mailboxes enabled in `s`, excluding completion self-loops. This is
  /// the obligation set a fair state imposes on AWAIT coverage.
  std::vector<int> fairness_enabled(StateId s) const;

  bool operator==(const Protocol&) const = default;
};

/// Parses one protocol definition. Total and deterministic: any input
/// yields either a structurally valid Protocol or a ParseError with a
/// position. Nondeterministic transition tables are rejected here.
Protocol parse_protocol(std::string_view text);

/// Stable pretty-printer: mailboxes, states, transitions in declaration
/// order. parse_protocol(print_protocol(p)) == p.
std::string print_protocol(const Protocol& p);

/// Structural invariant check. Empty result iff the protocol is well
/// formed; unreachable states produce warnings, everything else errors.
std::vector<Diagnostic> validate(const Protocol& p);

// The set of protocols attached to one driver. Mailbox names are normally
// required to be disjoint across protocols; a synchronized set (used when
// checking a driver against the completed parts of a decomposition)
// permits shared names, and every protocol declaring a mailbox must accept
// each event on it.
struct GlobalMailbox {
  std::string name;
  Direction direction = Direction::In;
  std::vector<std::pair<int, int>> bindings;  // (protocol index, local index)
};

struct ProtocolSet {
  std::vector<Protocol> protocols;
  std::vector<GlobalMailbox> mailboxes;

  int mailbox_index(std::string_view mbox_name) const;
  std::vector<StateId> initial_states() const;

  /// True when every protocol declaring the mailbox has a transition for
  /// it in its current state.
  bool deliverable(const std::vector<StateId>& pstates, int gmbox) const;

  /// Steps every declaring protocol; returns false (pstates untouched)
  /// when any of them rejects.
  bool step(std::vector<StateId>& pstates, int gmbox) const;

  bool all_final(const std::vector<StateId>& pstates) const;

  std::string state_vector_string(const std::vector<StateId>& pstates) const;
};

ProtocolSet make_protocol_set(std::vector<Protocol> protocols,
                              bool allow_overlap = false);

}  // namespace actdrv

#endif  // ACTDRV_PROTOCOL_HPP_
