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

#ifndef ACTDRV_DECOMPOSE_HPP_
#define ACTDRV_DECOMPOSE_HPP_

#include <string>
#include <vector>

#include "actdrv/protocol.hpp"

namespace actdrv {

// A candidate decomposition of a protocol into subprotocols. Each part
// speaks a subset of the parent alphabet; mailboxes it does not mention
// are unconstrained by it. A decomposition is correct when (1) the
// intersection of the completed parts' languages equals the parent
// language and (2) the parts' fair states biject with the parent's, with
// identical enabled incoming-message sets.

struct Decomposition {
  Protocol parent;
  std::vector<Protocol> parts;
};

/// Extends a part to the parent alphabet: absent mailboxes are adopted
/// (parent declaration order) and every state gains a self-loop for each
/// of them, marked from_completion. Throws on a direction conflict or a
/// part mailbox missing from the parent.
Protocol completion(const Protocol& part, const Protocol& parent);

enum class MismatchKind { Feasibility, Acceptance };

struct EquivResult {
  bool equiv = true;
  std::vector<int> distinguishing;  // parent mailbox indices
  MismatchKind kind = MismatchKind::Feasibility;
  bool parent_side = true;  // parent admits the string, the parts do not
};

struct EquivOptions {
  std::size_t max_pair_states = 1000000;
};

/// Decides language equality between the parent and the synchronous
/// product of completed parts: both the words each side can consume and
/// the words each side accepts (final states everywhere) must agree. On
/// inequality, returns the shortest distinguishing string, ties broken by
/// mailbox name. Throws ResourceLimitError when the pair-state budget is
/// exceeded.
EquivResult check_language_equiv(const Decomposition& d,
                                 const EquivOptions& opts = {});

struct FairPairing {
  StateId parent_state;
  int part;
  StateId part_state;
};

struct BijectionResult {
  bool ok = true;
  std::vector<FairPairing> pairs;
  std::vector<std::string> warnings;  // greedy pairing ambiguity
  std::string witness;                // unmatched fair state when !ok
};

/// Matches parent fair states against the disjoint union of the parts'
/// fair states by exact equality of enabled incoming-message sets (parts
/// as written, completion self-loops excluded).
BijectionResult check_fair_bijection(const Decomposition& d);

struct PartStats {
  std::string name;
  int states = 0;
  int transitions = 0;
};

struct DecompositionReport {
  EquivResult language;
  BijectionResult fairness;
  std::vector<PartStats> parts;

  bool ok() const { return language.equiv && fairness.ok; }
};

DecompositionReport check_decomposition(const Decomposition& d,
                                        const EquivOptions& opts = {});

std::string format_event_string(const Protocol& parent,
                                const std::vector<int>& events);

/// Loads a `.decomp` manifest: `parent <file>; part <file>; ...` with
/// paths relative to the manifest. Every referenced protocol must parse
/// and validate without errors.
Decomposition load_decomposition(const std::string& manifest_path);

}  // namespace actdrv

#endif  // ACTDRV_DECOMPOSE_HPP_
