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

#include "actdrv/decompose.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "actdrv/io.hpp"

namespace actdrv {

Protocol completion(const Protocol& part, const Protocol& parent) {
  Protocol out = part;
  std::vector<int> absent;
  for (const auto& mb : part.mailboxes) {
    int pm = parent.mailbox_index(mb.name);
    if (pm < 0) {
      throw ParseError("part '" + part.name + "' declares mailbox '" +
                           mb.name + "' missing from parent '" + parent.name +
                           "'",
                       SourceLoc{});
    }
    if (parent.mailboxes[pm].direction != mb.direction) {
      throw ParseError("mailbox '" + mb.name +
                           "' has conflicting directions between part '" +
                           part.name + "' and parent '" + parent.name + "'",
                       SourceLoc{});
    }
  }
  for (std::size_t pm = 0; pm < parent.mailboxes.size(); ++pm) {
    if (part.mailbox_index(parent.mailboxes[pm].name) < 0) {
      out.mailboxes.push_back(parent.mailboxes[pm]);
      absent.push_back(static_cast<int>(out.mailboxes.size()) - 1);
    }
  }
  for (StateId s = 0; s < out.num_states(); ++s) {
    for (int mb : absent) {
      out.transitions.push_back({s, mb, s, true});
    }
  }
  return out;
}

namespace {

struct PairState {
  StateId parent = kReject;      // kReject = the word is dead in the parent
  std::vector<StateId> parts;    // empty = dead in some part

  bool parts_alive() const { return !parts.empty(); }
  bool operator==(const PairState&) const = default;
};

struct PairHash {
  std::size_t operator()(const PairState& s) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(s.parent) + 7);
    for (StateId p : s.parts) mix(static_cast<std::uint64_t>(p) + 13);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

EquivResult check_language_equiv(const Decomposition& d,
                                 const EquivOptions& opts) {
  const Protocol& parent = d.parent;
  std::vector<Protocol> completed;
  completed.reserve(d.parts.size());
  for (const auto& part : d.parts) completed.push_back(completion(part, parent));

  // Per part: parent mailbox index -> part-local mailbox index.
  std::vector<std::vector<int>> local(completed.size());
  for (std::size_t k = 0; k < completed.size(); ++k) {
    local[k].reserve(parent.mailboxes.size());
    for (const auto& mb : parent.mailboxes) {
      local[k].push_back(completed[k].mailbox_index(mb.name));
    }
  }

  // Alphabet in name order: ties on string length break by name.
  std::vector<int> alphabet(parent.mailboxes.size());
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    alphabet[i] = static_cast<int>(i);
  }
  std::sort(alphabet.begin(), alphabet.end(), [&](int a, int b) {
    return parent.mailboxes[a].name < parent.mailboxes[b].name;
  });

  auto accepts_parent = [&](const PairState& s) {
    return s.parent != kReject && parent.is_final[s.parent];
  };
  auto accepts_parts = [&](const PairState& s) {
    if (!s.parts_alive()) return false;
    for (std::size_t k = 0; k < completed.size(); ++k) {
      if (!completed[k].is_final[s.parts[k]]) return false;
    }
    return true;
  };

  std::vector<PairState> states;
  std::vector<int> pred;
  std::vector<int> pred_event;
  std::unordered_map<PairState, int, PairHash> index;
  auto intern = [&](PairState s, int from, int event) {
    auto it = index.find(s);
    if (it != index.end()) return false;
    if (states.size() >= opts.max_pair_states) {
      throw ResourceLimitError(
          "pair-state budget exceeded while comparing '" + parent.name +
              "' against its decomposition",
          opts.max_pair_states, states.size() + 1);
    }
    index.emplace(s, static_cast<int>(states.size()));
    states.push_back(std::move(s));
    pred.push_back(from);
    pred_event.push_back(event);
    return true;
  };
  auto string_to = [&](int idx, int last_event) {
    std::vector<int> events{last_event};
    for (int s = idx; pred[s] >= 0; s = pred[s]) {
      events.push_back(pred_event[s]);
    }
    std::reverse(events.begin(), events.end());
    return events;
  };

  PairState init;
  init.parent = parent.initial;
  for (const auto& c : completed) init.parts.push_back(c.initial);
  if (d.parts.empty()) {
    // No parts: the intersection is the universal language over the
    // alphabet. Modelled by an always-alive, always-accepting side.
    init.parts.clear();
  }
  bool empty_parts = d.parts.empty();
  auto parts_dead = [&](const PairState& s) {
    return !empty_parts && !s.parts_alive();
  };
  auto parts_accept = [&](const PairState& s) {
    return empty_parts ? true : accepts_parts(s);
  };

  EquivResult result;
  if (accepts_parent(init) != parts_accept(init)) {
    result.equiv = false;
    result.distinguishing = {};
    result.kind = MismatchKind::Acceptance;
    result.parent_side = accepts_parent(init);
    return result;
  }
  intern(init, -1, -1);

  for (std::size_t i = 0; i < states.size(); ++i) {
    const PairState cur = states[i];
    for (int e : alphabet) {
      PairState next;
      next.parent = cur.parent == kReject
                        ? kReject
                        : parent.step(cur.parent, e);
      bool next_parts_dead = parts_dead(cur);
      if (!empty_parts && !next_parts_dead) {
        next.parts.reserve(completed.size());
        for (std::size_t k = 0; k < completed.size(); ++k) {
          StateId to = completed[k].step(cur.parts[k], local[k][e]);
          if (to == kReject) {
            next_parts_dead = true;
            next.parts.clear();
            break;
          }
          next.parts.push_back(to);
        }
      }
      bool parent_dead = next.parent == kReject;
      bool pd = empty_parts ? false : next_parts_dead;
      if (parent_dead && pd) continue;  // no extension can differ
      if (parent_dead != pd) {
        result.equiv = false;
        result.distinguishing = string_to(static_cast<int>(i), e);
        result.kind = MismatchKind::Feasibility;
        result.parent_side = !parent_dead;
        return result;
      }
      bool pa = accepts_parent(next);
      bool qa = pd ? false : parts_accept(next);
      if (!parent_dead && pa != qa) {
        result.equiv = false;
        result.distinguishing = string_to(static_cast<int>(i), e);
        result.kind = MismatchKind::Acceptance;
        result.parent_side = pa;
        return result;
      }
      intern(std::move(next), static_cast<int>(i), e);
    }
  }
  return result;
}

namespace {

std::vector<std::string> enabled_in_names(const Protocol& p, StateId s) {
  std::vector<std::string> names;
  for (int li : p.fairness_enabled(s)) names.push_back(p.mailboxes[li].name);
  std::sort(names.begin(), names.end());
  return names;
}

std::string name_set_string(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out + "}";
}

}  // namespace

BijectionResult check_fair_bijection(const Decomposition& d) {
  BijectionResult result;

  struct PartFair {
    int part;
    StateId state;
    std::vector<std::string> key;
    bool taken = false;
  };
  std::vector<PartFair> pool;
  for (std::size_t k = 0; k < d.parts.size(); ++k) {
    const Protocol& p = d.parts[k];
    for (StateId s = 0; s < p.num_states(); ++s) {
      if (p.is_fair[s]) {
        pool.push_back({static_cast<int>(k), s, enabled_in_names(p, s)});
      }
    }
  }

  std::set<std::vector<std::string>> warned;
  for (StateId s = 0; s < d.parent.num_states(); ++s) {
    if (!d.parent.is_fair[s]) continue;
    auto key = enabled_in_names(d.parent, s);
    int candidates = 0;
    PartFair* match = nullptr;
    for (auto& pf : pool) {
      if (!pf.taken && pf.key == key) {
        ++candidates;
        if (!match) match = &pf;
      }
    }
    if (!match) {
      result.ok = false;
      result.witness = d.parent.state_names[s];
      return result;
    }
    if (candidates > 1 && warned.insert(key).second) {
      result.warnings.push_back("ambiguous pairing for enabled set " +
                                name_set_string(key) + "; resolved greedily");
    }
    match->taken = true;
    result.pairs.push_back({s, match->part, match->state});
  }
  for (const auto& pf : pool) {
    if (!pf.taken) {
      result.ok = false;
      result.witness = d.parts[pf.part].name + "." +
                       d.parts[pf.part].state_names[pf.state];
      return result;
    }
  }
  return result;
}

DecompositionReport check_decomposition(const Decomposition& d,
                                        const EquivOptions& opts) {
  DecompositionReport report;
  report.language = check_language_equiv(d, opts);
  report.fairness = check_fair_bijection(d);
  for (const auto& part : d.parts) {
    report.parts.push_back({part.name, part.num_states(),
                            static_cast<int>(part.transitions.size())});
  }
  return report;
}

std::string format_event_string(const Protocol& parent,
                                const std::vector<int>& events) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) out += " ";
    const auto& mb = parent.mailboxes[events[i]];
    out += direction_symbol(mb.direction);
    out += mb.name;
  }
  return out;
}

Decomposition load_decomposition(const std::string& manifest_path) {
  std::string text = read_file(manifest_path);
  std::string dir;
  if (auto slash = manifest_path.find_last_of('/');
      slash != std::string::npos) {
    dir = manifest_path.substr(0, slash + 1);
  }

  // Line-oriented grammar: `parent <file>;` and `part <file>;`, comments
  // with `#`.
  std::vector<std::pair<std::string, std::string>> entries;
  std::string buf;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : ';';
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == ';') {
      std::istringstream is(buf);
      std::string kw, path;
      if (is >> kw) {
        if (!(is >> path) || kw.empty()) {
          throw ParseError("malformed manifest entry '" + buf + "'",
                           SourceLoc{});
        }
        entries.emplace_back(kw, path);
      }
      buf.clear();
      continue;
    }
    buf += c;
  }

  Decomposition d;
  bool have_parent = false;
  for (const auto& [kw, path] : entries) {
    std::string full = path.front() == '/' ? path : dir + path;
    if (kw == "parent") {
      if (have_parent) {
        throw ParseError("manifest declares more than one parent",
                         SourceLoc{});
      }
      d.parent = parse_protocol(read_file(full));
      have_parent = true;
    } else if (kw == "part") {
      d.parts.push_back(parse_protocol(read_file(full)));
    } else {
      throw ParseError("unknown manifest keyword '" + kw + "'", SourceLoc{});
    }
  }
  if (!have_parent) {
    throw ParseError("manifest declares no parent protocol", SourceLoc{});
  }
  auto check = [](const Protocol& p) {
    auto diags = validate(p);
    if (has_errors(diags)) {
      throw ParseError("protocol '" + p.name + "' failed validation: " +
                           diags.front().message,
                       SourceLoc{});
    }
  };
  check(d.parent);
  for (const auto& part : d.parts) check(part);
  return d;
}

}  // namespace actdrv
