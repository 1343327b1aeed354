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

#include "actdrv/protocol.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "actdrv/lexer.hpp"

namespace actdrv {

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.severity == Severity::Error ? "error" : "warning");
  if (d.loc.line > 0) os << " (line " << d.loc.line << ":" << d.loc.col << ")";
  os << ": " << d.message;
  return os.str();
}

int Protocol::mailbox_index(std::string_view mbox_name) const {
  for (std::size_t i = 0; i < mailboxes.size(); ++i) {
    if (mailboxes[i].name == mbox_name) return static_cast<int>(i);
  }
  return -1;
}

StateId Protocol::state_index(std::string_view st_name) const {
  for (std::size_t i = 0; i < state_names.size(); ++i) {
    if (state_names[i] == st_name) return static_cast<StateId>(i);
  }
  return kReject;
}

namespace {

void check_state(const Protocol& p, StateId s) {
  if (s < 0 || s >= p.num_states()) {
    throw std::out_of_range("protocol '" + p.name + "' has no state " +
                            std::to_string(s));
  }
}

}  // namespace

StateId Protocol::step(StateId s, int mailbox) const {
  check_state(*this, s);
  for (const auto& t : transitions) {
    if (t.from == s && t.mailbox == mailbox) return t.to;
  }
  return kReject;
}

std::vector<int> Protocol::enabled(StateId s, Direction dir) const {
  check_state(*this, s);
  std::vector<int> out;
  for (const auto& t : transitions) {
    if (t.from != s || mailboxes[t.mailbox].direction != dir) continue;
    if (std::find(out.begin(), out.end(), t.mailbox) == out.end()) {
      out.push_back(t.mailbox);
    }
  }
  return out;
}

std::vector<int> Protocol::fairness_enabled(StateId s) const {
  check_state(*this, s);
  std::vector<int> out;
  for (const auto& t : transitions) {
    if (t.from != s || t.from_completion) continue;
    if (mailboxes[t.mailbox].direction != Direction::In) continue;
    if (std::find(out.begin(), out.end(), t.mailbox) == out.end()) {
      out.push_back(t.mailbox);
    }
  }
  return out;
}

namespace {

void check_determinism(const Protocol& p, SourceLoc loc) {
  std::map<std::pair<StateId, int>, int> seen;
  for (const auto& t : p.transitions) {
    auto key = std::make_pair(t.from, t.mailbox);
    auto [it, inserted] = seen.emplace(key, t.to);
    if (!inserted) {
      const auto& mb = p.mailboxes[t.mailbox];
      throw ParseError("nondeterministic protocol: state '" +
                           p.state_names[t.from] + "' has two transitions on " +
                           direction_symbol(mb.direction) + mb.name,
                       loc);
    }
  }
}

}  // namespace

Protocol parse_protocol(std::string_view text) {
  Lexer lex(text);
  Protocol p;
  lex.expect_keyword("protocol");
  p.name = lex.expect_ident().text;
  lex.expect("{");

  bool saw_initial = false;
  while (!lex.accept("}")) {
    Token head = lex.expect_ident();
    if (head.text == "mailbox") {
      Token dir_tok = lex.expect_ident();
      Direction dir;
      if (dir_tok.text == "in") {
        dir = Direction::In;
      } else if (dir_tok.text == "out") {
        dir = Direction::Out;
      } else {
        throw ParseError("mailbox direction must be 'in' or 'out'",
                         dir_tok.loc);
      }
      Token name_tok = lex.expect_ident();
      if (p.mailbox_index(name_tok.text) >= 0) {
        throw ParseError("duplicate mailbox '" + name_tok.text + "'",
                         name_tok.loc);
      }
      p.mailboxes.push_back({name_tok.text, dir});
      lex.expect(";");
    } else if (head.text == "state") {
      Token name_tok = lex.expect_ident();
      if (p.state_index(name_tok.text) != kReject) {
        throw ParseError("duplicate state '" + name_tok.text + "'",
                         name_tok.loc);
      }
      p.state_names.push_back(name_tok.text);
      p.is_final.push_back(0);
      p.is_fair.push_back(0);
      p.is_timed.push_back(0);
      StateId id = p.num_states() - 1;
      while (lex.peek().kind == TokKind::Ident) {
        Token attr = lex.next();
        if (attr.text == "initial") {
          if (saw_initial) {
            throw ParseError("protocol already has an initial state",
                             attr.loc);
          }
          saw_initial = true;
          p.initial = id;
        } else if (attr.text == "final") {
          p.is_final[id] = 1;
        } else if (attr.text == "fair") {
          p.is_fair[id] = 1;
        } else if (attr.text == "timed") {
          p.is_timed[id] = 1;
        } else {
          throw ParseError("unknown state attribute '" + attr.text + "'",
                           attr.loc);
        }
      }
      lex.expect(";");
    } else {
      // transition: <state> -> <state> on ?m|!m ;
      StateId from = p.state_index(head.text);
      if (from == kReject) {
        throw ParseError("unknown state '" + head.text + "' in transition",
                         head.loc);
      }
      lex.expect("->");
      Token to_tok = lex.expect_ident();
      StateId to = p.state_index(to_tok.text);
      if (to == kReject) {
        throw ParseError("unknown state '" + to_tok.text + "' in transition",
                         to_tok.loc);
      }
      lex.expect_keyword("on");
      Direction dir;
      if (lex.accept("?")) {
        dir = Direction::In;
      } else if (lex.accept("!")) {
        dir = Direction::Out;
      } else {
        throw ParseError("transition label must start with '?' or '!'",
                         lex.peek().loc);
      }
      Token mb_tok = lex.expect_ident();
      int mb = p.mailbox_index(mb_tok.text);
      if (mb < 0) {
        throw ParseError("unknown mailbox '" + mb_tok.text + "'", mb_tok.loc);
      }
      if (p.mailboxes[mb].direction != dir) {
        throw ParseError(
            std::string("mailbox '") + mb_tok.text + "' is declared '" +
                (p.mailboxes[mb].direction == Direction::In ? "in" : "out") +
                "' but used with '" + direction_symbol(dir) + "'",
            mb_tok.loc);
      }
      p.transitions.push_back({from, mb, to, false});
      lex.expect(";");
    }
  }
  if (!lex.at_end()) {
    throw ParseError("trailing input after protocol body", lex.peek().loc);
  }
  if (!saw_initial) {
    throw ParseError("protocol has no initial state", SourceLoc{});
  }
  check_determinism(p, SourceLoc{});
  return p;
}

std::string print_protocol(const Protocol& p) {
  std::ostringstream os;
  os << "protocol " << p.name << " {\n";
  for (const auto& mb : p.mailboxes) {
    os << "  mailbox " << (mb.direction == Direction::In ? "in" : "out") << " "
       << mb.name << " ;\n";
  }
  for (StateId s = 0; s < p.num_states(); ++s) {
    os << "  state " << p.state_names[s];
    if (s == p.initial) os << " initial";
    if (p.is_final[s]) os << " final";
    if (p.is_fair[s]) os << " fair";
    if (p.is_timed[s]) os << " timed";
    os << " ;\n";
  }
  for (const auto& t : p.transitions) {
    const auto& mb = p.mailboxes[t.mailbox];
    os << "  " << p.state_names[t.from] << " -> " << p.state_names[t.to]
       << " on " << direction_symbol(mb.direction) << mb.name << " ;\n";
  }
  os << "}\n";
  return os.str();
}

std::vector<Diagnostic> validate(const Protocol& p) {
  std::vector<Diagnostic> diags;
  auto error = [&](std::string msg) {
    diags.push_back({Severity::Error, std::move(msg), SourceLoc{}});
  };
  auto warn = [&](std::string msg) {
    diags.push_back({Severity::Warning, std::move(msg), SourceLoc{}});
  };

  int n = p.num_states();
  if (p.initial < 0 || p.initial >= n) {
    error("initial state out of range");
    return diags;
  }
  if (static_cast<int>(p.is_final.size()) != n ||
      static_cast<int>(p.is_fair.size()) != n ||
      static_cast<int>(p.is_timed.size()) != n) {
    error("state annotation vectors do not match the state count");
    return diags;
  }
  for (std::size_t i = 0; i < p.mailboxes.size(); ++i) {
    for (std::size_t j = i + 1; j < p.mailboxes.size(); ++j) {
      if (p.mailboxes[i].name == p.mailboxes[j].name) {
        error("duplicate mailbox '" + p.mailboxes[i].name + "'");
      }
    }
  }
  for (const auto& t : p.transitions) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n) {
      error("transition references a state outside the protocol");
      return diags;
    }
    if (t.mailbox < 0 || t.mailbox >= static_cast<int>(p.mailboxes.size())) {
      error("transition references an undeclared mailbox");
      return diags;
    }
  }

  // Determinism: per (state, label) at most one successor.
  std::map<std::pair<StateId, int>, int> seen;
  for (const auto& t : p.transitions) {
    auto [it, inserted] = seen.emplace(std::make_pair(t.from, t.mailbox), t.to);
    if (!inserted && it->second != t.to) {
      const auto& mb = p.mailboxes[t.mailbox];
      error("nondeterministic: state '" + p.state_names[t.from] +
            "' has two transitions on " + direction_symbol(mb.direction) +
            mb.name);
    }
  }

  // A fair state promises that one of its enabled incoming messages will
  // eventually arrive; with no incoming transitions the promise is vacuous,
  // so we reject it.
  for (StateId s = 0; s < n; ++s) {
    if (p.is_fair[s] && p.enabled(s, Direction::In).empty()) {
      error("fair state '" + p.state_names[s] +
            "' has no incoming transitions");
    }
  }

  // Reachability from the initial state (warning only).
  std::vector<char> reach(n, 0);
  std::vector<StateId> stack{p.initial};
  reach[p.initial] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& t : p.transitions) {
      if (t.from == s && !reach[t.to]) {
        reach[t.to] = 1;
        stack.push_back(t.to);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (!reach[s]) {
      warn("state '" + p.state_names[s] + "' is unreachable from '" +
           p.state_names[p.initial] + "'");
    }
  }
  return diags;
}

int ProtocolSet::mailbox_index(std::string_view mbox_name) const {
  for (std::size_t i = 0; i < mailboxes.size(); ++i) {
    if (mailboxes[i].name == mbox_name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<StateId> ProtocolSet::initial_states() const {
  std::vector<StateId> out;
  out.reserve(protocols.size());
  for (const auto& p : protocols) out.push_back(p.initial);
  return out;
}

bool ProtocolSet::deliverable(const std::vector<StateId>& pstates,
                              int gmbox) const {
  for (auto [pi, li] : mailboxes[gmbox].bindings) {
    if (protocols[pi].step(pstates[pi], li) == kReject) return false;
  }
  return true;
}

bool ProtocolSet::step(std::vector<StateId>& pstates, int gmbox) const {
  std::vector<std::pair<int, StateId>> next;
  for (auto [pi, li] : mailboxes[gmbox].bindings) {
    StateId to = protocols[pi].step(pstates[pi], li);
    if (to == kReject) return false;
    next.emplace_back(pi, to);
  }
  for (auto [pi, to] : next) pstates[pi] = to;
  return true;
}

bool ProtocolSet::all_final(const std::vector<StateId>& pstates) const {
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    if (!protocols[i].is_final[pstates[i]]) return false;
  }
  return true;
}

std::string ProtocolSet::state_vector_string(
    const std::vector<StateId>& pstates) const {
  std::string out;
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    if (i > 0) out += ",";
    out += protocols[i].state_names[pstates[i]];
  }
  return out;
}

ProtocolSet make_protocol_set(std::vector<Protocol> protocols,
                              bool allow_overlap) {
  ProtocolSet set;
  set.protocols = std::move(protocols);
  for (std::size_t pi = 0; pi < set.protocols.size(); ++pi) {
    const Protocol& p = set.protocols[pi];
    for (std::size_t li = 0; li < p.mailboxes.size(); ++li) {
      const Mailbox& mb = p.mailboxes[li];
      int g = set.mailbox_index(mb.name);
      if (g < 0) {
        set.mailboxes.push_back({mb.name, mb.direction, {}});
        g = static_cast<int>(set.mailboxes.size()) - 1;
      } else {
        if (!allow_overlap) {
          throw ParseError("mailbox '" + mb.name +
                               "' declared by more than one protocol",
                           SourceLoc{});
        }
        if (set.mailboxes[g].direction != mb.direction) {
          throw ParseError("mailbox '" + mb.name +
                               "' declared with conflicting directions",
                           SourceLoc{});
        }
      }
      set.mailboxes[g].bindings.emplace_back(static_cast<int>(pi),
                                             static_cast<int>(li));
    }
  }
  return set;
}

}  // namespace actdrv
