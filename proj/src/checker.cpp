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

#include "actdrv/checker.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace actdrv {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Emit:
      return "EMIT";
    case Rule::Await1:
      return "AWAIT1";
    case Rule::Await2:
      return "AWAIT2";
    case Rule::Timed:
      return "TIMED";
    case Rule::Termination:
      return "TERMINATION";
  }
  return "?";
}

bool is_safety_rule(Rule r) {
  return r == Rule::Emit || r == Rule::Await2 || r == Rule::Termination;
}

const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Pass:
      return "PASS";
    case VerdictStatus::Fail:
      return "FAIL";
    case VerdictStatus::Blocked:
      return "BLOCKED";
  }
  return "?";
}

namespace {

struct StateHash {
  std::size_t operator()(const ProductState& s) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(s.node));
    for (int v : s.valuation) mix(static_cast<std::uint64_t>(v) + 0x9e37);
    for (StateId p : s.pstates) mix(static_cast<std::uint64_t>(p) + 0x51ed);
    return static_cast<std::size_t>(h);
  }
};

std::vector<int> build_mbox_map(const DriverCfg& cfg,
                                const ProtocolSet& protocols) {
  std::vector<int> map;
  map.reserve(cfg.protocols.mailboxes.size());
  for (const auto& mb : cfg.protocols.mailboxes) {
    int g = protocols.mailbox_index(mb.name);
    if (g < 0) {
      throw ParseError("protocol set does not declare mailbox '" + mb.name +
                           "' used by driver '" + cfg.name + "'",
                       SourceLoc{});
    }
    if (protocols.mailboxes[g].direction != mb.direction) {
      throw ParseError("mailbox '" + mb.name +
                           "' has conflicting directions between driver "
                           "binding and protocol set",
                       SourceLoc{});
    }
    map.push_back(g);
  }
  return map;
}

/// True when the message is a real obligation of some protocol in the
/// current state: an incoming transition that is not a completion
/// self-loop.
bool obligation_enabled(const ProtocolSet& set,
                        const std::vector<StateId>& pstates, int gmbox) {
  for (auto [pi, li] : set.mailboxes[gmbox].bindings) {
    const Protocol& p = set.protocols[pi];
    if (p.mailboxes[li].direction != Direction::In) continue;
    for (const auto& t : p.transitions) {
      if (t.from == pstates[pi] && t.mailbox == li && !t.from_completion) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::size_t ProductGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

std::vector<int> ProductGraph::await_set_ids(int node) const {
  std::vector<int> out;
  for (int m : cfg->nodes[node].await_set) out.push_back(mbox_map[m]);
  return out;
}

bool await_fairness_satisfied(const ProtocolSet& set,
                              const std::vector<StateId>& pstates,
                              const std::vector<int>& awaited) {
  for (std::size_t pi = 0; pi < set.protocols.size(); ++pi) {
    const Protocol& p = set.protocols[pi];
    if (!p.is_fair[pstates[pi]]) continue;
    bool covered = true;
    for (int li : p.fairness_enabled(pstates[pi])) {
      int g = set.mailbox_index(p.mailboxes[li].name);
      if (std::find(awaited.begin(), awaited.end(), g) == awaited.end()) {
        covered = false;
        break;
      }
    }
    if (covered) return true;
  }
  return false;
}

ProductGraph build_product(const DriverCfg& cfg, const ProtocolSet& protocols,
                           const CheckOptions& opts) {
  ProductGraph g;
  g.cfg = &cfg;
  g.protocols = &protocols;
  g.mbox_map = build_mbox_map(cfg, protocols);

  std::unordered_map<ProductState, int, StateHash> index;
  auto intern = [&](ProductState s, int from, int event) -> int {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (g.states.size() >= opts.max_product_states) {
      std::ostringstream os;
      os << "product state budget exceeded for driver '" << cfg.name
         << "': " << g.states.size() << " states explored, "
         << g.num_edges() << " edges, frontier at depth "
         << (from >= 0 ? g.depth[from] : 0);
      throw ResourceLimitError(os.str(), opts.max_product_states,
                               g.states.size() + 1);
    }
    int id = static_cast<int>(g.states.size());
    index.emplace(s, id);
    g.states.push_back(std::move(s));
    g.edges.emplace_back();
    g.depth.push_back(from >= 0 ? g.depth[from] + 1 : 0);
    g.parent.push_back(from);
    g.parent_event.push_back(event);
    return id;
  };

  ProductState init{cfg.entry, cfg.initial_valuation(),
                    protocols.initial_states()};
  intern(std::move(init), -1, -1);

  for (std::size_t i = 0; i < g.states.size(); ++i) {
    // Copies: intern() may reallocate g.states.
    const ProductState cur = g.states[i];
    const CfgNode& node = cfg.nodes[cur.node];
    auto link = [&](ProductState next, int event) {
      int j = intern(std::move(next), static_cast<int>(i), event);
      g.edges[i].push_back({j, event});
    };
    switch (node.kind) {
      case NodeKind::Assign: {
        ProductState next = cur;
        next.node = node.succ;
        if (node.var >= 0) {
          next.valuation[node.var] =
              node.expr ? (eval_expr(*node.expr, cur.valuation) ? 1 : 0)
                        : node.value;
        }
        link(std::move(next), -1);
        break;
      }
      case NodeKind::Branch: {
        if (node.expr) {
          ProductState next = cur;
          next.node = eval_expr(*node.expr, cur.valuation) ? node.succ_true
                                                           : node.succ_false;
          link(std::move(next), -1);
        } else {
          ProductState t = cur;
          t.node = node.succ_true;
          link(std::move(t), -1);
          ProductState f = cur;
          f.node = node.succ_false;
          link(std::move(f), -1);
        }
        break;
      }
      case NodeKind::Emit: {
        int m = g.mbox_map[node.mailbox];
        ProductState next = cur;
        next.node = node.succ;
        if (!protocols.step(next.pstates, m)) {
          g.emit_rejects.push_back({static_cast<int>(i), m});
          break;
        }
        link(std::move(next), m);
        break;
      }
      case NodeKind::Await: {
        for (int m_cfg : node.await_set) {
          int m = g.mbox_map[m_cfg];
          ProductState next = cur;
          next.node = node.succ;
          if (!protocols.step(next.pstates, m)) continue;
          next.valuation[node.var] = m_cfg + 1;
          link(std::move(next), m);
        }
        break;
      }
      case NodeKind::Return:
        break;
    }
  }
  return g;
}

namespace {

std::vector<TraceStep> path_to(const ProductGraph& g, int target) {
  std::vector<TraceStep> steps;
  for (int s = target; g.parent[s] >= 0; s = g.parent[s]) {
    steps.push_back(
        {g.states[s].node, g.parent_event[s], g.states[s].pstates});
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

std::string event_string(const ProtocolSet& set, int gmbox) {
  const auto& mb = set.mailboxes[gmbox];
  return std::string(1, direction_symbol(mb.direction)) + mb.name;
}

// Iterative Tarjan over the product graph restricted to `mask`. Returns
// the SCC id of every kept state (-1 for excluded ones); ids are assigned
// in a fixed order, so the whole analysis is deterministic.
std::vector<int> masked_sccs(const ProductGraph& g,
                             const std::vector<char>& mask, int* scc_count) {
  int n = static_cast<int>(g.states.size());
  std::vector<int> scc(n, -1), low(n, -1), disc(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int timer = 0, count = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (!mask[root] || disc[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    disc[root] = low[root] = timer++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < g.edges[f.v].size()) {
        int w = g.edges[f.v][f.edge++].to;
        if (!mask[w]) continue;
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        int v = f.v;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
        if (low[v] == disc[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            scc[w] = count;
            if (w == v) break;
          }
          ++count;
        }
      }
    }
  }
  *scc_count = count;
  return scc;
}

struct CycleWitness {
  int entry;                // state index the cycle passes through
  std::vector<int> states;  // entry, ..., entry (closed walk)
};

// Finds a deterministic reachable cycle within the masked subgraph: the
// cycle through the smallest-index state that lies on one, closed by the
// shortest path back to it.
std::optional<CycleWitness> find_masked_cycle(const ProductGraph& g,
                                              const std::vector<char>& mask) {
  int n = static_cast<int>(g.states.size());
  int scc_count = 0;
  std::vector<int> scc = masked_sccs(g, mask, &scc_count);
  std::vector<int> scc_size(scc_count, 0);
  for (int v = 0; v < n; ++v) {
    if (scc[v] >= 0) ++scc_size[scc[v]];
  }

  int entry = -1;
  for (int v = 0; v < n; ++v) {
    if (scc[v] < 0) continue;
    bool in_cycle = scc_size[scc[v]] > 1;
    if (!in_cycle) {
      for (const auto& e : g.edges[v]) {
        if (e.to == v && mask[v]) in_cycle = true;
      }
    }
    if (in_cycle) {
      entry = v;
      break;
    }
  }
  if (entry < 0) return std::nullopt;

  // Shortest path from a successor of `entry` back to it, staying inside
  // the mask (the SCC guarantees one exists).
  std::vector<int> pred(n, -2);
  std::deque<int> queue;
  for (const auto& e : g.edges[entry]) {
    if (!mask[e.to]) continue;
    if (e.to == entry) {
      return CycleWitness{entry, {entry, entry}};
    }
    if (pred[e.to] == -2) {
      pred[e.to] = entry;
      queue.push_back(e.to);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const auto& e : g.edges[v]) {
      if (!mask[e.to]) continue;
      if (e.to == entry) {
        std::vector<int> walk{entry};
        std::vector<int> back;
        for (int s = v; s != entry; s = pred[s]) back.push_back(s);
        std::reverse(back.begin(), back.end());
        walk.insert(walk.end(), back.begin(), back.end());
        walk.push_back(entry);
        return CycleWitness{entry, walk};
      }
      if (pred[e.to] == -2) {
        pred[e.to] = v;
        queue.push_back(e.to);
      }
    }
  }
  return std::nullopt;  // entry's cycle ran through excluded states
}

int edge_event(const ProductGraph& g, int from, int to) {
  for (const auto& e : g.edges[from]) {
    if (e.to == to) return e.event_mailbox;
  }
  return -1;
}

CounterexampleTrace lasso_trace(const ProductGraph& g,
                                const CycleWitness& cyc) {
  CounterexampleTrace trace;
  trace.steps = path_to(g, cyc.entry);
  trace.lasso_start = static_cast<int>(trace.steps.size());
  for (std::size_t i = 0; i + 1 < cyc.states.size(); ++i) {
    int from = cyc.states[i];
    int to = cyc.states[i + 1];
    trace.steps.push_back({g.states[to].node, edge_event(g, from, to),
                           g.states[to].pstates});
  }
  return trace;
}

// Selection for safety violations: shortest trace first, then smallest
// CFG node id, then mailbox name.
template <typename It, typename Key>
It select_min(It begin, It end, Key key) {
  It best = begin;
  for (It it = std::next(begin); it != end; ++it) {
    if (key(*it) < key(*best)) best = it;
  }
  return best;
}

}  // namespace

Verdict check_emit(const ProductGraph& g) {
  Verdict v;
  v.rule = Rule::Emit;
  if (g.emit_rejects.empty()) {
    v.status = VerdictStatus::Pass;
    return v;
  }
  const auto& set = *g.protocols;
  auto best = select_min(
      g.emit_rejects.begin(), g.emit_rejects.end(), [&](const EmitReject& r) {
        return std::make_tuple(g.depth[r.state], g.states[r.state].node,
                               set.mailboxes[r.mailbox].name);
      });
  v.status = VerdictStatus::Fail;
  v.trace = CounterexampleTrace{path_to(g, best->state), -1};
  v.violation_node = g.states[best->state].node;
  v.violation_mailbox = best->mailbox;
  v.detail = "send " + event_string(set, best->mailbox) + " at node " +
             std::to_string(v.violation_node) + " rejected in protocol state " +
             set.state_vector_string(g.states[best->state].pstates);
  return v;
}

Verdict check_await2(const ProductGraph& g) {
  Verdict v;
  v.rule = Rule::Await2;
  const auto& set = *g.protocols;
  std::vector<int> violations;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const ProductState& s = g.states[i];
    if (g.cfg->nodes[s.node].kind != NodeKind::Await) continue;
    if (!await_fairness_satisfied(set, s.pstates, g.await_set_ids(s.node))) {
      violations.push_back(static_cast<int>(i));
    }
  }
  if (violations.empty()) {
    v.status = VerdictStatus::Pass;
    return v;
  }
  auto best = select_min(violations.begin(), violations.end(), [&](int s) {
    return std::make_pair(g.depth[s], g.states[s].node);
  });
  v.status = VerdictStatus::Fail;
  v.trace = CounterexampleTrace{path_to(g, *best), -1};
  v.violation_node = g.states[*best].node;
  v.detail = "await at node " + std::to_string(v.violation_node) +
             " has no fair protocol with all enabled incoming messages "
             "awaited (protocol state " +
             set.state_vector_string(g.states[*best].pstates) + ")";
  return v;
}

Verdict check_termination(const ProductGraph& g) {
  Verdict v;
  v.rule = Rule::Termination;
  const auto& set = *g.protocols;
  std::vector<int> violations;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const ProductState& s = g.states[i];
    if (g.cfg->nodes[s.node].kind != NodeKind::Return) continue;
    if (!set.all_final(s.pstates)) violations.push_back(static_cast<int>(i));
  }
  if (violations.empty()) {
    v.status = VerdictStatus::Pass;
    return v;
  }
  auto best = select_min(violations.begin(), violations.end(), [&](int s) {
    return std::make_pair(g.depth[s], g.states[s].node);
  });
  const ProductState& s = g.states[*best];
  int offending = -1;
  for (std::size_t pi = 0; pi < set.protocols.size(); ++pi) {
    if (!set.protocols[pi].is_final[s.pstates[pi]]) {
      offending = static_cast<int>(pi);
      break;
    }
  }
  v.status = VerdictStatus::Fail;
  v.trace = CounterexampleTrace{path_to(g, *best), -1};
  v.violation_node = s.node;
  v.violation_protocol = offending;
  v.detail = "driver returns with protocol '" +
             set.protocols[offending].name + "' in non-final state '" +
             set.protocols[offending]
                 .state_names[s.pstates[offending]] +
             "'";
  return v;
}

Verdict check_await1(const ProductGraph& g) {
  Verdict v;
  v.rule = Rule::Await1;
  const auto& set = *g.protocols;

  std::vector<int> in_mailboxes;
  for (std::size_t m = 0; m < set.mailboxes.size(); ++m) {
    if (set.mailboxes[m].direction == Direction::In) {
      in_mailboxes.push_back(static_cast<int>(m));
    }
  }
  std::sort(in_mailboxes.begin(), in_mailboxes.end(), [&](int a, int b) {
    return set.mailboxes[a].name < set.mailboxes[b].name;
  });

  for (int m : in_mailboxes) {
    std::vector<char> mask(g.states.size(), 0);
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      const ProductState& s = g.states[i];
      if (!obligation_enabled(set, s.pstates, m)) continue;
      if (g.cfg->nodes[s.node].kind == NodeKind::Await) {
        auto ids = g.await_set_ids(s.node);
        if (std::find(ids.begin(), ids.end(), m) != ids.end()) continue;
      }
      mask[i] = 1;
    }
    auto cyc = find_masked_cycle(g, mask);
    if (cyc) {
      v.status = VerdictStatus::Fail;
      v.trace = lasso_trace(g, *cyc);
      v.violation_mailbox = m;
      v.detail = "message ?" + set.mailboxes[m].name +
                 " stays enabled around a reachable cycle that never "
                 "awaits it";
      return v;
    }
  }
  v.status = VerdictStatus::Pass;
  return v;
}

Verdict check_timed(const ProductGraph& g) {
  Verdict v;
  v.rule = Rule::Timed;
  const auto& set = *g.protocols;
  for (std::size_t pi = 0; pi < set.protocols.size(); ++pi) {
    const Protocol& p = set.protocols[pi];
    std::vector<char> mask(g.states.size(), 0);
    for (std::size_t i = 0; i < g.states.size(); ++i) {
      mask[i] = p.is_timed[g.states[i].pstates[pi]] ? 1 : 0;
    }
    auto cyc = find_masked_cycle(g, mask);
    if (cyc) {
      v.status = VerdictStatus::Fail;
      v.trace = lasso_trace(g, *cyc);
      v.violation_protocol = static_cast<int>(pi);
      v.detail = "protocol '" + p.name +
                 "' stays inside timed states around a reachable cycle";
      return v;
    }
  }
  v.status = VerdictStatus::Pass;
  return v;
}

bool CheckReport::any_fail() const {
  return std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
    return v.status == VerdictStatus::Fail;
  });
}

const Verdict& CheckReport::verdict_for(Rule r) const {
  for (const auto& v : verdicts) {
    if (v.rule == r) return v;
  }
  throw std::logic_error("rule missing from report");
}

CheckReport check_all(const DriverCfg& cfg, const ProtocolSet& protocols,
                      const CheckOptions& opts) {
  ProductGraph g = build_product(cfg, protocols, opts);
  CheckReport report;
  report.product_states = g.states.size();
  report.product_edges = g.num_edges();

  report.verdicts.push_back(check_emit(g));
  report.verdicts.push_back(check_await2(g));
  report.verdicts.push_back(check_termination(g));

  bool safety_failed = report.any_fail();
  if (safety_failed) {
    for (Rule r : {Rule::Await1, Rule::Timed}) {
      Verdict v;
      v.rule = r;
      v.status = VerdictStatus::Blocked;
      v.detail = "liveness analysis assumes the safety rules hold";
      report.verdicts.push_back(std::move(v));
    }
  } else {
    report.verdicts.push_back(check_await1(g));
    report.verdicts.push_back(check_timed(g));
  }

  // Reorder to the canonical report order.
  std::vector<Rule> order{Rule::Emit, Rule::Await2, Rule::Termination,
                          Rule::Await1, Rule::Timed};
  std::vector<Verdict> sorted;
  for (Rule r : order) {
    for (auto& v : report.verdicts) {
      if (v.rule == r) sorted.push_back(std::move(v));
    }
  }
  report.verdicts = std::move(sorted);

  for (const auto& v : report.verdicts) {
    if (v.status == VerdictStatus::Fail &&
        !validate_trace(cfg, protocols, v)) {
      throw std::logic_error(std::string("internal error: ") + rule_name(v.rule) +
                             " counterexample failed replay validation");
    }
  }
  return report;
}

bool validate_trace(const DriverCfg& cfg, const ProtocolSet& protocols,
                    const Verdict& v) {
  if (!v.trace) return false;
  std::vector<int> mbox_map = build_mbox_map(cfg, protocols);

  ProductState config{cfg.entry, cfg.initial_valuation(),
                      protocols.initial_states()};
  std::vector<ProductState> visited{config};

  for (const TraceStep& step : v.trace->steps) {
    const CfgNode& node = cfg.nodes[config.node];
    switch (node.kind) {
      case NodeKind::Assign:
        if (step.dest_node != node.succ || step.event_mailbox != -1) {
          return false;
        }
        if (node.var >= 0) {
          config.valuation[node.var] =
              node.expr ? (eval_expr(*node.expr, config.valuation) ? 1 : 0)
                        : node.value;
        }
        config.node = node.succ;
        break;
      case NodeKind::Branch: {
        if (step.event_mailbox != -1) return false;
        if (node.expr) {
          int expect = eval_expr(*node.expr, config.valuation)
                           ? node.succ_true
                           : node.succ_false;
          if (step.dest_node != expect) return false;
        } else if (step.dest_node != node.succ_true &&
                   step.dest_node != node.succ_false) {
          return false;
        }
        config.node = step.dest_node;
        break;
      }
      case NodeKind::Emit: {
        int m = mbox_map[node.mailbox];
        if (step.dest_node != node.succ || step.event_mailbox != m) {
          return false;
        }
        if (!protocols.step(config.pstates, m)) return false;
        config.node = node.succ;
        break;
      }
      case NodeKind::Await: {
        int m = step.event_mailbox;
        if (m < 0 || step.dest_node != node.succ) return false;
        int m_cfg = -1;
        for (int c : node.await_set) {
          if (mbox_map[c] == m) m_cfg = c;
        }
        if (m_cfg < 0) return false;
        if (!protocols.step(config.pstates, m)) return false;
        config.valuation[node.var] = m_cfg + 1;
        config.node = node.succ;
        break;
      }
      case NodeKind::Return:
        return false;  // nothing follows a return
    }
    if (step.pstates_after != config.pstates) return false;
    visited.push_back(config);
  }

  switch (v.rule) {
    case Rule::Emit: {
      const CfgNode& node = cfg.nodes[config.node];
      if (node.kind != NodeKind::Emit || config.node != v.violation_node) {
        return false;
      }
      std::vector<StateId> copy = config.pstates;
      return mbox_map[node.mailbox] == v.violation_mailbox &&
             !protocols.step(copy, v.violation_mailbox);
    }
    case Rule::Await2: {
      const CfgNode& node = cfg.nodes[config.node];
      if (node.kind != NodeKind::Await || config.node != v.violation_node) {
        return false;
      }
      std::vector<int> ids;
      for (int c : node.await_set) ids.push_back(mbox_map[c]);
      return !await_fairness_satisfied(protocols, config.pstates, ids);
    }
    case Rule::Termination:
      return cfg.nodes[config.node].kind == NodeKind::Return &&
             !protocols.all_final(config.pstates);
    case Rule::Await1:
    case Rule::Timed: {
      int start = v.trace->lasso_start;
      if (start < 0 ||
          start >= static_cast<int>(v.trace->steps.size()) + 1) {
        return false;
      }
      // visited[i] is the configuration entering steps[i]; recurrence
      // closes the cycle.
      if (!(visited[start] == visited.back())) return false;
      for (std::size_t i = static_cast<std::size_t>(start);
           i + 1 < visited.size(); ++i) {
        const ProductState& s = visited[i];
        if (v.rule == Rule::Timed) {
          const Protocol& p = protocols.protocols[v.violation_protocol];
          if (!p.is_timed[s.pstates[v.violation_protocol]]) return false;
        } else {
          if (!obligation_enabled(protocols, s.pstates, v.violation_mailbox)) {
            return false;
          }
          const CfgNode& node = cfg.nodes[s.node];
          if (node.kind == NodeKind::Await) {
            for (int c : node.await_set) {
              if (mbox_map[c] == v.violation_mailbox) return false;
            }
          }
        }
      }
      return true;
    }
  }
  return false;
}

}  // namespace actdrv
