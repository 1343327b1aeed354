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

#include "actdrv/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <random>
#include <sstream>

namespace actdrv {

const char* sim_status_name(SimStatus s) {
  switch (s) {
    case SimStatus::Terminated:
      return "TERMINATED";
    case SimStatus::Inconclusive:
      return "INCONCLUSIVE";
    case SimStatus::Violation:
      return "VIOLATION";
  }
  return "?";
}

namespace {

struct QueuedMessage {
  std::uint64_t seq;
};

struct MailboxQueues {
  std::vector<std::deque<QueuedMessage>> queues;
  std::uint64_t next_seq = 0;

  explicit MailboxQueues(std::size_t n) : queues(n) {}

  void push(int mbox) { queues[mbox].push_back({next_seq++}); }
  bool empty(int mbox) const { return queues[mbox].empty(); }
  std::uint64_t front_seq(int mbox) const { return queues[mbox].front().seq; }
  void pop(int mbox) { queues[mbox].pop_front(); }
};

// States reachable from `view` by incoming transitions alone; while the
// driver is blocked this is everywhere the wrapper can take the protocol.
std::vector<char> in_closure(const Protocol& p, StateId from) {
  std::vector<char> reach(p.num_states(), 0);
  std::vector<StateId> work{from};
  reach[from] = 1;
  while (!work.empty()) {
    StateId s = work.back();
    work.pop_back();
    for (const auto& t : p.transitions) {
      if (t.from != s || reach[t.to]) continue;
      if (p.mailboxes[t.mailbox].direction != Direction::In) continue;
      reach[t.to] = 1;
      work.push_back(t.to);
    }
  }
  return reach;
}

class Simulation {
 public:
  Simulation(const DriverCfg& cfg, const ProtocolSet& set,
             const SimOptions& opts)
      : cfg_(cfg),
        set_(set),
        opts_(opts),
        rng_(opts.seed),
        queues_(set.mailboxes.size()),
        monitor_(set.initial_states()),
        wrapper_(set.initial_states()),
        node_(cfg.entry),
        valuation_(cfg.initial_valuation()) {
    mbox_map_.reserve(cfg.protocols.mailboxes.size());
    for (const auto& mb : cfg.protocols.mailboxes) {
      int g = set.mailbox_index(mb.name);
      if (g < 0) {
        throw ParseError("protocol set does not declare mailbox '" + mb.name +
                             "' used by driver '" + cfg.name + "'",
                         SourceLoc{});
      }
      mbox_map_.push_back(g);
    }
  }

  SimulationResult run() {
    while (result_.status == SimStatus::Terminated && !done_) {
      if (steps_ >= opts_.max_steps) {
        result_.status = SimStatus::Inconclusive;
        append_note("step budget exhausted");
        break;
      }
      ++steps_;
      if (!blocked_) {
        driver_step();
      } else {
        wrapper_turn();
      }
    }
    result_.steps_executed = steps_;
    result_.final_monitor = monitor_;
    result_.final_wrapper = wrapper_;
    return result_;
  }

 private:
  void violation(Rule rule, const std::string& detail) {
    result_.status = SimStatus::Violation;
    result_.verdict.ok = false;
    result_.verdict.rule = rule;
    result_.verdict.step = steps_;
    result_.verdict.detail = detail;
  }

  void inconclusive(const std::string& why) {
    result_.status = SimStatus::Inconclusive;
    append_note(why);
  }

  void append_note(const std::string& note) {
    if (!result_.note.empty()) result_.note += "; ";
    result_.note += note;
  }

  void log(const std::string& task, char dir, int mbox) {
    result_.events.push_back({steps_, task, dir, mbox, monitor_});
  }

  void driver_step() {
    const CfgNode& node = cfg_.nodes[node_];
    switch (node.kind) {
      case NodeKind::Assign:
        if (node.var >= 0) {
          valuation_[node.var] =
              node.expr ? (eval_expr(*node.expr, valuation_) ? 1 : 0)
                        : node.value;
        }
        node_ = node.succ;
        break;
      case NodeKind::Branch:
        if (node.expr) {
          node_ = eval_expr(*node.expr, valuation_) ? node.succ_true
                                                    : node.succ_false;
        } else {
          node_ = (rng_() & 1) ? node.succ_true : node.succ_false;
        }
        break;
      case NodeKind::Emit: {
        int m = mbox_map_[node.mailbox];
        // EMIT never blocks and never fails; the queue append is
        // unconditional.
        if (opts_.capacity_one && !queues_.empty(m)) {
          queues_.push(m);
          violation(Rule::Emit, "mailbox '" + set_.mailboxes[m].name +
                                    "' overflows in capacity-one mode");
          return;
        }
        queues_.push(m);
        if (!set_.step(monitor_, m)) {
          log(cfg_.name, '!', m);
          violation(Rule::Emit,
                    "send !" + set_.mailboxes[m].name +
                        " rejected in protocol state " +
                        set_.state_vector_string(monitor_));
          return;
        }
        log(cfg_.name, '!', m);
        pending_out_.push_back(m);
        node_ = node.succ;
        break;
      }
      case NodeKind::Await: {
        std::vector<int> awaited;
        for (int c : node.await_set) awaited.push_back(mbox_map_[c]);
        int pick = -1;
        if (!opts_.irq_mailbox.empty()) {
          int irq = set_.mailbox_index(opts_.irq_mailbox);
          if (irq >= 0 && !queues_.empty(irq) &&
              std::find(awaited.begin(), awaited.end(), irq) !=
                  awaited.end()) {
            pick = irq;  // interrupts jump the queue
          }
        }
        if (pick < 0) {
          std::uint64_t best = 0;
          for (int m : awaited) {
            if (queues_.empty(m)) continue;
            if (pick < 0 || queues_.front_seq(m) < best) {
              pick = m;
              best = queues_.front_seq(m);
            }
          }
        }
        if (pick < 0) {
          blocked_ = true;
          defer_turns_ = 0;
          return;  // yield to the wrapper
        }
        deliver(node, pick);
        break;
      }
      case NodeKind::Return: {
        done_ = true;
        if (!set_.all_final(monitor_)) {
          int offending = -1;
          for (std::size_t pi = 0; pi < set_.protocols.size(); ++pi) {
            if (!set_.protocols[pi].is_final[monitor_[pi]]) {
              offending = static_cast<int>(pi);
              break;
            }
          }
          violation(Rule::Termination,
                    "driver returned with protocol '" +
                        set_.protocols[offending].name +
                        "' in non-final state '" +
                        set_.protocols[offending]
                            .state_names[monitor_[offending]] +
                        "'");
        }
        break;
      }
    }
  }

  void deliver(const CfgNode& await_node, int m) {
    queues_.pop(m);
    if (!set_.step(monitor_, m)) {
      // The wrapper only sends what its own view allows, so this can only
      // happen when in-flight messages cross; not a driver bug.
      inconclusive("out-of-order receive of ?" + set_.mailboxes[m].name);
      return;
    }
    int m_cfg = -1;
    for (int c : await_node.await_set) {
      if (mbox_map_[c] == m) m_cfg = c;
    }
    valuation_[await_node.var] = m_cfg + 1;
    log(cfg_.name, '?', m);
    node_ = await_node.succ;
    blocked_ = false;
  }

  void wrapper_turn() {
    // Consume the driver's outgoing messages first.
    for (int m : pending_out_) {
      queues_.pop(m);
      if (!set_.step(wrapper_, m)) {
        inconclusive("wrapper view rejected !" + set_.mailboxes[m].name +
                     " (message crossing)");
        return;
      }
    }
    pending_out_.clear();

    const CfgNode& node = cfg_.nodes[node_];
    std::vector<int> awaited;
    for (int c : node.await_set) awaited.push_back(mbox_map_[c]);

    // Anything already queued unblocks the driver.
    for (int m : awaited) {
      if (!queues_.empty(m)) {
        blocked_ = false;
        return;
      }
    }

    std::vector<int> sendable = wrapper_enabled_in();
    std::vector<int> deliverable;
    for (int m : sendable) {
      if (std::find(awaited.begin(), awaited.end(), m) != awaited.end()) {
        deliverable.push_back(m);
      }
    }

    if (deliverable.empty() && !can_ever_deliver(awaited)) {
      violation(Rule::Await2,
                "deadlock: await on {" + mailbox_list(awaited) +
                    "} can never be served from wrapper state " +
                    set_.state_vector_string(wrapper_));
      return;
    }

    if (!deliverable.empty() && defer_turns_ >= opts_.fairness_bound) {
      send(deliverable[rng_() % deliverable.size()]);
      defer_turns_ = 0;
      return;
    }
    if (!deliverable.empty()) ++defer_turns_;

    if (sendable.empty()) return;  // idle turn
    // One slot for idling keeps the wrapper from flooding the driver.
    std::size_t choice = rng_() % (sendable.size() + 1);
    if (choice == sendable.size()) return;
    int m = sendable[choice];
    bool was_deliverable = std::find(deliverable.begin(), deliverable.end(),
                                     m) != deliverable.end();
    send(m);
    if (was_deliverable) defer_turns_ = 0;
  }

  std::vector<int> wrapper_enabled_in() const {
    std::vector<int> out;
    for (std::size_t m = 0; m < set_.mailboxes.size(); ++m) {
      if (set_.mailboxes[m].direction != Direction::In) continue;
      if (opts_.capacity_one && !queues_.empty(static_cast<int>(m))) continue;
      if (set_.deliverable(wrapper_, static_cast<int>(m))) {
        out.push_back(static_cast<int>(m));
      }
    }
    return out;
  }

  void send(int m) {
    std::vector<StateId> next = wrapper_;
    set_.step(next, m);
    wrapper_ = std::move(next);
    queues_.push(m);
    log("os", '!', m);
  }

  bool can_ever_deliver(const std::vector<int>& awaited) const {
    // Per protocol, the incoming-only closure of the wrapper view bounds
    // everything the wrapper can still send while the driver is blocked.
    for (int m : awaited) {
      for (auto [pi, li] : set_.mailboxes[m].bindings) {
        const Protocol& p = set_.protocols[pi];
        std::vector<char> reach = in_closure(p, wrapper_[pi]);
        for (StateId s = 0; s < p.num_states(); ++s) {
          if (!reach[s]) continue;
          if (p.step(s, li) != kReject) return true;
        }
      }
    }
    return false;
  }

  std::string mailbox_list(const std::vector<int>& ms) const {
    std::string out;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (i > 0) out += ", ";
      out += set_.mailboxes[ms[i]].name;
    }
    return out;
  }

  const DriverCfg& cfg_;
  const ProtocolSet& set_;
  SimOptions opts_;
  std::mt19937_64 rng_;
  std::vector<int> mbox_map_;
  MailboxQueues queues_;
  std::vector<StateId> monitor_;
  std::vector<StateId> wrapper_;
  std::vector<int> pending_out_;
  int node_;
  std::vector<int> valuation_;
  bool blocked_ = false;
  bool done_ = false;
  int defer_turns_ = 0;
  std::size_t steps_ = 0;
  SimulationResult result_;
};

}  // namespace

SimulationResult run(const DriverCfg& cfg, const ProtocolSet& protocols,
                     const SimOptions& opts) {
  return Simulation(cfg, protocols, opts).run();
}

std::string format_sim_event(const ProtocolSet& protocols, const SimEvent& e) {
  std::ostringstream os;
  os << e.step << " " << e.task << " " << e.dir << " "
     << protocols.mailboxes[e.mailbox].name << " ";
  for (std::size_t i = 0; i < e.monitor_states.size(); ++i) {
    if (i > 0) os << ",";
    os << protocols.protocols[i].state_names[e.monitor_states[i]];
  }
  return os.str();
}

BenchResult throughput_bench(std::size_t n_messages, int n_clients) {
  if (n_messages < 1 || n_clients < 1) {
    throw std::invalid_argument(
        "throughput_bench needs at least one message and one client");
  }
  MailboxQueues queues(static_cast<std::size_t>(n_clients));
  std::mt19937_64 rng(12345);
  BenchResult result;
  result.per_client.assign(static_cast<std::size_t>(n_clients), 0);

  auto start = std::chrono::steady_clock::now();
  std::size_t delivered = 0;
  while (delivered < n_messages) {
    // Producer turn: a random client enqueues into its own mailbox.
    int c = static_cast<int>(rng() % static_cast<std::uint64_t>(n_clients));
    queues.push(c);
    // Consumer turn: dequeue the globally oldest message.
    int pick = -1;
    std::uint64_t best = 0;
    for (int m = 0; m < n_clients; ++m) {
      if (queues.empty(m)) continue;
      if (pick < 0 || queues.front_seq(m) < best) {
        pick = m;
        best = queues.front_seq(m);
      }
    }
    queues.pop(pick);
    ++result.per_client[pick];
    ++delivered;
  }
  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  result.msgs_per_sec =
      elapsed > 0 ? static_cast<double>(delivered) / elapsed : 0.0;
  return result;
}

}  // namespace actdrv
