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

#ifndef ACTDRV_RUNTIME_HPP_
#define ACTDRV_RUNTIME_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "actdrv/cfg.hpp"
#include "actdrv/checker.hpp"
#include "actdrv/protocol.hpp"

namespace actdrv {

// Cooperative-domain simulator: the driver is the only runnable task
// between AWAIT yields, mailboxes are FIFO queues, EMIT never blocks, and
// a simulated OS wrapper generates protocol-legal traffic. An online
// monitor steps the protocol machines on every send and receive.
//
// Two protocol views exist side by side. The monitor view advances when
// the driver emits or an AWAIT delivers; it is the state the five rules
// are defined over. The wrapper view additionally advances when the
// wrapper enqueues an incoming message, because from the OS's side the
// message is already on the wire: once it has committed to `?unplug` it
// will not offer `?resume` anymore. Deadlock detection runs on the
// wrapper view: an AWAIT is doomed when no awaited mailbox is queued and
// none is enabled anywhere in the wrapper view's incoming-only closure.

struct SimOptions {
  std::uint64_t seed = 0;
  std::size_t max_steps = 10000;
  int fairness_bound = 8;  // max wrapper turns a deliverable send may wait
  bool capacity_one = false;     // mailboxes hold at most one message
  std::string irq_mailbox;       // delivered ahead of FIFO order when set
};

enum class SimStatus { Terminated, Inconclusive, Violation };

const char* sim_status_name(SimStatus s);

struct SimEvent {
  std::size_t step = 0;
  std::string task;  // driver name, or "os" for wrapper sends
  char dir = '?';    // '!' send, '?' receive (from the acting task's side)
  int mailbox = -1;  // protocol-set mailbox id
  std::vector<StateId> monitor_states;
};

struct MonitorVerdict {
  bool ok = true;
  Rule rule = Rule::Emit;
  std::size_t step = 0;
  std::string detail;
};

struct SimulationResult {
  SimStatus status = SimStatus::Terminated;
  MonitorVerdict verdict;
  std::vector<SimEvent> events;
  std::vector<StateId> final_monitor;
  std::vector<StateId> final_wrapper;
  std::size_t steps_executed = 0;
  std::string note;  // non-verdict oddities, e.g. message crossing
};

/// Runs the driver against the wrapper until it returns, violates a rule,
/// or the step budget runs out (status Inconclusive). Deterministic for a
/// fixed seed and options.
SimulationResult run(const DriverCfg& cfg, const ProtocolSet& protocols,
                     const SimOptions& opts = {});

std::string format_sim_event(const ProtocolSet& protocols, const SimEvent& e);

struct BenchResult {
  double msgs_per_sec = 0.0;
  std::vector<std::size_t> per_client;  // delivered per client mailbox
};

/// Message-throughput microbenchmark over the simulator's queue and
/// scheduling machinery: n_clients producers feed one consumer through
/// per-client mailboxes. Reports a rate; asserts nothing about absolute
/// numbers. Throws std::invalid_argument unless n_messages and n_clients
/// are both at least 1.
BenchResult throughput_bench(std::size_t n_messages, int n_clients);

}  // namespace actdrv

#endif  // ACTDRV_RUNTIME_HPP_
