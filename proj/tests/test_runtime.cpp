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

#include <map>

#include "actdrv/io.hpp"
#include "actdrv/runtime.hpp"
#include "oracle.hpp"

using namespace actdrv;

namespace {

std::vector<Protocol> fixture_protocols() {
  return {parse_protocol(read_file(oracle::fixture_path("power_mgmt.prot"))),
          parse_protocol(read_file(oracle::fixture_path("ping.prot")))};
}

DriverCfg lower_fixture(const std::string& rel) {
  DriverProgram prog =
      parse_driver(read_file(oracle::fixture_path(rel)), fixture_protocols());
  return lower(prog);
}

}  // namespace

TEST_CASE("suspend_ok stays clean across 100 seeds of 100k steps") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SimOptions opts;
    opts.seed = seed;
    opts.max_steps = 100000;
    SimulationResult r = run(cfg, cfg.protocols, opts);
    CAPTURE(seed);
    CHECK(r.verdict.ok);
    CHECK(r.status != SimStatus::Violation);
  }
}

TEST_CASE("suspend_bug deadlocks at the narrow await under seed search") {
  DriverCfg cfg = lower_fixture("suspend_bug.drv");
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    SimOptions opts;
    opts.seed = seed;
    opts.max_steps = 10000;
    SimulationResult r = run(cfg, cfg.protocols, opts);
    if (r.status == SimStatus::Violation) {
      CHECK(r.verdict.rule == Rule::Await2);
      CHECK(r.verdict.detail.find("deadlock") != std::string::npos);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("empty driver against the degenerate protocol ends clean") {
  Protocol p =
      parse_protocol("protocol empty { state ONLY initial final ; }");
  DriverProgram prog = parse_driver("driver t uses empty { main { } }", {p});
  DriverCfg cfg = lower(prog);
  SimulationResult r = run(cfg, cfg.protocols, {});
  CHECK(r.status == SimStatus::Terminated);
  CHECK(r.verdict.ok);
  CHECK(r.events.empty());
}

TEST_CASE("driver-side violations surface with their rule") {
  auto protocols = fixture_protocols();

  DriverProgram bad_emit = parse_driver(
      "driver d uses power_mgmt { main { emit(suspend_complete) ; } }",
      protocols);
  DriverCfg cfg1 = lower(bad_emit);
  SimulationResult r1 = run(cfg1, cfg1.protocols, {});
  CHECK(r1.status == SimStatus::Violation);
  CHECK(r1.verdict.rule == Rule::Emit);

  DriverProgram bad_return = parse_driver(
      "driver d uses power_mgmt { main { return ; } }", protocols);
  DriverCfg cfg2 = lower(bad_return);
  SimulationResult r2 = run(cfg2, cfg2.protocols, {});
  CHECK(r2.status == SimStatus::Violation);
  CHECK(r2.verdict.rule == Rule::Termination);
}

TEST_CASE("per-mailbox receive order equals send order") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimOptions opts;
    opts.seed = seed;
    opts.max_steps = 20000;
    SimulationResult r = run(cfg, cfg.protocols, opts);
    std::map<int, std::vector<std::size_t>> sends, receives;
    for (const auto& e : r.events) {
      if (e.task == "os" && e.dir == '!') sends[e.mailbox].push_back(e.step);
      if (e.task != "os" && e.dir == '?') {
        receives[e.mailbox].push_back(e.step);
      }
    }
    for (const auto& [mbox, recv_steps] : receives) {
      const auto& send_steps = sends[mbox];
      REQUIRE(recv_steps.size() <= send_steps.size());
      for (std::size_t i = 0; i < recv_steps.size(); ++i) {
        // The i-th receive happens after the i-th send of this mailbox.
        CHECK(send_steps[i] < recv_steps[i]);
      }
    }
  }
}

TEST_CASE("a deliverable message is never deferred beyond the bound") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  SimOptions opts;
  opts.max_steps = 20000;
  opts.fairness_bound = 4;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    opts.seed = seed;
    SimulationResult r = run(cfg, cfg.protocols, opts);
    // The driver always awaits everything enabled, so between any driver
    // receive there are at most K idle/other wrapper turns once a
    // deliverable message exists. Approximate check via the step gap
    // between a send and the preceding driver event.
    CHECK(r.verdict.ok);
    std::size_t last_driver = 0;
    for (const auto& e : r.events) {
      if (e.task == "os") {
        CHECK(e.step - last_driver <=
              static_cast<std::size_t>(opts.fairness_bound + 3));
      } else {
        last_driver = e.step;
      }
    }
  }
}

TEST_CASE("runs are deterministic for a fixed seed") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  SimOptions opts;
  opts.seed = 9;
  opts.max_steps = 5000;
  SimulationResult a = run(cfg, cfg.protocols, opts);
  SimulationResult b = run(cfg, cfg.protocols, opts);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(format_sim_event(cfg.protocols, a.events[i]) ==
          format_sim_event(cfg.protocols, b.events[i]));
  }
  CHECK(a.steps_executed == b.steps_executed);
}

TEST_CASE("capacity-one mode flags double emits, default mode does not") {
  Protocol p = parse_protocol(
      "protocol burst { mailbox out tick ; state A initial ; state B ; "
      "state C final ; A -> B on !tick ; B -> C on !tick ; }");
  DriverProgram prog = parse_driver(
      "driver d uses burst { main { emit(tick) ; emit(tick) ; return ; } }",
      {p});
  DriverCfg cfg = lower(prog);

  SimulationResult ok = run(cfg, cfg.protocols, {});
  CHECK(ok.verdict.ok);
  CHECK(ok.status == SimStatus::Terminated);

  SimOptions opts;
  opts.capacity_one = true;
  SimulationResult bad = run(cfg, cfg.protocols, opts);
  CHECK(bad.status == SimStatus::Violation);
  CHECK(bad.verdict.rule == Rule::Emit);
  CHECK(bad.verdict.detail.find("overflow") != std::string::npos);
}

TEST_CASE("irq mailbox jumps the queue when configured") {
  // Three independent interfaces: traffic on dat/irq accumulates while
  // the driver is parked on the gate.
  Protocol gate = parse_protocol(
      "protocol gate { mailbox in go ; state G0 initial fair ; "
      "state G1 final ; G0 -> G1 on ?go ; }");
  Protocol data = parse_protocol(
      "protocol data { mailbox in dat ; state D0 initial final fair ; "
      "state D1 final ; D0 -> D1 on ?dat ; }");
  Protocol irq = parse_protocol(
      "protocol irqline { mailbox in irq ; state I0 initial final fair ; "
      "state I1 final ; I0 -> I1 on ?irq ; }");
  DriverProgram prog = parse_driver(
      "driver d uses gate, data, irqline { var mb : mbox ; main { "
      "mb = await(go) ; mb = await(dat, irq) ; return ; } }",
      {gate, data, irq});
  DriverCfg cfg = lower(prog);

  auto first_data_receive = [&](const SimulationResult& r,
                                bool* both_queued) -> std::string {
    bool sent_dat = false, sent_irq = false;
    for (const auto& e : r.events) {
      std::string name = cfg.protocols.mailboxes[e.mailbox].name;
      if (e.task == "os") {
        sent_dat |= name == "dat";
        sent_irq |= name == "irq";
      } else if (e.dir == '?' && name != "go") {
        *both_queued = sent_dat && sent_irq;
        return name;
      }
    }
    *both_queued = false;
    return "";
  };

  int exercised = 0;
  for (std::uint64_t seed = 0; seed < 500 && exercised < 5; ++seed) {
    SimOptions plain;
    plain.seed = seed;
    plain.max_steps = 5000;
    bool both = false;
    SimulationResult r = run(cfg, cfg.protocols, plain);
    first_data_receive(r, &both);
    if (!both) continue;

    SimOptions prio = plain;
    prio.irq_mailbox = "irq";
    SimulationResult rp = run(cfg, cfg.protocols, prio);
    bool both_p = false;
    std::string first = first_data_receive(rp, &both_p);
    if (!both_p) continue;
    CHECK(first == "irq");  // priority wins over global FIFO order
    ++exercised;
  }
  CHECK(exercised >= 5);
}

TEST_CASE("throughput bench reports positive balanced rates") {
  BenchResult r = throughput_bench(100000, 1);
  CHECK(r.msgs_per_sec > 0.0);
  CHECK(r.per_client.size() == 1);
  CHECK(r.per_client[0] == 100000);

  BenchResult r8 = throughput_bench(100000, 8);
  CHECK(r8.msgs_per_sec > 0.0);
  std::size_t lo = r8.per_client[0], hi = r8.per_client[0];
  for (std::size_t c : r8.per_client) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(lo > 0);
  CHECK(hi <= 10 * lo);  // per-client fairness within one order

  CHECK_THROWS_AS(throughput_bench(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(throughput_bench(10, 0), std::invalid_argument);
}

TEST_CASE("monitor violations replay to checker failures") {
  // Any VIOLATION the simulator reports must be a FAIL of the same rule
  // in the checker.
  for (const char* rel :
       {"suspend_bug.drv", "mutants/m01_emit_early.drv",
        "mutants/m02_emit_wrong.drv", "mutants/m05_await_in_timed.drv",
        "mutants/m07_early_return.drv", "mutants/m08_return_suspended.drv"}) {
    CAPTURE(rel);
    DriverCfg cfg = lower_fixture(rel);
    CheckReport report = check_all(cfg, cfg.protocols);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      SimOptions opts;
      opts.seed = seed;
      SimulationResult r = run(cfg, cfg.protocols, opts);
      if (r.status == SimStatus::Violation) {
        CHECK(report.verdict_for(r.verdict.rule).status ==
              VerdictStatus::Fail);
      }
    }
  }
}

TEST_CASE("checker safety failures reproduce in simulation") {
  struct Case {
    const char* file;
    Rule rule;
  };
  const Case cases[] = {
      {"suspend_bug.drv", Rule::Await2},
      {"mutants/m01_emit_early.drv", Rule::Emit},
      {"mutants/m02_emit_wrong.drv", Rule::Emit},
      {"mutants/m03_double_complete.drv", Rule::Emit},
      {"mutants/m04_narrow_await.drv", Rule::Await2},
      {"mutants/m05_await_in_timed.drv", Rule::Await2},
      {"mutants/m06_missing_unplug.drv", Rule::Await2},
      {"mutants/m07_early_return.drv", Rule::Termination},
      {"mutants/m08_return_suspended.drv", Rule::Termination},
  };
  for (const auto& c : cases) {
    CAPTURE(c.file);
    DriverCfg cfg = lower_fixture(c.file);
    bool reproduced = false;
    for (std::uint64_t seed = 0; seed < 1000 && !reproduced; ++seed) {
      SimOptions opts;
      opts.seed = seed;
      opts.max_steps = 10000;
      SimulationResult r = run(cfg, cfg.protocols, opts);
      reproduced = r.status == SimStatus::Violation &&
                   r.verdict.rule == c.rule;
    }
    CHECK(reproduced);
  }
}
