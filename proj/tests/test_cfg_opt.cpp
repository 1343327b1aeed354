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

#include <random>

#include "actdrv/cfg_opt.hpp"
#include "actdrv/checker.hpp"
#include "actdrv/io.hpp"
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

DriverCfg lower_text(const std::string& text) {
  auto protocols = fixture_protocols();
  return lower(parse_driver(text, protocols));
}

bool same_shape(const DriverCfg& a, const DriverCfg& b) {
  if (a.nodes.size() != b.nodes.size() || a.entry != b.entry) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (a.nodes[i].kind != b.nodes[i].kind) return false;
    if (a.successors(static_cast<int>(i)) !=
        b.successors(static_cast<int>(i))) {
      return false;
    }
  }
  return true;
}

bool has_infeasible(const std::vector<InfeasiblePair>& pairs, int a, bool oa,
                    int b, bool ob) {
  for (const auto& p : pairs) {
    if (p.branch_a == a && p.outcome_a == oa && p.branch_b == b &&
        p.outcome_b == ob) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("double_test has one region with two correlated branches") {
  DriverCfg cfg = lower_fixture("double_test.drv");
  auto regions = find_regions(cfg);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].branch_nodes.size() == 2);
  CHECK(cfg.nodes[regions[0].await_node].await_set.size() == 2);
}

TEST_CASE("a single test per await yields no region") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  CHECK(find_regions(cfg).empty());
}

TEST_CASE("a rebind between the tests splits the region") {
  DriverCfg cfg = lower_text(
      "driver d uses power_mgmt { var mb : mbox ; main { loop { "
      "mb = await(suspend, unplug) ; "
      "if (mb == suspend) { emit(suspend_complete) ; "
      "  mb = await(resume, unplug) ; } else { emit(unplug_complete) ; "
      "  return ; } "
      "if (mb == suspend) { emit(resume_complete) ; } } } }");
  // Each await is followed by one test of mb, so no region has two.
  CHECK(find_regions(cfg).empty());
}

TEST_CASE("infeasible pairs over the awaited domain match the rules") {
  DriverCfg cfg = lower_text(
      "driver d uses power_mgmt { var mb : mbox ; main { "
      "mb = await(suspend, unplug) ; "
      "if (mb == suspend) { } "
      "if (mb == unplug) { } "
      "if (mb == suspend) { } "
      "} }");
  auto regions = find_regions(cfg);
  REQUIRE(regions.size() == 1);
  REQUIRE(regions[0].branch_nodes.size() == 3);
  int b_suspend1 = regions[0].branch_nodes[0];
  int b_unplug = regions[0].branch_nodes[1];
  int b_suspend2 = regions[0].branch_nodes[2];

  auto pairs = infeasible_paths(regions[0], cfg);
  // Same test twice: disagreeing outcomes are impossible.
  CHECK(has_infeasible(pairs, b_suspend1, true, b_suspend2, false));
  CHECK(has_infeasible(pairs, b_suspend1, false, b_suspend2, true));
  // Distinct equalities on one scalar cannot both hold.
  CHECK(has_infeasible(pairs, b_suspend1, true, b_unplug, true));
  // The result is one of the awaited mailboxes, so both tests false is
  // impossible too.
  CHECK(has_infeasible(pairs, b_suspend1, false, b_unplug, false));
  // Consistent outcomes are feasible.
  CHECK_FALSE(has_infeasible(pairs, b_suspend1, true, b_unplug, false));
  CHECK_FALSE(has_infeasible(pairs, b_suspend1, true, b_suspend2, true));
}

TEST_CASE("conditions entangled with free variables stay feasible") {
  DriverCfg cfg = lower_text(
      "driver d uses power_mgmt { var mb : mbox ; var flag : bool = false ; "
      "main { mb = await(suspend, unplug) ; "
      "if (flag && mb == suspend) { } "
      "if (!flag && mb == suspend) { } "
      "} }");
  auto regions = find_regions(cfg);
  REQUIRE(regions.size() == 1);
  auto pairs = infeasible_paths(regions[0], cfg);
  // The flag makes every outcome pair realizable over the awaited domain
  // (free variables are over-approximated as unconstrained).
  CHECK(pairs.empty());
  // And the rewrite leaves the graph unchanged.
  RewriteResult r = rewrite(cfg, regions);
  CHECK(same_shape(cfg, r.cfg));
  CHECK(r.regions[0].paths_removed == 0);
}

TEST_CASE("rewrite removes inconsistent paths from double_test") {
  DriverCfg cfg = lower_fixture("double_test.drv");
  RewriteResult r = rewrite(cfg, find_regions(cfg));
  REQUIRE(r.regions.size() == 1);
  CHECK_FALSE(r.regions[0].skipped);
  CHECK(r.regions[0].paths_removed > 0);
  CHECK(well_formed(r.cfg, r.cfg.protocols).empty());

  // No remaining branch on the first await's result appears twice on any
  // path without a rebind: walk all paths up to a bound and count.
  auto regions_after = find_regions(r.cfg);
  CHECK(regions_after.empty());
}

TEST_CASE("empty region list is the identity") {
  DriverCfg cfg = lower_fixture("suspend_ok.drv");
  RewriteResult r = rewrite(cfg, {});
  CHECK(same_shape(cfg, r.cfg));
}

TEST_CASE("rewrite preserves event traces on the corpus") {
  for (const char* rel :
       {"double_test.drv", "suspend_ok.drv", "suspend_bug.drv",
        "stuck_suspending.drv", "mutants/m04_narrow_await.drv"}) {
    CAPTURE(rel);
    DriverCfg cfg = lower_fixture(rel);
    RewriteResult r = rewrite(cfg, find_regions(cfg));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      CHECK(oracle::interpret_cfg(cfg, seed, 60) ==
            oracle::interpret_cfg(r.cfg, seed, 60));
    }
  }
}

TEST_CASE("rewrite preserves event traces on random programs") {
  std::mt19937_64 rng(77);
  int rewritten = 0;
  for (int round = 0; round < 150; ++round) {
    Protocol p = oracle::random_protocol(rng, "p");
    std::string text = oracle::random_driver_text(rng, p, "d");
    CAPTURE(text);
    DriverCfg cfg = lower(parse_driver(text, {p}));
    auto regions = find_regions(cfg);
    RewriteResult r = rewrite(cfg, regions);
    if (!regions.empty()) ++rewritten;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      CHECK(oracle::interpret_cfg(cfg, seed, 40) ==
            oracle::interpret_cfg(r.cfg, seed, 40));
    }
  }
  CHECK(rewritten > 5);
}

TEST_CASE("verdicts are unchanged by the rewrite on the whole corpus") {
  for (const char* rel :
       {"suspend_bug.drv", "suspend_ok.drv", "ignore_suspend.drv",
        "stuck_suspending.drv", "double_test.drv",
        "mutants/m01_emit_early.drv", "mutants/m02_emit_wrong.drv",
        "mutants/m03_double_complete.drv", "mutants/m04_narrow_await.drv",
        "mutants/m05_await_in_timed.drv", "mutants/m06_missing_unplug.drv",
        "mutants/m07_early_return.drv", "mutants/m08_return_suspended.drv",
        "mutants/m09_busy_loop.drv", "mutants/m10_ignore_ping.drv",
        "mutants/m11_stuck_suspending.drv", "mutants/m12_slow_resume.drv"}) {
    CAPTURE(rel);
    DriverCfg cfg = lower_fixture(rel);
    DriverCfg opt = rewrite(cfg, find_regions(cfg)).cfg;
    CheckReport before = check_all(cfg, cfg.protocols);
    CheckReport after = check_all(opt, opt.protocols);
    REQUIRE(before.verdicts.size() == after.verdicts.size());
    for (std::size_t i = 0; i < before.verdicts.size(); ++i) {
      CHECK(before.verdicts[i].rule == after.verdicts[i].rule);
      CHECK(before.verdicts[i].status == after.verdicts[i].status);
    }
  }
}

TEST_CASE("the rewrite strictly shrinks double_test's product") {
  DriverCfg cfg = lower_fixture("double_test.drv");
  DriverCfg opt = rewrite(cfg, find_regions(cfg)).cfg;
  CheckReport before = check_all(cfg, cfg.protocols);
  CheckReport after = check_all(opt, opt.protocols);
  CHECK(after.product_states < before.product_states);
}

TEST_CASE("product never grows across the corpus") {
  for (const char* rel :
       {"suspend_bug.drv", "suspend_ok.drv", "double_test.drv",
        "mutants/m06_missing_unplug.drv"}) {
    DriverCfg cfg = lower_fixture(rel);
    DriverCfg opt = rewrite(cfg, find_regions(cfg)).cfg;
    CheckReport before = check_all(cfg, cfg.protocols);
    CheckReport after = check_all(opt, opt.protocols);
    CHECK(after.product_states <= before.product_states);
  }
}

TEST_CASE("the growth budget skips a region and reports it") {
  DriverCfg cfg = lower_fixture("double_test.drv");
  auto regions = find_regions(cfg);
  REQUIRE(regions.size() == 1);
  RewriteOptions opts;
  opts.growth_factor = 0;  // nothing fits
  RewriteResult r = rewrite(cfg, regions, opts);
  REQUIRE(r.regions.size() == 1);
  CHECK(r.regions[0].skipped);
  CHECK(same_shape(cfg, r.cfg));
}
