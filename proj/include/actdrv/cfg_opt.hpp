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

#ifndef ACTDRV_CFG_OPT_HPP_
#define ACTDRV_CFG_OPT_HPP_

#include <vector>

#include "actdrv/cfg.hpp"

namespace actdrv {

// Correlated-branch elimination. When a driver awaits on several
// mailboxes and then tests the result variable more than once, the later
// tests are decided by the earlier ones. This pass finds such regions,
// proves branch-outcome combinations infeasible over the finite mailbox
// domain, and rewrites the region so no path takes inconsistent branches.
// The rewrite duplicates region suffixes per feasible value class; it
// never changes the event traces a driver can produce.

struct CandidateRegion {
  int await_node = -1;
  int result_var = -1;
  std::vector<int> branch_nodes;  // branches testing result_var, id order
  std::vector<int> exit_nodes;    // awaits rebinding the result var
  std::vector<int> zone;          // nodes reachable without a rebind
};

/// All maximal regions downstream of an AWAIT in which at least two
/// branches test the await's result variable with no intervening rebind.
std::vector<CandidateRegion> find_regions(const DriverCfg& cfg);

struct InfeasiblePair {
  int branch_a = -1;
  bool outcome_a = false;
  int branch_b = -1;
  bool outcome_b = false;
};

/// Pairs of branch outcomes inside the region that no awaited mailbox
/// value can realize together (other variables treated as free). Decided
/// by enumeration over the awaited set.
std::vector<InfeasiblePair> infeasible_paths(const CandidateRegion& region,
                                             const DriverCfg& cfg);

struct RegionRewriteStats {
  int await_node = -1;
  int branches = 0;
  int paths_removed = 0;  // forced branch outcomes bypassed
  int nodes_added = 0;
  bool skipped = false;   // growth budget exceeded
};

struct RewriteResult {
  DriverCfg cfg;
  std::vector<RegionRewriteStats> regions;
};

struct RewriteOptions {
  int growth_factor = 4;  // per region, relative to its zone size
};

/// Applies the regions in await-node order. A region whose specialized
/// copy count would exceed growth_factor x zone size is skipped and
/// reported; optimization never blocks verification. The result is
/// renumbered in pre-order.
RewriteResult rewrite(const DriverCfg& cfg,
                      const std::vector<CandidateRegion>& regions,
                      const RewriteOptions& opts = {});

}  // namespace actdrv

#endif  // ACTDRV_CFG_OPT_HPP_
