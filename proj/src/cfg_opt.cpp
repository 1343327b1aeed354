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

#include "actdrv/cfg_opt.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace actdrv {

namespace {

enum class Tri { False, True, Unknown };

Tri tri_not(Tri t) {
  if (t == Tri::Unknown) return Tri::Unknown;
  return t == Tri::True ? Tri::False : Tri::True;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::False && b == Tri::False) return Tri::False;
  return Tri::Unknown;
}

// Evaluates a condition knowing only `var == value`; every other variable
// is free. Sound for feasibility: Unknown means some assignment of the
// free variables realizes either outcome.
Tri eval_given(const Expr& e, int var, int value) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.const_value ? Tri::True : Tri::False;
    case Expr::Kind::VarRef:
      return e.var == var ? (value != 0 ? Tri::True : Tri::False)
                          : Tri::Unknown;
    case Expr::Kind::CmpEq: {
      if (e.var != var) return Tri::Unknown;
      bool eq = value == e.cmp_value;
      if (e.cmp_negated) eq = !eq;
      return eq ? Tri::True : Tri::False;
    }
    case Expr::Kind::Not:
      return tri_not(eval_given(*e.lhs, var, value));
    case Expr::Kind::And:
      return tri_and(eval_given(*e.lhs, var, value),
                     eval_given(*e.rhs, var, value));
    case Expr::Kind::Or:
      return tri_or(eval_given(*e.lhs, var, value),
                    eval_given(*e.rhs, var, value));
  }
  return Tri::Unknown;
}

bool expr_mentions(const Expr& e, int var) {
  if ((e.kind == Expr::Kind::VarRef || e.kind == Expr::Kind::CmpEq) &&
      e.var == var) {
    return true;
  }
  if (e.lhs && expr_mentions(*e.lhs, var)) return true;
  if (e.rhs && expr_mentions(*e.rhs, var)) return true;
  return false;
}

// Await-result values as stored in valuations: cfg mailbox id + 1.
std::vector<int> awaited_values(const CfgNode& await_node) {
  std::vector<int> values;
  for (int m : await_node.await_set) values.push_back(m + 1);
  return values;
}

// Outcome of `cond` when the result variable ranges over `values`:
// True/False when forced for every value and every free variable,
// Unknown otherwise.
Tri forced_outcome(const Expr& cond, int var, const std::vector<int>& values) {
  Tri acc = eval_given(cond, var, values.front());
  for (std::size_t i = 1; i < values.size() && acc != Tri::Unknown; ++i) {
    if (eval_given(cond, var, values[i]) != acc) acc = Tri::Unknown;
  }
  return acc;
}

}  // namespace

std::vector<CandidateRegion> find_regions(const DriverCfg& cfg) {
  std::vector<CandidateRegion> regions;
  for (std::size_t a = 0; a < cfg.nodes.size(); ++a) {
    const CfgNode& an = cfg.nodes[a];
    if (an.kind != NodeKind::Await) continue;
    int var = an.var;

    CandidateRegion region;
    region.await_node = static_cast<int>(a);
    region.result_var = var;

    std::set<int> zone, exits;
    std::vector<int> work{an.succ};
    while (!work.empty()) {
      int n = work.back();
      work.pop_back();
      const CfgNode& node = cfg.nodes[n];
      if (node.kind == NodeKind::Await && node.var == var) {
        exits.insert(n);  // rebinds the result: region boundary
        continue;
      }
      if (!zone.insert(n).second) continue;
      for (int s : cfg.successors(n)) work.push_back(s);
    }
    for (int n : zone) {
      const CfgNode& node = cfg.nodes[n];
      if (node.kind == NodeKind::Branch && node.expr &&
          expr_mentions(*node.expr, var)) {
        region.branch_nodes.push_back(n);
      }
    }
    if (region.branch_nodes.size() < 2) continue;
    region.zone.assign(zone.begin(), zone.end());
    region.exit_nodes.assign(exits.begin(), exits.end());
    regions.push_back(std::move(region));
  }
  return regions;
}

std::vector<InfeasiblePair> infeasible_paths(const CandidateRegion& region,
                                             const DriverCfg& cfg) {
  std::vector<InfeasiblePair> out;
  std::vector<int> values = awaited_values(cfg.nodes[region.await_node]);
  int var = region.result_var;
  const bool outcomes[2] = {false, true};
  for (std::size_t i = 0; i < region.branch_nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < region.branch_nodes.size(); ++j) {
      const Expr& a = *cfg.nodes[region.branch_nodes[i]].expr;
      const Expr& b = *cfg.nodes[region.branch_nodes[j]].expr;
      for (bool oa : outcomes) {
        for (bool ob : outcomes) {
          bool sat = false;
          for (int v : values) {
            Tri ta = eval_given(a, var, v);
            Tri tb = eval_given(b, var, v);
            bool a_ok = ta == Tri::Unknown || (ta == Tri::True) == oa;
            bool b_ok = tb == Tri::Unknown || (tb == Tri::True) == ob;
            if (a_ok && b_ok) {
              sat = true;
              break;
            }
          }
          if (!sat) {
            out.push_back({region.branch_nodes[i], oa,
                           region.branch_nodes[j], ob});
          }
        }
      }
    }
  }
  return out;
}

namespace {

// One specialized copy of a zone node per set of values the result
// variable may still hold on paths reaching it. Branches whose outcome is
// forced for the whole set are bypassed instead of copied.
class RegionSpecializer {
 public:
  RegionSpecializer(DriverCfg& cfg, const CandidateRegion& region,
                    const RewriteOptions& opts)
      : cfg_(cfg), region_(region), opts_(opts) {
    zone_.insert(region.zone.begin(), region.zone.end());
  }

  bool plan_fits() {
    std::vector<int> init = awaited_values(cfg_.nodes[region_.await_node]);
    std::sort(init.begin(), init.end());
    std::set<std::pair<int, std::vector<int>>> planned;
    std::vector<std::pair<int, std::vector<int>>> work;
    plan_visit(cfg_.nodes[region_.await_node].succ, init, planned, work);
    while (!work.empty()) {
      auto [n, vals] = work.back();
      work.pop_back();
      const CfgNode& node = cfg_.nodes[n];
      if (node.kind == NodeKind::Branch && node.expr) {
        if (forced_outcome(*node.expr, region_.result_var, vals) !=
            Tri::Unknown) {
          ++planned_bypasses_;
        }
        auto [tvals, fvals] = split(*node.expr, vals);
        if (!tvals.empty()) plan_visit(node.succ_true, tvals, planned, work);
        if (!fvals.empty()) plan_visit(node.succ_false, fvals, planned, work);
      } else {
        for (int s : cfg_.successors(n)) plan_visit(s, vals, planned, work);
      }
      std::size_t budget = static_cast<std::size_t>(opts_.growth_factor) *
                           zone_.size();
      if (planned.size() > budget) return false;
    }
    return true;
  }

  // A region where no branch outcome is ever forced has nothing to
  // remove; rewriting it would only duplicate nodes.
  bool worthwhile() const { return planned_bypasses_ > 0; }

  RegionRewriteStats apply() {
    RegionRewriteStats stats;
    stats.await_node = region_.await_node;
    stats.branches = static_cast<int>(region_.branch_nodes.size());
    std::vector<int> init = awaited_values(cfg_.nodes[region_.await_node]);
    std::sort(init.begin(), init.end());
    int new_entry = build(cfg_.nodes[region_.await_node].succ, init);
    cfg_.nodes[region_.await_node].succ = new_entry;
    stats.paths_removed = paths_removed_;
    stats.nodes_added = nodes_added_;
    return stats;
  }

 private:
  using Key = std::pair<int, std::vector<int>>;

  void plan_visit(int n, const std::vector<int>& vals,
                  std::set<Key>& planned, std::vector<Key>& work) {
    if (!zone_.count(n)) return;
    Key key{n, vals};
    if (planned.insert(key).second) work.push_back(key);
  }

  std::pair<std::vector<int>, std::vector<int>> split(
      const Expr& cond, const std::vector<int>& vals) const {
    std::vector<int> tvals, fvals;
    for (int v : vals) {
      Tri t = eval_given(cond, region_.result_var, v);
      if (t != Tri::False) tvals.push_back(v);
      if (t != Tri::True) fvals.push_back(v);
    }
    return {tvals, fvals};
  }

  int build(int n, std::vector<int> vals) {
    if (!zone_.count(n)) return n;  // exit: leave the original target
    Key key{n, vals};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    const CfgNode node = cfg_.nodes[n];
    if (node.kind == NodeKind::Branch && node.expr &&
        !in_progress_.count(key)) {
      // A cycle made only of forced branches must keep one node, so the
      // bypass is fenced by the in-progress set.
      Tri forced = forced_outcome(*node.expr, region_.result_var, vals);
      if (forced != Tri::Unknown) {
        in_progress_.insert(key);
        int target = build(
            forced == Tri::True ? node.succ_true : node.succ_false, vals);
        in_progress_.erase(key);
        ++paths_removed_;
        cache_.emplace(key, target);
        return target;
      }
    }

    int copy = static_cast<int>(cfg_.nodes.size());
    cfg_.nodes.push_back(node);
    ++nodes_added_;
    cache_.emplace(key, copy);

    if (node.kind == NodeKind::Branch) {
      if (node.expr) {
        auto [tvals, fvals] = split(*node.expr, vals);
        // An empty side is unreachable under `vals`; keep the original
        // target so the branch stays structurally two-armed.
        cfg_.nodes[copy].succ_true =
            tvals.empty() ? node.succ_true : build(node.succ_true, tvals);
        cfg_.nodes[copy].succ_false =
            fvals.empty() ? node.succ_false : build(node.succ_false, fvals);
      } else {
        cfg_.nodes[copy].succ_true = build(node.succ_true, vals);
        cfg_.nodes[copy].succ_false = build(node.succ_false, vals);
      }
    } else if (node.kind != NodeKind::Return) {
      cfg_.nodes[copy].succ = build(node.succ, vals);
    }
    return copy;
  }

  DriverCfg& cfg_;
  const CandidateRegion& region_;
  const RewriteOptions& opts_;
  std::set<int> zone_;
  std::map<Key, int> cache_;
  std::set<Key> in_progress_;
  int paths_removed_ = 0;
  int nodes_added_ = 0;
  int planned_bypasses_ = 0;
};

}  // namespace

RewriteResult rewrite(const DriverCfg& cfg,
                      const std::vector<CandidateRegion>& regions,
                      const RewriteOptions& opts) {
  RewriteResult result;
  result.cfg = cfg;

  std::vector<CandidateRegion> ordered = regions;
  std::sort(ordered.begin(), ordered.end(),
            [](const CandidateRegion& a, const CandidateRegion& b) {
              return a.await_node < b.await_node;
            });
  for (const auto& region : ordered) {
    RegionSpecializer spec(result.cfg, region, opts);
    if (!spec.plan_fits()) {
      RegionRewriteStats stats;
      stats.await_node = region.await_node;
      stats.branches = static_cast<int>(region.branch_nodes.size());
      stats.skipped = true;
      result.regions.push_back(stats);
      continue;
    }
    if (!spec.worthwhile()) {
      RegionRewriteStats stats;
      stats.await_node = region.await_node;
      stats.branches = static_cast<int>(region.branch_nodes.size());
      result.regions.push_back(stats);
      continue;
    }
    result.regions.push_back(spec.apply());
  }
  renumber_preorder(result.cfg);
  return result;
}

}  // namespace actdrv
