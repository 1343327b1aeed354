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

#include "actdrv/report.hpp"

#include <cstdint>
#include <sstream>

namespace actdrv {

using nlohmann::json;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return "fnv1a:" + os.str();
}

json report_header(const std::string& command,
                   const std::vector<InputFile>& inputs, const json& flags) {
  json j;
  j["command"] = command;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  json in = json::array();
  for (const auto& f : inputs) {
    in.push_back({{"path", f.path}, {"digest", f.digest}});
  }
  j["inputs"] = in;
  j["flags"] = flags;
  return j;
}

namespace {

std::string mailbox_event(const ProtocolSet& set, int mbox) {
  const auto& mb = set.mailboxes[mbox];
  return std::string(1, direction_symbol(mb.direction)) + mb.name;
}

std::vector<std::string> pstate_names(const ProtocolSet& set,
                                      const std::vector<StateId>& pstates) {
  std::vector<std::string> names;
  names.reserve(pstates.size());
  for (std::size_t i = 0; i < pstates.size(); ++i) {
    names.push_back(set.protocols[i].state_names[pstates[i]]);
  }
  return names;
}

}  // namespace

json trace_json(const ProtocolSet& set, const CounterexampleTrace& trace) {
  json j;
  json steps = json::array();
  for (const auto& step : trace.steps) {
    json s;
    s["node"] = step.dest_node;
    if (step.event_mailbox >= 0) {
      s["event"] = mailbox_event(set, step.event_mailbox);
    } else {
      s["event"] = nullptr;
    }
    s["pstates"] = pstate_names(set, step.pstates_after);
    steps.push_back(s);
  }
  j["steps"] = steps;
  if (trace.lasso_start >= 0) {
    j["lasso_start"] = trace.lasso_start;
  } else {
    j["lasso_start"] = nullptr;
  }
  return j;
}

CounterexampleTrace trace_from_json(const ProtocolSet& set, const json& j) {
  CounterexampleTrace trace;
  for (const auto& s : j.at("steps")) {
    TraceStep step;
    step.dest_node = s.at("node").get<int>();
    if (!s.at("event").is_null()) {
      std::string ev = s.at("event").get<std::string>();
      int m = set.mailbox_index(ev.substr(1));
      if (m < 0) throw ParseError("trace names unknown mailbox", SourceLoc{});
      step.event_mailbox = m;
    }
    const auto& names = s.at("pstates");
    for (std::size_t pi = 0; pi < names.size(); ++pi) {
      StateId st =
          set.protocols[pi].state_index(names[pi].get<std::string>());
      if (st == kReject) {
        throw ParseError("trace names unknown protocol state", SourceLoc{});
      }
      step.pstates_after.push_back(st);
    }
    trace.steps.push_back(std::move(step));
  }
  if (!j.at("lasso_start").is_null()) {
    trace.lasso_start = j.at("lasso_start").get<int>();
  }
  return trace;
}

json verdict_json(const ProtocolSet& set, const Verdict& v) {
  json j;
  j["rule"] = rule_name(v.rule);
  j["status"] = verdict_status_name(v.status);
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.trace) {
    j["trace"] = trace_json(set, *v.trace);
    j["violation"] = {
        {"node", v.violation_node},
        {"mailbox", v.violation_mailbox >= 0
                        ? json(set.mailboxes[v.violation_mailbox].name)
                        : json(nullptr)},
        {"protocol", v.violation_protocol >= 0
                         ? json(set.protocols[v.violation_protocol].name)
                         : json(nullptr)},
    };
  }
  return j;
}

Verdict verdict_from_json(const ProtocolSet& set, const json& j) {
  Verdict v;
  std::string rule = j.at("rule").get<std::string>();
  for (Rule r : {Rule::Emit, Rule::Await1, Rule::Await2, Rule::Timed,
                 Rule::Termination}) {
    if (rule == rule_name(r)) v.rule = r;
  }
  std::string status = j.at("status").get<std::string>();
  v.status = status == "FAIL"      ? VerdictStatus::Fail
             : status == "BLOCKED" ? VerdictStatus::Blocked
                                   : VerdictStatus::Pass;
  if (j.contains("detail")) v.detail = j.at("detail").get<std::string>();
  if (j.contains("trace")) {
    v.trace = trace_from_json(set, j.at("trace"));
    const auto& viol = j.at("violation");
    v.violation_node = viol.at("node").get<int>();
    if (!viol.at("mailbox").is_null()) {
      v.violation_mailbox =
          set.mailbox_index(viol.at("mailbox").get<std::string>());
    }
    if (!viol.at("protocol").is_null()) {
      std::string pname = viol.at("protocol").get<std::string>();
      for (std::size_t pi = 0; pi < set.protocols.size(); ++pi) {
        if (set.protocols[pi].name == pname) {
          v.violation_protocol = static_cast<int>(pi);
        }
      }
    }
  }
  return v;
}

json check_report_json(const std::string& driver_name, const ProtocolSet& set,
                       const CheckReport& report,
                       const std::vector<InputFile>& inputs,
                       const json& flags) {
  json j = report_header("check", inputs, flags);
  j["driver"] = driver_name;
  json protocols = json::array();
  for (const auto& p : set.protocols) protocols.push_back(p.name);
  j["protocols"] = protocols;
  json rules = json::array();
  for (const auto& v : report.verdicts) rules.push_back(verdict_json(set, v));
  j["rules"] = rules;
  j["stats"] = {{"product_states", report.product_states},
                {"product_edges", report.product_edges}};
  return j;
}

std::string check_report_text(const std::string& driver_name,
                              const ProtocolSet& set,
                              const CheckReport& report, double wall_ms) {
  std::ostringstream os;
  os << "check " << driver_name << "\n";
  for (const auto& v : report.verdicts) {
    os << "  " << rule_name(v.rule) << ": " << verdict_status_name(v.status);
    if (!v.detail.empty()) os << " -- " << v.detail;
    os << "\n";
    if (v.trace) {
      os << "    trace:";
      for (std::size_t i = 0; i < v.trace->steps.size(); ++i) {
        const auto& s = v.trace->steps[i];
        if (v.trace->lasso_start == static_cast<int>(i)) os << " [cycle:";
        if (s.event_mailbox >= 0) {
          os << " " << mailbox_event(set, s.event_mailbox);
        }
      }
      if (v.trace->lasso_start >= 0) os << " ]";
      os << " (" << v.trace->steps.size() << " steps)\n";
    }
  }
  os << "  product: " << report.product_states << " states, "
     << report.product_edges << " edges, " << wall_ms << " ms\n";
  return os.str();
}

json decomp_report_json(const Decomposition& d,
                        const DecompositionReport& report,
                        const std::vector<InputFile>& inputs,
                        const json& flags) {
  json j = report_header("decompose", inputs, flags);
  j["parent"] = d.parent.name;
  json lang;
  lang["equivalent"] = report.language.equiv;
  if (!report.language.equiv) {
    lang["distinguishing"] =
        format_event_string(d.parent, report.language.distinguishing);
    lang["kind"] = report.language.kind == MismatchKind::Feasibility
                       ? "prefix"
                       : "acceptance";
    lang["admitted_by"] = report.language.parent_side ? "parent" : "parts";
  }
  j["language"] = lang;
  json fair;
  fair["ok"] = report.fairness.ok;
  if (!report.fairness.ok) fair["witness"] = report.fairness.witness;
  json pairs = json::array();
  for (const auto& p : report.fairness.pairs) {
    pairs.push_back({{"parent_state", d.parent.state_names[p.parent_state]},
                     {"part", d.parts[p.part].name},
                     {"part_state", d.parts[p.part].state_names[p.part_state]}});
  }
  fair["pairs"] = pairs;
  fair["warnings"] = report.fairness.warnings;
  j["fairness"] = fair;
  json parts = json::array();
  for (const auto& p : report.parts) {
    parts.push_back({{"name", p.name},
                     {"states", p.states},
                     {"transitions", p.transitions}});
  }
  j["parts"] = parts;
  return j;
}

std::string decomp_report_text(const Decomposition& d,
                               const DecompositionReport& report,
                               double wall_ms) {
  std::ostringstream os;
  os << "decomposition of " << d.parent.name << " (" << report.parts.size()
     << " parts)\n";
  os << "  language: "
     << (report.language.equiv ? "EQUIV" : "NOT EQUIVALENT") << "\n";
  if (!report.language.equiv) {
    os << "    distinguishing ("
       << (report.language.kind == MismatchKind::Feasibility ? "prefix"
                                                             : "acceptance")
       << ", admitted by "
       << (report.language.parent_side ? "parent" : "parts")
       << "): "
       << format_event_string(d.parent, report.language.distinguishing)
       << "\n";
  }
  os << "  fair states: " << (report.fairness.ok ? "OK" : "MISMATCH") << "\n";
  if (!report.fairness.ok) {
    os << "    unmatched: " << report.fairness.witness << "\n";
  }
  for (const auto& w : report.fairness.warnings) {
    os << "    warning: " << w << "\n";
  }
  for (const auto& p : report.parts) {
    os << "  part " << p.name << ": " << p.states << " states, "
       << p.transitions << " transitions\n";
  }
  os << "  " << wall_ms << " ms\n";
  return os.str();
}

json sim_report_json(const DriverCfg& cfg, const ProtocolSet& set,
                     const SimulationResult& result,
                     const std::vector<InputFile>& inputs, const json& flags) {
  json j = report_header("simulate", inputs, flags);
  j["driver"] = cfg.name;
  j["status"] = sim_status_name(result.status);
  json verdict;
  verdict["ok"] = result.verdict.ok;
  if (!result.verdict.ok) {
    verdict["rule"] = rule_name(result.verdict.rule);
    verdict["step"] = result.verdict.step;
    verdict["detail"] = result.verdict.detail;
  }
  j["verdict"] = verdict;
  json events = json::array();
  for (const auto& e : result.events) {
    events.push_back(format_sim_event(set, e));
  }
  j["events"] = events;
  j["final_state"] = pstate_names(set, result.final_monitor);
  j["steps"] = result.steps_executed;
  if (!result.note.empty()) j["note"] = result.note;
  return j;
}

std::string sim_report_text(const ProtocolSet& set,
                            const SimulationResult& result) {
  std::ostringstream os;
  for (const auto& e : result.events) {
    os << format_sim_event(set, e) << "\n";
  }
  os << sim_status_name(result.status);
  if (!result.verdict.ok) {
    os << " " << rule_name(result.verdict.rule) << " at step "
       << result.verdict.step << ": " << result.verdict.detail;
  }
  os << " after " << result.steps_executed << " steps, final state "
     << set.state_vector_string(result.final_monitor) << "\n";
  if (!result.note.empty()) os << "note: " << result.note << "\n";
  return os.str();
}

}  // namespace actdrv
