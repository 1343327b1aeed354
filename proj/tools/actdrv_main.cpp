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

// actdrv: verification toolkit for message-passing device-driver models.
//
//   actdrv validate  <proto.prot>...
//   actdrv decompose <manifest.decomp>
//   actdrv check     <driver.drv> <proto.prot>... [--cfg-opt on|off]
//   actdrv simulate  <driver.drv> <proto.prot>... [--seed N] [--steps N]
//   actdrv simulate  --replay <check-report.json> <driver.drv> <proto.prot>...
//   actdrv stats     <file.prot|file.decomp>...
//
// Exit codes: 0 clean, 1 verification failure, 2 usage/parse/resource
// error.

#include <chrono>
#include <deque>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "actdrv/cfg_opt.hpp"
#include "actdrv/io.hpp"
#include "actdrv/report.hpp"

using namespace actdrv;
using nlohmann::json;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct LoadedInputs {
  std::vector<InputFile> files;
  std::deque<std::string> contents;  // stable references across loads

  const std::string& load(const std::string& path) {
    contents.push_back(read_file(path));
    files.push_back({path, fnv1a_hex(contents.back())});
    return contents.back();
  }
};

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<Protocol> load_protocols(LoadedInputs& inputs,
                                     const std::vector<std::string>& paths) {
  std::vector<Protocol> protocols;
  for (const auto& path : paths) {
    protocols.push_back(parse_protocol(inputs.load(path)));
  }
  return protocols;
}

int cmd_validate(const std::vector<std::string>& paths, bool machine) {
  LoadedInputs inputs;
  bool errors = false;
  json out = json::array();
  std::vector<Protocol> parsed;
  for (const auto& path : paths) {
    json entry;
    entry["file"] = path;
    try {
      Protocol p = parse_protocol(inputs.load(path));
      auto diags = validate(p);
      errors |= has_errors(diags);
      json ds = json::array();
      for (const auto& d : diags) {
        ds.push_back(format_diagnostic(d));
        if (!machine) {
          std::cout << path << ": " << format_diagnostic(d) << "\n";
        }
      }
      entry["diagnostics"] = ds;
      parsed.push_back(std::move(p));
    } catch (const ParseError& e) {
      errors = true;
      Diagnostic d{Severity::Error, e.what(), e.loc()};
      entry["diagnostics"] = json::array({format_diagnostic(d)});
      if (!machine) {
        std::cout << path << ": " << format_diagnostic(d) << "\n";
      }
    }
    out.push_back(entry);
  }
  // Cross-protocol mailbox uniqueness for the whole set.
  std::string set_error;
  if (parsed.size() == paths.size()) {
    try {
      make_protocol_set(parsed);
    } catch (const ParseError& e) {
      errors = true;
      set_error = e.what();
      if (!machine) std::cout << "set: error: " << set_error << "\n";
    }
  }
  if (machine) {
    json doc = report_header("validate", inputs.files, json::object());
    doc["protocols"] = out;
    if (!set_error.empty()) doc["set_error"] = set_error;
    doc["ok"] = !errors;
    emit_json(doc);
  } else if (!errors) {
    std::cout << "ok\n";
  }
  return errors ? 1 : 0;
}

int cmd_decompose(const std::string& manifest, bool machine,
                  std::size_t budget) {
  Timer timer;
  LoadedInputs inputs;
  inputs.load(manifest);
  Decomposition d = load_decomposition(manifest);
  EquivOptions opts;
  opts.max_pair_states = budget;
  DecompositionReport report = check_decomposition(d, opts);
  if (machine) {
    json flags;
    flags["budget"] = budget;
    emit_json(decomp_report_json(d, report, inputs.files, flags));
  } else {
    std::cout << decomp_report_text(d, report, timer.ms());
  }
  return report.ok() ? 0 : 1;
}

struct CheckSetup {
  LoadedInputs inputs;
  DriverCfg cfg;
  ProtocolSet set;
  std::vector<RegionRewriteStats> regions;  // --cfg-opt on only
};

CheckSetup load_check_setup(const std::string& driver_path,
                            const std::vector<std::string>& protocol_paths,
                            bool cfg_opt, std::size_t inline_budget) {
  CheckSetup s;
  const std::string& driver_text = s.inputs.load(driver_path);
  std::vector<Protocol> protocols =
      load_protocols(s.inputs, protocol_paths);
  for (const auto& p : protocols) {
    auto diags = validate(p);
    if (has_errors(diags)) {
      throw ParseError("protocol '" + p.name + "': " + diags.front().message,
                       SourceLoc{});
    }
  }
  DriverProgram prog = parse_driver(driver_text, protocols);
  LowerOptions lopts;
  lopts.max_nodes = inline_budget;
  s.cfg = lower(prog, lopts);
  if (cfg_opt) {
    RewriteResult r = rewrite(s.cfg, find_regions(s.cfg));
    s.cfg = std::move(r.cfg);
    s.regions = std::move(r.regions);
  }
  s.set = s.cfg.protocols;
  return s;
}

json region_stats_json(const std::vector<RegionRewriteStats>& regions) {
  json out = json::array();
  for (const auto& r : regions) {
    out.push_back({{"await_node", r.await_node},
                   {"branches", r.branches},
                   {"paths_removed", r.paths_removed},
                   {"nodes_added", r.nodes_added},
                   {"skipped", r.skipped}});
  }
  return out;
}

int cmd_check(const std::string& driver_path,
              const std::vector<std::string>& protocol_paths, bool machine,
              bool cfg_opt, std::size_t product_budget,
              std::size_t inline_budget) {
  Timer timer;
  CheckSetup s = load_check_setup(driver_path, protocol_paths, cfg_opt,
                                  inline_budget);
  CheckOptions opts;
  opts.max_product_states = product_budget;
  CheckReport report = check_all(s.cfg, s.set, opts);
  if (machine) {
    json flags;
    flags["cfg_opt"] = cfg_opt;
    flags["product_budget"] = product_budget;
    flags["inline_budget"] = inline_budget;
    json doc =
        check_report_json(s.cfg.name, s.set, report, s.inputs.files, flags);
    if (cfg_opt) doc["cfg_opt_regions"] = region_stats_json(s.regions);
    emit_json(doc);
  } else {
    std::cout << check_report_text(s.cfg.name, s.set, report, timer.ms());
    for (const auto& r : s.regions) {
      std::cout << "  cfg-opt region at node " << r.await_node << ": "
                << r.branches << " correlated branches, ";
      if (r.skipped) {
        std::cout << "skipped (growth budget)\n";
      } else {
        std::cout << r.paths_removed << " paths removed, " << r.nodes_added
                  << " nodes added\n";
      }
    }
  }
  return report.any_fail() ? 1 : 0;
}

int cmd_simulate(const std::string& driver_path,
                 const std::vector<std::string>& protocol_paths, bool machine,
                 const SimOptions& sim_opts, const std::string& replay_path,
                 std::size_t inline_budget) {
  CheckSetup s = load_check_setup(driver_path, protocol_paths, false,
                                  inline_budget);
  if (!replay_path.empty()) {
    json doc = json::parse(read_file(replay_path));
    int replayed = 0, confirmed = 0;
    for (const auto& rv : doc.at("rules")) {
      if (rv.at("status").get<std::string>() != "FAIL") continue;
      Verdict v = verdict_from_json(s.set, rv);
      ++replayed;
      bool ok = validate_trace(s.cfg, s.set, v);
      confirmed += ok ? 1 : 0;
      std::cout << "replay " << rule_name(v.rule) << ": "
                << (ok ? "confirmed" : "NOT REPRODUCED") << "\n";
    }
    if (replayed == 0) {
      std::cout << "replay: no FAIL traces in report\n";
      return 0;
    }
    return confirmed == replayed ? 0 : 1;
  }

  SimulationResult result = run(s.cfg, s.set, sim_opts);
  if (machine) {
    json flags;
    flags["seed"] = sim_opts.seed;
    flags["steps"] = sim_opts.max_steps;
    flags["fairness_k"] = sim_opts.fairness_bound;
    flags["capacity_one"] = sim_opts.capacity_one;
    if (!sim_opts.irq_mailbox.empty()) flags["irq"] = sim_opts.irq_mailbox;
    emit_json(sim_report_json(s.cfg, s.set, result, s.inputs.files, flags));
  } else {
    std::cout << sim_report_text(s.set, result);
  }
  return result.status == SimStatus::Violation ? 1 : 0;
}

int cmd_stats(const std::vector<std::string>& paths, bool machine) {
  LoadedInputs inputs;
  json rows = json::array();
  std::vector<std::string> lines;
  for (const auto& path : paths) {
    if (path.size() > 7 && path.substr(path.size() - 7) == ".decomp") {
      Decomposition d = load_decomposition(path);
      inputs.load(path);
      rows.push_back({{"protocol", d.parent.name},
                      {"states", d.parent.num_states()},
                      {"transitions",
                       static_cast<int>(d.parent.transitions.size())},
                      {"subprotocols", static_cast<int>(d.parts.size())}});
      lines.push_back(d.parent.name + " " +
                      std::to_string(d.parent.num_states()) + " " +
                      std::to_string(d.parent.transitions.size()) + " " +
                      std::to_string(d.parts.size()));
    } else {
      Protocol p = parse_protocol(inputs.load(path));
      rows.push_back({{"protocol", p.name},
                      {"states", p.num_states()},
                      {"transitions", static_cast<int>(p.transitions.size())},
                      {"subprotocols", nullptr}});
      lines.push_back(p.name + " " + std::to_string(p.num_states()) + " " +
                      std::to_string(p.transitions.size()) + " -");
    }
  }
  if (machine) {
    json doc = report_header("stats", inputs.files, json::object());
    doc["rows"] = rows;
    emit_json(doc);
  } else {
    std::cout << "protocol #states #transitions #subprotocols\n";
    for (const auto& line : lines) std::cout << line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active driver protocol verification toolkit"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format: text|machine")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* validate_cmd = app.add_subcommand("validate", "validate protocols");
  std::vector<std::string> validate_paths;
  validate_cmd->add_option("files", validate_paths, "protocol files")
      ->required();

  auto* decompose_cmd =
      app.add_subcommand("decompose", "check a protocol decomposition");
  std::string manifest;
  std::size_t pair_budget = 1000000;
  decompose_cmd->add_option("manifest", manifest, ".decomp manifest")
      ->required();
  decompose_cmd->add_option("--max-pair-states", pair_budget,
                            "pair-state budget");

  auto* check_cmd = app.add_subcommand("check", "check the five rules");
  std::string check_driver;
  std::vector<std::string> check_protocols;
  std::string cfg_opt_flag = "off";
  std::size_t product_budget = 1000000;
  std::size_t inline_budget = 10000;
  check_cmd->add_option("driver", check_driver, "driver .drv file")
      ->required();
  check_cmd->add_option("protocols", check_protocols, "protocol files")
      ->required();
  check_cmd->add_option("--cfg-opt", cfg_opt_flag,
                        "correlated-branch rewrite: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  check_cmd->add_option("--max-product-states", product_budget,
                        "product state budget");
  check_cmd->add_option("--max-inline-nodes", inline_budget,
                        "lowering node budget");

  auto* sim_cmd = app.add_subcommand("simulate", "run the driver");
  std::string sim_driver, replay_path, irq_mailbox;
  std::vector<std::string> sim_protocols;
  SimOptions sim_opts;
  sim_cmd->add_option("driver", sim_driver, "driver .drv file")->required();
  sim_cmd->add_option("protocols", sim_protocols, "protocol files")
      ->required();
  sim_cmd->add_option("--seed", sim_opts.seed, "RNG seed");
  sim_cmd->add_option("--steps", sim_opts.max_steps, "step budget");
  sim_cmd->add_option("--fairness-k", sim_opts.fairness_bound,
                      "wrapper fairness bound");
  sim_cmd->add_flag("--capacity-one", sim_opts.capacity_one,
                    "mailboxes hold at most one message");
  sim_cmd->add_option("--irq", irq_mailbox,
                      "deliver this mailbox ahead of FIFO order");
  sim_cmd->add_option("--replay", replay_path,
                      "replay FAIL traces from a check report");

  auto* stats_cmd = app.add_subcommand("stats", "protocol size table");
  std::vector<std::string> stats_paths;
  stats_cmd->add_option("files", stats_paths, ".prot or .decomp files")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  bool machine = format == "machine";
  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_paths, machine);
    if (decompose_cmd->parsed()) {
      return cmd_decompose(manifest, machine, pair_budget);
    }
    if (check_cmd->parsed()) {
      return cmd_check(check_driver, check_protocols, machine,
                       cfg_opt_flag == "on", product_budget, inline_budget);
    }
    if (sim_cmd->parsed()) {
      sim_opts.irq_mailbox = irq_mailbox;
      return cmd_simulate(sim_driver, sim_protocols, machine, sim_opts,
                          replay_path, inline_budget);
    }
    if (stats_cmd->parsed()) return cmd_stats(stats_paths, machine);
  } catch (const ParseError& e) {
    std::cerr << "error";
    if (e.loc().line > 0) {
      std::cerr << " (line " << e.loc().line << ":" << e.loc().col << ")";
    }
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
