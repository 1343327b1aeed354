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

#ifndef ACTDRV_REPORT_HPP_
#define ACTDRV_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "actdrv/checker.hpp"
#include "actdrv/decompose.hpp"
#include "actdrv/runtime.hpp"

namespace actdrv {

// Machine-readable reports: one self-delimited JSON document per run,
// keys sorted, no volatile fields (wall time goes to the text output
// only), so identical inputs and flags give byte-identical output.

inline constexpr const char* kToolName = "actdrv";
inline constexpr const char* kToolVersion = "0.1.0";

std::string fnv1a_hex(std::string_view data);

struct InputFile {
  std::string path;
  std::string digest;
};

nlohmann::json report_header(const std::string& command,
                             const std::vector<InputFile>& inputs,
                             const nlohmann::json& flags);

nlohmann::json trace_json(const ProtocolSet& set,
                          const CounterexampleTrace& trace);
CounterexampleTrace trace_from_json(const ProtocolSet& set,
                                    const nlohmann::json& j);

nlohmann::json verdict_json(const ProtocolSet& set, const Verdict& v);
Verdict verdict_from_json(const ProtocolSet& set, const nlohmann::json& j);

nlohmann::json check_report_json(const std::string& driver_name,
                                 const ProtocolSet& set,
                                 const CheckReport& report,
                                 const std::vector<InputFile>& inputs,
                                 const nlohmann::json& flags);

std::string check_report_text(const std::string& driver_name,
                              const ProtocolSet& set,
                              const CheckReport& report, double wall_ms);

nlohmann::json decomp_report_json(const Decomposition& d,
                                  const DecompositionReport& report,
                                  const std::vector<InputFile>& inputs,
                                  const nlohmann::json& flags);

std::string decomp_report_text(const Decomposition& d,
                               const DecompositionReport& report,
                               double wall_ms);

nlohmann::json sim_report_json(const DriverCfg& cfg, const ProtocolSet& set,
                               const SimulationResult& result,
                               const std::vector<InputFile>& inputs,
                               const nlohmann::json& flags);

std::string sim_report_text(const ProtocolSet& set,
                            const SimulationResult& result);

}  // namespace actdrv

#endif  // ACTDRV_REPORT_HPP_
