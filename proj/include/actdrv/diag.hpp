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

#ifndef ACTDRV_DIAG_HPP_
#define ACTDRV_DIAG_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace actdrv {

struct SourceLoc {
  int line = 0;  // 1-based; 0 = no location
  int col = 0;

  bool operator==(const SourceLoc&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceLoc loc;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

std::string format_diagnostic(const Diagnostic& d);

/// Input text did not parse or failed a binding check.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceLoc loc)
      : std::runtime_error(msg), loc_(loc) {}

  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

/// A configured exploration budget was exceeded. Never a silent pass:
/// callers must surface this as a resource error (CLI exit code 2).
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& msg, std::size_t limit,
                     std::size_t reached)
      : std::runtime_error(msg), limit_(limit), reached_(reached) {}

  std::size_t limit() const { return limit_; }
  std::size_t reached() const { return reached_; }

 private:
  std::size_t limit_;
  std::size_t reached_;
};

}  // namespace actdrv

#endif  // ACTDRV_DIAG_HPP_
