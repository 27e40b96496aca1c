// Copyright 2026 The cobound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COBOUND_PIPELINES_H_
#define COBOUND_PIPELINES_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobound/serialize.h"

namespace cobound {

// Malformed or incomplete experiment description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Names accepted in the "pipeline" field.
const std::vector<std::string>& PipelineNames();

// Runs the pipeline selected by config["pipeline"]. Config problems raise
// ConfigError; module errors propagate unchanged. The report carries an
// "inequalities" list of {name, lhs, rel, rhs, arith, holds} entries and
// "ok" = every entry holds.
Json RunExperiment(const Json& config);

// Evaluates lhs rel rhs from the serialized strings. arith is "exact" (Surd
// arithmetic) or "decimal" (floating at the working precision).
bool EvaluateInequality(const std::string& lhs, const std::string& rel, const std::string& rhs,
                        const std::string& arith);

struct VerifyResult {
  size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Recomputes every inequality from its serialized values, and for the
// joint-approx, l1-transfer and slow-growth reports recomputes the errors
// and norms from the serialized maps and functions.
VerifyResult VerifyReport(const Json& report);

enum class Format { kJson, kCsv, kSvg };
// Comma-separated subset of {json, csv, svg}; unknown names raise ConfigError.
std::vector<Format> ParseFormats(const std::string& text);

bool HasSweep(const Json& report);
// `n,norm,witness`, one row per sweep entry.
std::string SweepCsv(const Json& report);
// Log-log plot of the sweep norms.
std::string SweepSvg(const Json& report);

// Writes report.json, and sweep.csv / sweep.svg when the report has a sweep.
// Returns the written file names.
std::vector<std::string> EmitOutputs(const Json& report, const std::filesystem::path& dir,
                                     const std::vector<Format>& formats);

}  // namespace cobound

#endif  // COBOUND_PIPELINES_H_
