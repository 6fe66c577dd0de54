// Copyright 2026 The dpmicro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single releases and experiment sweeps on top of the mechanisms and
// metrics, plus their file formats.

#ifndef DPMICRO_HARNESS_H_
#define DPMICRO_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpmicro/dataset.h"
#include "dpmicro/mechanisms.h"
#include "dpmicro/metrics.h"
#include "dpmicro/report.h"

namespace dpmicro {

struct ReleaseResult {
  Release release;
  UtilityReport report;
};

// Releases `data` (restricted to `attrs` when non-empty) and evaluates it
// against the same restriction of the original.
ReleaseResult run_release(const Dataset& data, const MechanismConfig& config,
                          const std::vector<std::string>& attrs = {},
                          const MetricConfig& metrics = {});

struct ReleaseJob {
  std::filesystem::path data;
  std::filesystem::path schema;
  MechanismConfig config;
  std::vector<std::string> attrs;
  std::filesystem::path out;  // anonymized CSV; the report goes next to it
};

// Writes `out` and report_path(out). Returns the report.
UtilityReport run_release(const ReleaseJob& job);

// <out without extension>.report.json
std::filesystem::path report_path(const std::filesystem::path& out);
// <out without extension>.runs.json
std::filesystem::path sidecar_path(const std::filesystem::path& out);

struct SweepSpec {
  std::filesystem::path data;
  std::filesystem::path schema;
  std::vector<Method> methods;
  std::vector<std::size_t> k_values;
  std::vector<double> epsilon_values;
  // Empty means a single subset holding every schema attribute.
  std::vector<std::vector<std::string>> attribute_subsets;
  std::size_t runs = 10;
  std::uint64_t master_seed = 0;
  std::filesystem::path output;
  bool clamp = true;
  std::size_t jobs = 1;  // worker threads across cells
  MetricConfig metrics;
};

struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  UtilityReport report;
};

struct SweepCell {
  Method method = Method::kIrDp;
  std::size_t k = 1;
  double epsilon = 1.0;
  std::vector<std::string> attributes;
  bool ok = false;
  std::string error;
  std::vector<RunRecord> runs;

  // Means over runs; nan for a failed cell.
  double re_mean = 0.0;
  double jsd_mean = 0.0;
  // nullopt where no run defined the delta.
  std::vector<std::optional<double>> variance_delta_mean;
};

struct SweepReport {
  std::uint64_t master_seed = 0;
  std::size_t runs = 0;
  std::vector<SweepCell> cells;  // grid order: method, k, epsilon, subset
};

// Throws InvalidArgument for an unusable spec before anything runs.
void validate_sweep(const SweepSpec& spec, const Schema& schema);

std::uint64_t cell_seed(std::uint64_t master_seed, Method method, std::size_t k,
                        double epsilon, const std::vector<std::string>& subset,
                        std::size_t run);

// In-memory sweep; `spec.data`, `spec.schema` and `spec.output` are unused.
SweepReport run_sweep(const SweepSpec& spec, const Dataset& data);

// Loads the inputs, runs the sweep and writes spec.output plus its sidecar.
SweepReport run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepCsvHeader =
    "method,k,epsilon,m,re_mean,jsd_mean,run_count";

void write_sweep_csv(const SweepReport& report, std::ostream& out);
nlohmann::json sweep_sidecar(const SweepReport& report);

}  // namespace dpmicro

#endif  // DPMICRO_HARNESS_H_
