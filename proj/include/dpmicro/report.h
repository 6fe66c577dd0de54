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

#ifndef DPMICRO_REPORT_H_
#define DPMICRO_REPORT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpmicro/mechanisms.h"
#include "dpmicro/metrics.h"

namespace dpmicro {

// Metrics of one release plus every parameter that produced it.
struct UtilityReport {
  MechanismConfig params;
  std::size_t num_records = 0;
  std::vector<std::string> attributes;
  double epsilon_per_attribute = 0.0;
  std::vector<double> noise_scales;  // per attribute; empty for noise-free methods

  std::vector<double> re_per_attribute;
  double re_dataset = 0.0;
  std::vector<double> jsd_per_attribute;
  double jsd_dataset = 0.0;
  std::vector<std::optional<double>> variance_delta_per_attribute;
};

UtilityReport make_report(const Dataset& original, const Release& release,
                          const MechanismConfig& config,
                          const MetricConfig& metrics = {});

nlohmann::json to_json(const UtilityReport& report);

// Flat form: method,k,epsilon,m,re,jsd
std::string report_csv_header();
std::string to_csv_row(const UtilityReport& report);

// Shortest round-trip decimal form; "nan"/"inf"/"-inf" for non-finite values.
std::string format_real(double value);

}  // namespace dpmicro

#endif  // DPMICRO_REPORT_H_
