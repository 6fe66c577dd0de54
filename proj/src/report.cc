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

#include "dpmicro/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace dpmicro {

UtilityReport make_report(const Dataset& original, const Release& release,
                          const MechanismConfig& config, const MetricConfig& metrics) {
  UtilityReport r;
  r.params = config;
  r.num_records = original.num_records();
  for (const auto& attr : original.schema().attributes()) r.attributes.push_back(attr.name);
  r.epsilon_per_attribute =
      config.epsilon / static_cast<double>(std::max<std::size_t>(1, r.attributes.size()));
  for (const auto& plan : release.noise) r.noise_scales.push_back(plan.scale);

  const MetricSummary re = relative_error(original, release.data, metrics);
  r.re_per_attribute = re.per_attribute;
  r.re_dataset = re.dataset;
  const MetricSummary js = jsd(original, release.data, metrics);
  r.jsd_per_attribute = js.per_attribute;
  r.jsd_dataset = js.dataset;
  r.variance_delta_per_attribute = variance_delta(original, release.data);
  return r;
}

nlohmann::json to_json(const UtilityReport& report) {
  nlohmann::json params;
  params["method"] = std::string(to_string(report.params.method));
  params["k"] = report.params.k;
  params["epsilon_total"] = report.params.epsilon;
  params["epsilon_per_attribute"] = report.epsilon_per_attribute;
  params["m"] = report.attributes.size();
  params["n"] = report.num_records;
  params["seed"] = report.params.seed;
  params["clamp"] = report.params.clamp;
  params["candidates"] = report.params.candidates == CandidateDomain::kFullTaxonomy
                             ? "full-taxonomy"
                             : "spanned-subtree";

  nlohmann::json re = nlohmann::json::object();
  nlohmann::json js = nlohmann::json::object();
  nlohmann::json var = nlohmann::json::object();
  nlohmann::json noise = nlohmann::json::object();
  for (std::size_t a = 0; a < report.attributes.size(); ++a) {
    const std::string& name = report.attributes[a];
    re[name] = report.re_per_attribute[a];
    js[name] = report.jsd_per_attribute[a];
    if (report.variance_delta_per_attribute[a]) {
      var[name] = *report.variance_delta_per_attribute[a];
    } else {
      var[name] = nullptr;
    }
    if (a < report.noise_scales.size()) noise[name] = report.noise_scales[a];
  }
  params["noise_scale"] = noise;

  nlohmann::json out;
  out["params"] = params;
  out["re"] = {{"per_attribute", re}, {"dataset", report.re_dataset}};
  out["jsd"] = {{"per_attribute", js}, {"dataset", report.jsd_dataset}};
  out["variance_delta"] = var;
  return out;
}

std::string report_csv_header() { return "method,k,epsilon,m,re,jsd"; }

std::string to_csv_row(const UtilityReport& report) {
  return std::string(to_string(report.params.method)) + "," +
         std::to_string(report.params.k) + "," + format_real(report.params.epsilon) + "," +
         std::to_string(report.attributes.size()) + "," + format_real(report.re_dataset) +
         "," + format_real(report.jsd_dataset);
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace dpmicro
