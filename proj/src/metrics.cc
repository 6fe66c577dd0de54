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

#include "dpmicro/metrics.h"

#include <cmath>

#include "dpmicro/error.h"
#include "dpmicro/kernels/kernels.h"

namespace dpmicro {

namespace {

void CheckSameShape(const Dataset& original, const Dataset& masked) {
  if (original.num_records() != masked.num_records() ||
      original.num_attributes() != masked.num_attributes()) {
    throw InvalidArgument(
        "metric inputs differ in shape: " + std::to_string(original.num_records()) +
        "x" + std::to_string(original.num_attributes()) + " vs " +
        std::to_string(masked.num_records()) + "x" +
        std::to_string(masked.num_attributes()));
  }
  for (std::size_t a = 0; a < original.num_attributes(); ++a) {
    const auto& x = original.schema()[a];
    const auto& y = masked.schema()[a];
    if (x.name != y.name || x.kind != y.kind) {
      throw InvalidArgument("metric inputs differ in attribute " + std::to_string(a) +
                            " ('" + x.name + "' vs '" + y.name + "')");
    }
    if (!x.is_numeric() && x.taxonomy.get() != y.taxonomy.get()) {
      throw InvalidArgument("attribute '" + x.name + "' uses different taxonomies");
    }
  }
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace

MetricSummary relative_error(const Dataset& original, const Dataset& masked,
                             const MetricConfig& config) {
  CheckSameShape(original, masked);
  if (config.sanity_divisor <= 0) throw InvalidArgument("sanity_divisor must be positive");
  const std::size_t n = original.num_records();
  if (n == 0) throw InvalidArgument("relative error of an empty dataset");
  MetricSummary out;
  for (std::size_t a = 0; a < original.num_attributes(); ++a) {
    const AttributeSchema& attr = original.schema()[a];
    double sum = 0.0;
    if (attr.is_numeric()) {
      const double sanity = attr.sensitivity() / config.sanity_divisor;
      sum = kernels::active().relative_error_sum(original.numeric(a).data(),
                                                 masked.numeric(a).data(), n, sanity);
    } else {
      const auto x = original.categorical(a);
      const auto y = masked.categorical(a);
      for (std::size_t r = 0; r < n; ++r) sum += attr.taxonomy->distance(x[r], y[r]);
    }
    out.per_attribute.push_back(sum / static_cast<double>(n));
  }
  out.dataset = Mean(out.per_attribute);
  return out;
}

std::vector<std::optional<double>> variance_delta(const Dataset& original,
                                                  const Dataset& masked) {
  CheckSameShape(original, masked);
  std::vector<std::optional<double>> out;
  for (std::size_t a = 0; a < original.num_attributes(); ++a) {
    if (!original.schema()[a].is_numeric()) {
      out.emplace_back();
      continue;
    }
    const double before = kernels::variance(original.numeric(a));
    if (before == 0.0) {
      out.emplace_back();
      continue;
    }
    const double after = kernels::variance(masked.numeric(a));
    out.emplace_back(std::fabs(after - before) / std::fabs(before));
  }
  return out;
}

std::vector<double> histogram(const Dataset& data, std::size_t attr,
                              const AttributeSchema& bin_schema,
                              const MetricConfig& config) {
  const std::size_t n = data.num_records();
  std::vector<double> counts;
  if (!bin_schema.is_numeric()) {
    counts.assign(bin_schema.taxonomy->size(), 0.0);
    for (NodeId v : data.categorical(attr)) counts[v] += 1.0;
  } else {
    double lo = bin_schema.lower;
    double inv_width = 0.0;
    std::int32_t bins = 0;
    if (bin_schema.discrete) {
      const double first = std::ceil(bin_schema.lower);
      const double last = std::floor(bin_schema.upper);
      bins = static_cast<std::int32_t>(last - first) + 1;
      if (bins < 1) throw InvalidArgument("discrete attribute '" + bin_schema.name +
                                          "' has no integer in its domain");
      lo = first - 0.5;  // bin i covers [first + i - 1/2, first + i + 1/2)
      inv_width = 1.0;
    } else {
      if (config.numeric_bins < 1) throw InvalidArgument("numeric_bins must be >= 1");
      bins = config.numeric_bins;
      inv_width = static_cast<double>(bins) / bin_schema.sensitivity();
    }
    std::vector<std::int32_t> index(n);
    kernels::active().bin_index(data.numeric(attr).data(), n, lo, inv_width, bins,
                                index.data());
    counts.assign(static_cast<std::size_t>(bins), 0.0);
    for (std::int32_t i : index) counts[static_cast<std::size_t>(i)] += 1.0;
  }
  if (n > 0) {
    for (double& c : counts) c /= static_cast<double>(n);
  }
  return counts;
}

double jensen_shannon(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("histograms differ in length");
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mid = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) kl_p += p[i] * std::log2(p[i] / mid);
    if (q[i] > 0) kl_q += q[i] * std::log2(q[i] / mid);
  }
  const double d = 0.5 * kl_p + 0.5 * kl_q;
  // Rounding can push identical inputs a hair below zero or disjoint ones
  // a hair above one.
  return std::fmin(1.0, std::fmax(0.0, d));
}

MetricSummary jsd(const Dataset& original, const Dataset& masked,
                  const MetricConfig& config) {
  CheckSameShape(original, masked);
  if (original.num_records() == 0) throw InvalidArgument("JSD of an empty dataset");
  MetricSummary out;
  for (std::size_t a = 0; a < original.num_attributes(); ++a) {
    const AttributeSchema& attr = original.schema()[a];
    const auto p = histogram(original, a, attr, config);
    const auto q = histogram(masked, a, attr, config);
    out.per_attribute.push_back(jensen_shannon(p, q));
  }
  out.dataset = Mean(out.per_attribute);
  return out;
}

}  // namespace dpmicro
