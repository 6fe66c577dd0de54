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

// Utility metrics comparing an original dataset with a masked version of
// the same shape. Records correspond by position; domain bounds, taxonomy
// and binning come from the original's schema.

#ifndef DPMICRO_METRICS_H_
#define DPMICRO_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpmicro/dataset.h"

namespace dpmicro {

struct MetricConfig {
  // sanity_bound = (upper - lower) / sanity_divisor
  int sanity_divisor = 100;
  // Equal-width bins over [lower, upper] for continuous numeric attributes.
  // Discrete numeric attributes (schema `discrete`) get one bin per integer
  // and categorical ones one bin per taxonomy node.
  int numeric_bins = 100;
};

struct MetricSummary {
  std::vector<double> per_attribute;  // aligned with the schema
  double dataset = 0.0;               // unweighted mean over attributes
};

// Numeric cells: |a - a'| / max(sanity_bound, |a|). Categorical cells: the
// semantic distance between the labels.
MetricSummary relative_error(const Dataset& original, const Dataset& masked,
                             const MetricConfig& config = {});

// |var(A') - var(A)| / var(A) with population variances. nullopt for
// categorical attributes and for attributes with zero original variance.
std::vector<std::optional<double>> variance_delta(const Dataset& original,
                                                  const Dataset& masked);

// Base-2 Jensen-Shannon divergence of the attribute histograms.
MetricSummary jsd(const Dataset& original, const Dataset& masked,
                  const MetricConfig& config = {});

// Normalized histogram of one attribute using the binning rules above.
// `bin_schema` supplies the bounds/taxonomy; out-of-domain values go to the
// nearest edge bin.
std::vector<double> histogram(const Dataset& data, std::size_t attr,
                              const AttributeSchema& bin_schema,
                              const MetricConfig& config = {});

// JS divergence of two probability vectors of equal length, base-2 logs,
// with 0 * log(0 / x) = 0.
double jensen_shannon(std::span<const double> p, std::span<const double> q);

}  // namespace dpmicro

#endif  // DPMICRO_METRICS_H_
