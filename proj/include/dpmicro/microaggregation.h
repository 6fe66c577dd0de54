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

// Fixed-size microaggregation over a total order.
//
// Records are stably sorted (ties by original index), then cut into
// floor(n/k) runs of consecutive records: the first floor(n/k) - 1 runs hold
// exactly k records and the last run absorbs the remainder, so it holds
// between k and 2k - 1 records.
//
// individual_ranking does this attribute by attribute. multivariate_baseline
// does it once for whole records, ordered by a data-independent key.

#ifndef DPMICRO_MICROAGGREGATION_H_
#define DPMICRO_MICROAGGREGATION_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dpmicro/dataset.h"
#include "dpmicro/taxonomy.h"
#include "json.hpp"

namespace dpmicro {

class Partition {
 public:
  Partition() = default;
  // `order` lists record indices from smallest to largest.
  Partition(std::vector<std::size_t> order, std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t num_records() const { return order_.size(); }
  std::size_t num_clusters() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

  std::span<const std::size_t> order() const { return order_; }
  // Record indices of cluster c, in sorted order.
  std::span<const std::size_t> members(std::size_t c) const;
  std::size_t cluster_size(std::size_t c) const { return offsets_[c + 1] - offsets_[c]; }
  // Cluster id of every record, in original record order.
  std::span<const std::size_t> assignments() const { return assignments_; }

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> assignments_;
};

// Indices 0..n-1 stably sorted by key.
std::vector<std::size_t> stable_order(std::span<const double> key);

struct ClusterPlan {
  std::string attribute;
  Partition partition;
  // One centroid per cluster: means for numeric attributes, taxonomy nodes
  // for categorical ones.
  std::variant<std::vector<double>, std::vector<NodeId>> centroids;

  std::span<const double> numeric_centroids() const {
    return std::get<std::vector<double>>(centroids);
  }
  std::span<const NodeId> categorical_centroids() const {
    return std::get<std::vector<NodeId>>(centroids);
  }
};

// Throws InvalidArgument unless 1 <= k <= n.
void check_cluster_size(std::size_t k, std::size_t n);

ClusterPlan individual_ranking(std::span<const double> column, std::size_t k,
                               std::string attribute = {});

// Categorical variant: records ordered by categorical_order_key, centroids
// by marginality_centroid over each cluster's multiset.
ClusterPlan individual_ranking(const Taxonomy& taxonomy,
                               std::span<const NodeId> column, std::size_t k,
                               std::string attribute = {});

// Rank of every distinct value. The most marginal value (ties: smallest
// label) gets rank 0; the rest follow by distance to it, ties by label.
// Marginality is taken against the set of distinct values present.
std::unordered_map<NodeId, std::size_t> categorical_order_key(
    const Taxonomy& taxonomy, std::span<const NodeId> values);

// Per-record values after replacing each record by its cluster centroid.
std::vector<double> centroid_column(const ClusterPlan& plan);
std::vector<NodeId> centroid_labels(const ClusterPlan& plan);

struct MultivariatePlan {
  Partition partition;
  std::vector<std::vector<double>> centroids;  // [attribute][cluster]
  std::string order_key;
};

// Records ordered by sum_i (x_i - lower_i) / (upper_i - lower_i), ties by
// the raw values in attribute order, then by record index. Numeric data only.
MultivariatePlan multivariate_baseline(const Dataset& data, std::size_t k);

// Diagnostic dump: k, cluster sizes, centroids.
nlohmann::json to_json(const ClusterPlan& plan, const Taxonomy* taxonomy = nullptr);

}  // namespace dpmicro

#endif  // DPMICRO_MICROAGGREGATION_H_
