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

#include "dpmicro/microaggregation.h"

#include <algorithm>
#include <numeric>

#include "dpmicro/error.h"
#include "dpmicro/kernels/kernels.h"

namespace dpmicro {

namespace {

// Pinned to the members' range so that rounding never moves a centroid
// outside it (k equal values give exactly that value back).
double ClusterMean(std::span<const double> members) {
  const double mean = kernels::sum(members) / static_cast<double>(members.size());
  const auto [lo, hi] = std::minmax_element(members.begin(), members.end());
  return std::clamp(mean, *lo, *hi);
}

}  // namespace

Partition::Partition(std::vector<std::size_t> order, std::size_t k)
    : k_(k), order_(std::move(order)) {
  const std::size_t n = order_.size();
  check_cluster_size(k, n);
  const std::size_t clusters = n / k;
  offsets_.reserve(clusters + 1);
  for (std::size_t c = 0; c < clusters; ++c) offsets_.push_back(c * k);
  offsets_.push_back(n);  // last cluster takes the remainder
  assignments_.assign(n, 0);
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t i = offsets_[c]; i < offsets_[c + 1]; ++i) {
      assignments_[order_[i]] = c;
    }
  }
}

std::span<const std::size_t> Partition::members(std::size_t c) const {
  return std::span<const std::size_t>(order_).subspan(offsets_[c],
                                                      offsets_[c + 1] - offsets_[c]);
}

std::vector<std::size_t> stable_order(std::span<const double> key) {
  std::vector<std::size_t> order(key.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [key](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  return order;
}

void check_cluster_size(std::size_t k, std::size_t n) {
  if (k < 1) throw InvalidArgument("cluster size k must be at least 1");
  if (k > n) {
    throw InvalidArgument("cluster size k = " + std::to_string(k) +
                          " exceeds the number of records n = " + std::to_string(n));
  }
}

ClusterPlan individual_ranking(std::span<const double> column, std::size_t k,
                               std::string attribute) {
  check_cluster_size(k, column.size());
  ClusterPlan plan;
  plan.attribute = std::move(attribute);
  plan.partition = Partition(stable_order(column), k);

  const Partition& p = plan.partition;
  std::vector<double> sorted(column.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = column[p.order()[i]];

  std::vector<double> centroids(p.num_clusters());
  std::size_t start = 0;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const std::size_t size = p.cluster_size(c);
    centroids[c] = ClusterMean(std::span<const double>(sorted).subspan(start, size));
    start += size;
  }
  plan.centroids = std::move(centroids);
  return plan;
}

std::unordered_map<NodeId, std::size_t> categorical_order_key(
    const Taxonomy& taxonomy, std::span<const NodeId> values) {
  if (values.empty()) throw InvalidArgument("order key of an empty value set");
  const ValueCounts counts(values);
  std::vector<NodeId> distinct;
  for (const auto& entry : counts.entries()) {
    if (entry.first < 0 || static_cast<std::size_t>(entry.first) >= taxonomy.size()) {
      throw InvalidArgument("order key: node outside taxonomy");
    }
    distinct.push_back(entry.first);
  }
  const MarginalityTable table = marginality_table(taxonomy, distinct);

  std::size_t most = 0;
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    const int cmp = compare_scores(table.scores[i], table.scores[most]);
    if (cmp > 0 ||
        (cmp == 0 && taxonomy.label(distinct[i]) < taxonomy.label(distinct[most]))) {
      most = i;
    }
  }
  const NodeId anchor = distinct[most];

  std::vector<std::pair<double, NodeId>> keyed;
  keyed.reserve(distinct.size());
  for (NodeId v : distinct) keyed.emplace_back(taxonomy.distance(v, anchor), v);
  std::sort(keyed.begin(), keyed.end(), [&taxonomy](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return taxonomy.label(a.second) < taxonomy.label(b.second);
  });

  std::unordered_map<NodeId, std::size_t> rank;
  for (std::size_t i = 0; i < keyed.size(); ++i) rank.emplace(keyed[i].second, i);
  return rank;
}

ClusterPlan individual_ranking(const Taxonomy& taxonomy,
                               std::span<const NodeId> column, std::size_t k,
                               std::string attribute) {
  check_cluster_size(k, column.size());
  const auto rank = categorical_order_key(taxonomy, column);
  std::vector<double> key(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    key[i] = static_cast<double>(rank.at(column[i]));
  }

  ClusterPlan plan;
  plan.attribute = std::move(attribute);
  plan.partition = Partition(stable_order(key), k);

  const Partition& p = plan.partition;
  std::vector<NodeId> centroids(p.num_clusters());
  std::vector<NodeId> members;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    members.clear();
    for (std::size_t r : p.members(c)) members.push_back(column[r]);
    centroids[c] = marginality_centroid(taxonomy, members);
  }
  plan.centroids = std::move(centroids);
  return plan;
}

std::vector<double> centroid_column(const ClusterPlan& plan) {
  const auto centroids = plan.numeric_centroids();
  const auto assignments = plan.partition.assignments();
  std::vector<double> out(assignments.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = centroids[assignments[r]];
  return out;
}

std::vector<NodeId> centroid_labels(const ClusterPlan& plan) {
  const auto centroids = plan.categorical_centroids();
  const auto assignments = plan.partition.assignments();
  std::vector<NodeId> out(assignments.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = centroids[assignments[r]];
  return out;
}

MultivariatePlan multivariate_baseline(const Dataset& data, std::size_t k) {
  const Schema& schema = data.schema();
  if (!schema.all_numeric()) {
    throw InvalidArgument("multivariate baseline supports numeric attributes only");
  }
  const std::size_t n = data.num_records();
  const std::size_t m = data.num_attributes();
  check_cluster_size(k, n);

  std::vector<double> key(n, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    const auto col = data.numeric(a);
    kernels::active().accumulate_scaled(key.data(), col.data(), n, schema[a].lower,
                                        1.0 / schema[a].sensitivity());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (key[x] != key[y]) return key[x] < key[y];
    for (std::size_t a = 0; a < m; ++a) {
      const double vx = data.numeric(a)[x];
      const double vy = data.numeric(a)[y];
      if (vx != vy) return vx < vy;
    }
    return false;
  });

  MultivariatePlan plan;
  plan.order_key = "normalized L1 distance to the lower domain corner";
  plan.partition = Partition(std::move(order), k);
  const Partition& p = plan.partition;

  std::vector<double> sorted(n);
  plan.centroids.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto col = data.numeric(a);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = col[p.order()[i]];
    auto& centroids = plan.centroids[a];
    centroids.resize(p.num_clusters());
    std::size_t start = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const std::size_t size = p.cluster_size(c);
      centroids[c] = ClusterMean(std::span<const double>(sorted).subspan(start, size));
      start += size;
    }
  }
  return plan;
}

nlohmann::json to_json(const ClusterPlan& plan, const Taxonomy* taxonomy) {
  nlohmann::json out;
  out["attribute"] = plan.attribute;
  out["k"] = plan.partition.k();
  std::vector<std::size_t> sizes;
  for (std::size_t c = 0; c < plan.partition.num_clusters(); ++c) {
    sizes.push_back(plan.partition.cluster_size(c));
  }
  out["cluster_sizes"] = sizes;
  if (const auto* numeric = std::get_if<std::vector<double>>(&plan.centroids)) {
    out["centroids"] = *numeric;
  } else {
    nlohmann::json labels = nlohmann::json::array();
    for (NodeId id : std::get<std::vector<NodeId>>(plan.centroids)) {
      if (taxonomy) {
        labels.push_back(taxonomy->label(id));
      } else {
        labels.push_back(id);
      }
    }
    out["centroids"] = labels;
  }
  return out;
}

}  // namespace dpmicro
