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

#include "dpmicro/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dpmicro/error.h"
#include "dpmicro/kernels/kernels.h"
#include "dpmicro/microaggregation.h"

namespace dpmicro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckBudgetMatches(const PrivacyBudget& budget, const Dataset& data) {
  if (budget.m() != data.num_attributes()) {
    throw InvalidArgument("budget is split over m = " + std::to_string(budget.m()) +
                          " attributes but the dataset has " +
                          std::to_string(data.num_attributes()));
  }
}

// Adds one draw per cluster to the cluster centroids, clamps, and spreads
// the results back to records.
NumericColumn SpreadNoisyCentroids(std::span<const double> centroids,
                                   std::span<const double> draws,
                                   const Partition& partition,
                                   const AttributeSchema& attr, bool clamp) {
  std::vector<double> noisy(centroids.size());
  kernels::active().add_clamp(centroids.data(), draws.data(), centroids.size(),
                              clamp ? attr.lower : -kInf, clamp ? attr.upper : kInf,
                              noisy.data());
  NumericColumn out(partition.num_records());
  const auto assignments = partition.assignments();
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = noisy[assignments[r]];
  return out;
}

Dataset Assemble(const Dataset& data, std::vector<Column> columns, bool bounded) {
  if (bounded) return Dataset(data.schema(), std::move(columns));
  return Dataset::Unbounded(data.schema(), std::move(columns));
}

}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon_total, std::size_t m)
    : epsilon_total_(epsilon_total), m_(m) {
  if (!(epsilon_total > 0) || !std::isfinite(epsilon_total)) {
    throw InvalidArgument("epsilon must be positive and finite");
  }
  if (m < 1) throw InvalidArgument("budget needs at least one attribute");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kIrDp: return "ir-dp";
    case Method::kPlainLaplace: return "plain-laplace";
    case Method::kMvDp: return "mv-dp";
    case Method::kIrOnly: return "ir-only";
    case Method::kMvOnly: return "mv-only";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kIrDp, Method::kPlainLaplace, Method::kMvDp,
                   Method::kIrOnly, Method::kMvOnly}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected ir-dp, plain-laplace, mv-dp, ir-only, mv-only)");
}

bool is_private(Method method) {
  return method == Method::kIrDp || method == Method::kPlainLaplace ||
         method == Method::kMvDp;
}

double laplace_from_uniform(double u, double scale) {
  if (!(scale > 0)) throw InvalidArgument("Laplace scale must be positive");
  if (!(u > 0 && u < 1)) throw InvalidArgument("uniform draw must lie in (0, 1)");
  if (u == 0.5) return 0.0;
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double laplace_sample(double scale, Rng& rng) {
  return laplace_from_uniform(rng.Uniform(), scale);
}

double ir_dp_scale(double sensitivity, double k, const PrivacyBudget& budget) {
  return sensitivity / (k * budget.epsilon_per_attribute());
}

double plain_laplace_scale(double sensitivity, const PrivacyBudget& budget) {
  return sensitivity / budget.epsilon_per_attribute();
}

double mv_dp_scale(double sensitivity, double n, double k, double epsilon_total) {
  return (n / k) * sensitivity / (k * epsilon_total);
}

double crossover_k(double n, double m) { return n / m; }

std::vector<NodeId> candidate_set(const Taxonomy& t, const ValueCounts& cluster,
                                  CandidateDomain domain) {
  if (domain == CandidateDomain::kSpannedSubtree) return spanned_subtree(t, cluster);
  std::vector<NodeId> all(t.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
  return all;
}

NodeId exponential_mechanism_centroid(const Taxonomy& t, const ValueCounts& cluster,
                                      double epsilon, double sensitivity_q, Rng& rng,
                                      CandidateDomain domain) {
  if (cluster.empty()) throw InvalidArgument("exponential mechanism on an empty cluster");
  if (!(epsilon > 0) || std::isnan(epsilon)) {
    throw InvalidArgument("exponential mechanism needs epsilon > 0");
  }
  if (!(sensitivity_q > 0)) {
    throw InvalidArgument("exponential mechanism needs a positive quality sensitivity");
  }
  const std::vector<NodeId> candidates = candidate_set(t, cluster, domain);
  std::vector<double> logw(candidates.size());
  const double factor = epsilon / (2.0 * sensitivity_q);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    logw[i] = -factor * marginality(t, cluster, candidates[i]);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  const double target = rng.Uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cumulative += logw[i];
    if (target < cumulative) return candidates[i];
  }
  return candidates.back();
}

NodeId exponential_mechanism_centroid(const Taxonomy& t, std::span<const NodeId> cluster,
                                      double epsilon, double sensitivity_q, Rng& rng,
                                      CandidateDomain domain) {
  return exponential_mechanism_centroid(t, ValueCounts(cluster), epsilon,
                                        sensitivity_q, rng, domain);
}

Release ir_dp_release(const Dataset& data, std::size_t k, const PrivacyBudget& budget,
                      std::uint64_t seed, const ReleaseOptions& options) {
  CheckBudgetMatches(budget, data);
  check_cluster_size(k, data.num_records());
  const Schema& schema = data.schema();
  Release out;
  std::vector<Column> columns;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const AttributeSchema& attr = schema[a];
    Rng rng = Rng::Substream(seed, a);
    NoisePlan noise{attr.name, 0.0, {}};
    if (attr.is_numeric()) {
      const ClusterPlan plan = individual_ranking(data.numeric(a), k, attr.name);
      noise.scale = ir_dp_scale(attr.sensitivity(), static_cast<double>(k), budget);
      noise.draws.resize(plan.partition.num_clusters());
      for (double& d : noise.draws) d = laplace_sample(noise.scale, rng);
      columns.emplace_back(SpreadNoisyCentroids(plan.numeric_centroids(), noise.draws,
                                                plan.partition, attr, options.clamp));
    } else {
      const Taxonomy& t = *attr.taxonomy;
      const auto column = data.categorical(a);
      const ClusterPlan plan = individual_ranking(t, column, k, attr.name);
      const Partition& p = plan.partition;
      noise.scale = budget.epsilon_per_attribute() / (2.0 * kQualitySensitivity);
      std::vector<NodeId> chosen(p.num_clusters());
      std::vector<NodeId> members;
      for (std::size_t c = 0; c < chosen.size(); ++c) {
        members.clear();
        for (std::size_t r : p.members(c)) members.push_back(column[r]);
        chosen[c] = exponential_mechanism_centroid(t, members,
                                                   budget.epsilon_per_attribute(),
                                                   kQualitySensitivity, rng,
                                                   options.candidates);
      }
      CategoricalColumn released(data.num_records());
      for (std::size_t r = 0; r < released.size(); ++r) {
        released[r] = chosen[p.assignments()[r]];
      }
      columns.emplace_back(std::move(released));
    }
    out.noise.push_back(std::move(noise));
  }
  out.data = Assemble(data, std::move(columns), options.clamp);
  return out;
}

Release plain_laplace_release(const Dataset& data, const PrivacyBudget& budget,
                              std::uint64_t seed, const ReleaseOptions& options) {
  CheckBudgetMatches(budget, data);
  const Schema& schema = data.schema();
  const std::size_t n = data.num_records();
  Release out;
  std::vector<Column> columns;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const AttributeSchema& attr = schema[a];
    Rng rng = Rng::Substream(seed, a);
    NoisePlan noise{attr.name, 0.0, {}};
    if (attr.is_numeric()) {
      noise.scale = plain_laplace_scale(attr.sensitivity(), budget);
      noise.draws.resize(n);
      for (double& d : noise.draws) d = laplace_sample(noise.scale, rng);
      NumericColumn released(n);
      kernels::active().add_clamp(data.numeric(a).data(), noise.draws.data(), n,
                                  options.clamp ? attr.lower : -kInf,
                                  options.clamp ? attr.upper : kInf, released.data());
      columns.emplace_back(std::move(released));
    } else {
      const Taxonomy& t = *attr.taxonomy;
      noise.scale = budget.epsilon_per_attribute() / (2.0 * kQualitySensitivity);
      const auto column = data.categorical(a);
      CategoricalColumn released(n);
      for (std::size_t r = 0; r < n; ++r) {
        released[r] = exponential_mechanism_centroid(
            t, column.subspan(r, 1), budget.epsilon_per_attribute(),
            kQualitySensitivity, rng, CandidateDomain::kFullTaxonomy);
      }
      columns.emplace_back(std::move(released));
    }
    out.noise.push_back(std::move(noise));
  }
  out.data = Assemble(data, std::move(columns), options.clamp);
  return out;
}

Release mv_dp_release(const Dataset& data, std::size_t k, const PrivacyBudget& budget,
                      std::uint64_t seed, const ReleaseOptions& options) {
  CheckBudgetMatches(budget, data);
  const MultivariatePlan plan = multivariate_baseline(data, k);
  const Schema& schema = data.schema();
  const auto n = static_cast<double>(data.num_records());
  Release out;
  std::vector<Column> columns;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const AttributeSchema& attr = schema[a];
    Rng rng = Rng::Substream(seed, a);
    NoisePlan noise{attr.name, 0.0, {}};
    noise.scale = mv_dp_scale(attr.sensitivity(), n, static_cast<double>(k),
                              budget.epsilon_total());
    noise.draws.resize(plan.partition.num_clusters());
    for (double& d : noise.draws) d = laplace_sample(noise.scale, rng);
    columns.emplace_back(SpreadNoisyCentroids(plan.centroids[a], noise.draws,
                                              plan.partition, attr, options.clamp));
    out.noise.push_back(std::move(noise));
  }
  out.data = Assemble(data, std::move(columns), options.clamp);
  return out;
}

Release ir_only_release(const Dataset& data, std::size_t k) {
  check_cluster_size(k, data.num_records());
  const Schema& schema = data.schema();
  std::vector<Column> columns;
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (schema[a].is_numeric()) {
      columns.emplace_back(centroid_column(individual_ranking(data.numeric(a), k)));
    } else {
      columns.emplace_back(centroid_labels(
          individual_ranking(*schema[a].taxonomy, data.categorical(a), k)));
    }
  }
  return Release{Dataset(schema, std::move(columns)), {}};
}

Release mv_only_release(const Dataset& data, std::size_t k) {
  const MultivariatePlan plan = multivariate_baseline(data, k);
  std::vector<Column> columns;
  const auto assignments = plan.partition.assignments();
  for (std::size_t a = 0; a < data.num_attributes(); ++a) {
    NumericColumn col(data.num_records());
    for (std::size_t r = 0; r < col.size(); ++r) col[r] = plan.centroids[a][assignments[r]];
    columns.emplace_back(std::move(col));
  }
  return Release{Dataset(data.schema(), std::move(columns)), {}};
}

Release release(const Dataset& data, const MechanismConfig& config) {
  const ReleaseOptions options{config.clamp, config.candidates};
  switch (config.method) {
    case Method::kIrDp:
      return ir_dp_release(data, config.k, PrivacyBudget(config.epsilon, data.num_attributes()),
                           config.seed, options);
    case Method::kPlainLaplace:
      return plain_laplace_release(
          data, PrivacyBudget(config.epsilon, data.num_attributes()), config.seed, options);
    case Method::kMvDp:
      return mv_dp_release(data, config.k, PrivacyBudget(config.epsilon, data.num_attributes()),
                           config.seed, options);
    case Method::kIrOnly:
      return ir_only_release(data, config.k);
    case Method::kMvOnly:
      return mv_only_release(data, config.k);
  }
  throw InvalidArgument("unknown method");
}

DpCheckReport dp_property_check(const BucketMechanism& mechanism,
                                const NeighborPair& neighbor, double epsilon,
                                std::size_t trials, std::uint64_t seed, double z) {
  constexpr std::size_t kMinTrials = 1000;
  if (trials < kMinTrials) {
    throw InvalidArgument("dp_property_check needs at least " +
                          std::to_string(kMinTrials) + " trials");
  }
  std::map<std::int64_t, std::pair<std::size_t, std::size_t>> counts;
  Rng base_rng = Rng::Substream(seed, 0);
  Rng modified_rng = Rng::Substream(seed, 1);
  for (std::size_t t = 0; t < trials; ++t) {
    ++counts[mechanism(neighbor.base, base_rng)].first;
    ++counts[mechanism(neighbor.modified, modified_rng)].second;
  }

  // Buckets with fewer hits than this still get flagged, but are left out of
  // the reported maximum, which would otherwise be dominated by noise.
  const double report_floor = 100.0;
  DpCheckReport report{epsilon, trials, 0.0, {}, false};
  for (const auto& [bucket, c] : counts) {
    const double a = static_cast<double>(c.first) + 0.5;
    const double b = static_cast<double>(c.second) + 0.5;
    BucketStat stat{bucket, c.first, c.second, std::log(a / b),
                    z * std::sqrt(1.0 / a + 1.0 / b), false};
    stat.flagged = std::fabs(stat.log_ratio) - stat.slack > epsilon;
    report.violated = report.violated || stat.flagged;
    if (a + b >= report_floor) {
      report.max_log_ratio = std::max(report.max_log_ratio, std::fabs(stat.log_ratio));
    }
    report.buckets.push_back(stat);
  }
  return report;
}

}  // namespace dpmicro
