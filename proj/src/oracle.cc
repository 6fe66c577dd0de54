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

#include "dpmicro/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "dpmicro/error.h"
#include "dpmicro/microaggregation.h"
#include "dpmicro/random.h"

namespace dpmicro::oracle {

namespace {

std::set<NodeId> AncestorSet(const Taxonomy& t, NodeId v) {
  std::set<NodeId> out;
  for (NodeId cur = v; cur != kNoNode; cur = t.parent(cur)) out.insert(cur);
  return out;
}

std::vector<NodeId> Candidates(const Taxonomy& t, std::span<const NodeId> cluster,
                               CandidateDomain domain) {
  std::set<NodeId> nodes;
  if (domain == CandidateDomain::kFullTaxonomy) {
    for (std::size_t i = 0; i < t.size(); ++i) nodes.insert(static_cast<NodeId>(i));
  } else {
    for (NodeId v : cluster) {
      const auto a = AncestorSet(t, v);
      nodes.insert(a.begin(), a.end());
    }
  }
  return {nodes.begin(), nodes.end()};
}

}  // namespace

double set_distance(const Taxonomy& t, NodeId a, NodeId b) {
  const auto pa = AncestorSet(t, a);
  const auto pb = AncestorSet(t, b);
  std::set<NodeId> uni;
  std::set<NodeId> inter;
  std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(),
                 std::inserter(uni, uni.end()));
  std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(),
                        std::inserter(inter, inter.end()));
  const double u = static_cast<double>(uni.size());
  const double i = static_cast<double>(inter.size());
  return std::log2(1.0 + (u - i) / u);
}

double set_marginality(const Taxonomy& t, std::span<const NodeId> values,
                       NodeId candidate) {
  double sum = 0.0;
  for (NodeId v : values) {
    if (v != candidate) sum += set_distance(t, candidate, v);
  }
  return sum;
}

NodeId exhaustive_centroid(const Taxonomy& t, std::span<const NodeId> sample) {
  if (sample.empty()) throw InvalidArgument("centroid of an empty sample");
  NodeId best = kNoNode;
  double best_score = std::numeric_limits<double>::infinity();
  for (NodeId c : Candidates(t, sample, CandidateDomain::kSpannedSubtree)) {
    const double s = set_marginality(t, sample, c);
    // Scores are compared with a small tolerance because the two sides of a
    // tie may have been summed in different orders.
    if (s < best_score - 1e-12 ||
        (std::fabs(s - best_score) <= 1e-12 && t.label(c) < t.label(best))) {
      best = c;
      best_score = std::min(s, best_score);
    }
  }
  return best;
}

std::vector<double> chunk_centroids(std::vector<double> values, std::size_t k) {
  if (k < 1 || k > values.size()) throw InvalidArgument("k out of range");
  std::sort(values.begin(), values.end());
  const std::size_t clusters = values.size() / k;
  std::vector<double> out;
  for (std::size_t c = 0; c < clusters; ++c) {
    const std::size_t begin = c * k;
    const std::size_t end = c + 1 == clusters ? values.size() : begin + k;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += values[i];
    out.push_back(sum / static_cast<double>(end - begin));
  }
  return out;
}

double centroid_shift(std::span<const double> before, std::span<const double> after,
                      std::size_t k) {
  const ClusterPlan x = individual_ranking(before, k);
  const ClusterPlan y = individual_ranking(after, k);
  const auto cx = x.numeric_centroids();
  const auto cy = y.numeric_centroids();
  double shift = 0.0;
  for (std::size_t j = 0; j < cx.size(); ++j) shift += std::fabs(cy[j] - cx[j]);
  return shift;
}

SensitivityResult sensitivity_check(const SensitivityProbe& probe) {
  const std::size_t n = probe.column.size();
  if (probe.k < 1 || probe.k > n) throw InvalidArgument("probe k out of range");
  if (probe.grid_points < 3) throw InvalidArgument("probe needs at least 3 grid points");
  if (!(probe.delta_cap >= 0)) throw InvalidArgument("probe delta_cap must be >= 0");

  SensitivityResult result;
  result.bound = probe.delta_cap / static_cast<double>(probe.k);
  std::vector<double> modified = probe.column;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = probe.column[i];
    double lo = x - probe.delta_cap;
    double hi = x + probe.delta_cap;
    if (probe.domain) {
      lo = std::max(lo, probe.domain->first);
      hi = std::min(hi, probe.domain->second);
    }
    for (std::size_t g = 0; g < probe.grid_points; ++g) {
      const double replacement =
          g + 1 == probe.grid_points
              ? hi
              : lo + (hi - lo) * static_cast<double>(g) /
                         static_cast<double>(probe.grid_points - 1);
      modified[i] = replacement;
      // The bound scales with the actual change, which may be below the cap.
      const double shift = centroid_shift(probe.column, modified, probe.k);
      ++result.evaluations;
      if (shift > result.max_shift) {
        result.max_shift = shift;
        result.worst_index = i;
        result.worst_replacement = replacement;
      }
    }
    modified[i] = x;
  }
  result.pass = result.max_shift <= result.bound + 1e-9;
  return result;
}

ProbeSuiteResult random_sensitivity_suite(std::size_t probes, std::uint64_t seed) {
  constexpr std::size_t kSizes[] = {2, 3, 5, 7};
  constexpr double kUpper = 100.0;
  Rng rng(seed);
  auto below = [&rng](std::size_t bound) {
    return static_cast<std::size_t>(rng.Uniform() * static_cast<double>(bound));
  };

  ProbeSuiteResult out;
  for (std::size_t p = 0; p < probes; ++p) {
    SensitivityProbe probe;
    probe.k = kSizes[below(4)];
    const std::size_t n = probe.k + below(50 - probe.k + 1);
    probe.delta_cap = kUpper;
    probe.domain = std::make_pair(0.0, kUpper);
    if (p % 2 == 0) {
      for (std::size_t i = 0; i < n; ++i) probe.column.push_back(rng.Uniform() * kUpper);
    } else {
      const std::size_t centers = 1 + below(4);
      std::vector<double> c;
      for (std::size_t j = 0; j < centers; ++j) c.push_back(std::round(rng.Uniform() * 90.0));
      for (std::size_t i = 0; i < n; ++i) {
        probe.column.push_back(c[below(centers)] + std::floor(rng.Uniform() * 3.0));
      }
    }
    // The clipped range is always [0, 100]; 17 points step by 6.25 and
    // include 0, 25, 50, 75, 100, which clustered probes often contain.
    probe.grid_points = 17;
    const SensitivityResult r = sensitivity_check(probe);
    ++out.probes;
    if (!r.pass) ++out.failures;
    const double ratio = r.bound > 0 ? r.max_shift / r.bound : 0.0;
    if (p == 0 || ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst = r;
      out.worst_probe = probe;
    }
  }
  return out;
}

Distribution exact_expmech_distribution(const Taxonomy& t,
                                        std::span<const NodeId> cluster,
                                        double epsilon, double sensitivity_q,
                                        CandidateDomain domain) {
  if (cluster.empty()) throw InvalidArgument("empty cluster");
  if (!(epsilon >= 0)) throw InvalidArgument("epsilon must be >= 0");
  if (!(sensitivity_q > 0)) throw InvalidArgument("quality sensitivity must be > 0");
  const auto candidates = Candidates(t, cluster, domain);
  std::vector<double> logw;
  for (NodeId c : candidates) {
    logw.push_back(epsilon * -set_marginality(t, cluster, c) / (2.0 * sensitivity_q));
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  Distribution out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[t.label(candidates[i])] = logw[i] / total;
  }
  return out;
}

Distribution exact_per_record_distribution(const Taxonomy& t,
                                           std::span<const NodeId> cluster,
                                           double epsilon, double sensitivity_q,
                                           std::size_t copies,
                                           CandidateDomain domain) {
  if (copies < 1) throw InvalidArgument("copies must be >= 1");
  const Distribution single =
      exact_expmech_distribution(t, cluster, epsilon, sensitivity_q, domain);
  Distribution out = single;
  for (std::size_t c = 1; c < copies; ++c) {
    Distribution next;
    for (const auto& [prefix, p] : out) {
      for (const auto& [label, q] : single) next[prefix + "|" + label] = p * q;
    }
    out = std::move(next);
  }
  return out;
}

double exact_dp_ratio(const Distribution& first, const Distribution& second) {
  double worst = 0.0;
  auto visit = [&worst](double p, double q) {
    if (p == 0.0 && q == 0.0) return;
    if (p == 0.0 || q == 0.0) {
      worst = std::numeric_limits<double>::infinity();
      return;
    }
    worst = std::max(worst, std::fabs(std::log(p / q)));
  };
  for (const auto& [label, p] : first) {
    auto it = second.find(label);
    visit(p, it == second.end() ? 0.0 : it->second);
  }
  for (const auto& [label, q] : second) {
    if (!first.contains(label)) visit(0.0, q);
  }
  return worst;
}

double exact_dp_ratio(const Taxonomy& t, std::span<const NodeId> cluster,
                      std::span<const NodeId> neighbor_cluster, double epsilon,
                      double sensitivity_q, CandidateDomain domain) {
  return exact_dp_ratio(
      exact_expmech_distribution(t, cluster, epsilon, sensitivity_q, domain),
      exact_expmech_distribution(t, neighbor_cluster, epsilon, sensitivity_q, domain));
}

}  // namespace dpmicro::oracle
