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

// Brute-force verifiers for the test suite and the `verify` subcommand.
//
// Everything here is computed the slow, obvious way: distances from explicit
// ancestor-set union/intersection, centroids from a plain sort-and-chunk,
// probabilities by direct normalization. None of it reuses the fast paths it
// is meant to check, except sensitivity_check, whose subject is the
// individual_ranking clustering itself.

#ifndef DPMICRO_ORACLE_H_
#define DPMICRO_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpmicro/mechanisms.h"
#include "dpmicro/taxonomy.h"

namespace dpmicro::oracle {

// Ancestor-set distance with std::set arithmetic.
double set_distance(const Taxonomy& t, NodeId a, NodeId b);

// Sum of set_distance over the multiset, skipping the candidate itself.
double set_marginality(const Taxonomy& t, std::span<const NodeId> values,
                       NodeId candidate);

// Exhaustive argmin of set_marginality over the union of ancestor sets;
// ties to the smallest label.
NodeId exhaustive_centroid(const Taxonomy& t, std::span<const NodeId> sample);

// Sort-and-chunk centroids in cluster order: floor(n/k) clusters, the last
// one taking the remainder.
std::vector<double> chunk_centroids(std::vector<double> values, std::size_t k);

struct SensitivityProbe {
  std::vector<double> column;
  std::size_t k = 2;
  double delta_cap = 1.0;
  std::size_t grid_points = 9;  // per index, endpoints included
  // Replacements are clipped to this domain when set.
  std::optional<std::pair<double, double>> domain;
};

struct SensitivityResult {
  double max_shift = 0.0;
  double bound = 0.0;  // delta_cap / k
  bool pass = true;
  std::size_t evaluations = 0;
  std::size_t worst_index = 0;
  double worst_replacement = 0.0;
};

// L1 distance between the centroid lists of two columns, matched by rank.
double centroid_shift(std::span<const double> before, std::span<const double> after,
                      std::size_t k);

// For every index i and every replacement on an even grid over
// [x_i - cap, x_i + cap] (clipped to the domain), recomputes the
// individual-ranking centroids and checks sum |shift| <= cap / k + 1e-9.
SensitivityResult sensitivity_check(const SensitivityProbe& probe);

struct ProbeSuiteResult {
  std::size_t probes = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  // max over probes of max_shift / bound
  SensitivityResult worst;
  SensitivityProbe worst_probe;
};

// `probes` random probes over the domain [0, 100] (delta_cap 100): n in
// [k, 50], k in {2, 3, 5, 7}, alternating uniform values and tight clusters
// of integer values (so replacements collide with existing ones).
ProbeSuiteResult random_sensitivity_suite(std::size_t probes, std::uint64_t seed);

// Output label -> probability. Keys for multi-record outputs join the
// labels with '|'.
using Distribution = std::map<std::string, double>;

// Exact exponential-mechanism distribution. epsilon = 0 is allowed and gives
// the uniform distribution.
Distribution exact_expmech_distribution(const Taxonomy& t,
                                        std::span<const NodeId> cluster,
                                        double epsilon, double sensitivity_q,
                                        CandidateDomain domain = CandidateDomain::kFullTaxonomy);

// Release of a cluster of `copies` records where every record gets its own
// independent exponential-mechanism draw instead of one shared draw. The
// output is the tuple of labels.
Distribution exact_per_record_distribution(const Taxonomy& t,
                                           std::span<const NodeId> cluster,
                                           double epsilon, double sensitivity_q,
                                           std::size_t copies,
                                           CandidateDomain domain = CandidateDomain::kFullTaxonomy);

// max over outputs of |ln(P1(o) / P2(o))|; +inf when an output has zero
// probability on exactly one side.
double exact_dp_ratio(const Distribution& first, const Distribution& second);

double exact_dp_ratio(const Taxonomy& t, std::span<const NodeId> cluster,
                      std::span<const NodeId> neighbor_cluster, double epsilon,
                      double sensitivity_q,
                      CandidateDomain domain = CandidateDomain::kFullTaxonomy);

}  // namespace dpmicro::oracle

#endif  // DPMICRO_ORACLE_H_
