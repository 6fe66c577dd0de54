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

// Differentially private releases of a whole dataset.
//
//   ir-dp          individual ranking per attribute, then one Laplace draw
//                  per cluster with scale Delta_i / (k * eps / m), shared by
//                  every record of the cluster. Categorical attributes get a
//                  per-cluster exponential-mechanism centroid instead.
//   plain-laplace  independent Laplace noise per cell, scale m * Delta_i / eps.
//   mv-dp          multivariate baseline clusters, one draw per cluster and
//                  attribute with scale (n/k) * Delta_i / (k * eps).
//   ir-only        individual ranking without noise (not private).
//   mv-only        multivariate baseline without noise (not private).
//
// Noise for attribute i always comes from Rng::Substream(seed, i), so the
// output is a pure function of (data, config) and attributes can be
// processed in any order.

#ifndef DPMICRO_MECHANISMS_H_
#define DPMICRO_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpmicro/dataset.h"
#include "dpmicro/random.h"
#include "dpmicro/taxonomy.h"

namespace dpmicro {

// Total budget split evenly over m attributes (sequential composition).
class PrivacyBudget {
 public:
  PrivacyBudget(double epsilon_total, std::size_t m);

  double epsilon_total() const { return epsilon_total_; }
  std::size_t m() const { return m_; }
  double epsilon_per_attribute() const { return epsilon_total_ / static_cast<double>(m_); }

 private:
  double epsilon_total_;
  std::size_t m_;
};

enum class Method { kIrDp, kPlainLaplace, kMvDp, kIrOnly, kMvOnly };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
bool is_private(Method method);

// Candidates considered by the exponential mechanism.
enum class CandidateDomain {
  kFullTaxonomy,    // every node of the attribute taxonomy
  kSpannedSubtree,  // nodes on the root paths of the cluster's values
};

struct MechanismConfig {
  Method method = Method::kIrDp;
  std::size_t k = 1;  // ignored by plain-laplace
  double epsilon = 1.0;  // total budget over all released attributes
  std::uint64_t seed = 0;
  bool clamp = true;
  CandidateDomain candidates = CandidateDomain::kFullTaxonomy;
};

// Noise applied to one attribute. For cluster-based methods there is one
// draw per cluster (indexed by cluster id); for plain-laplace one per record.
// Categorical attributes report their exponential-mechanism scale factor
// eps / (2 * dq) and no draws.
struct NoisePlan {
  std::string attribute;
  double scale = 0.0;
  std::vector<double> draws;
};

struct Release {
  Dataset data;
  std::vector<NoisePlan> noise;  // one per attribute, empty for noise-free methods
};

// Inverse-CDF Laplace: u in (0, 1) maps to
// scale * sign(u - 1/2) * -ln(1 - 2|u - 1/2|); u = 1/2 maps to 0.
double laplace_from_uniform(double u, double scale);
double laplace_sample(double scale, Rng& rng);

// Laplace scales. `k` is real-valued so crossover points can be analysed.
double ir_dp_scale(double sensitivity, double k, const PrivacyBudget& budget);
double plain_laplace_scale(double sensitivity, const PrivacyBudget& budget);
double mv_dp_scale(double sensitivity, double n, double k, double epsilon_total);
// k at which the ir-dp and mv-dp scales coincide: n / m.
double crossover_k(double n, double m);

std::vector<NodeId> candidate_set(const Taxonomy& t, const ValueCounts& cluster,
                                  CandidateDomain domain);

// Samples a centroid with probability proportional to
// exp(eps * -marginality(cluster, c) / (2 * sensitivity_q)).
NodeId exponential_mechanism_centroid(
    const Taxonomy& t, const ValueCounts& cluster, double epsilon,
    double sensitivity_q, Rng& rng,
    CandidateDomain domain = CandidateDomain::kFullTaxonomy);
NodeId exponential_mechanism_centroid(
    const Taxonomy& t, std::span<const NodeId> cluster, double epsilon,
    double sensitivity_q, Rng& rng,
    CandidateDomain domain = CandidateDomain::kFullTaxonomy);

// Sensitivity of the marginality quality score.
inline constexpr double kQualitySensitivity = 1.0;

struct ReleaseOptions {
  bool clamp = true;
  CandidateDomain candidates = CandidateDomain::kFullTaxonomy;
};

Release ir_dp_release(const Dataset& data, std::size_t k,
                      const PrivacyBudget& budget, std::uint64_t seed,
                      const ReleaseOptions& options = {});
Release plain_laplace_release(const Dataset& data, const PrivacyBudget& budget,
                              std::uint64_t seed, const ReleaseOptions& options = {});
Release mv_dp_release(const Dataset& data, std::size_t k,
                      const PrivacyBudget& budget, std::uint64_t seed,
                      const ReleaseOptions& options = {});
Release ir_only_release(const Dataset& data, std::size_t k);
Release mv_only_release(const Dataset& data, std::size_t k);

// Dispatches on config.method with budget (config.epsilon, m).
Release release(const Dataset& data, const MechanismConfig& config);

// Empirical check of the e^eps ratio bound on a pair of neighbours. The
// mechanism maps a dataset to a discrete outcome bucket. Each bucket's log
// ratio uses continuity-corrected counts; a bucket is flagged when
// |log ratio| exceeds eps by more than `z` standard errors.
struct BucketStat {
  std::int64_t bucket;
  std::size_t count_base;
  std::size_t count_modified;
  double log_ratio;
  double slack;
  bool flagged;
};

struct DpCheckReport {
  double epsilon;
  std::size_t trials;
  double max_log_ratio;
  std::vector<BucketStat> buckets;
  bool violated;
};

using BucketMechanism = std::function<std::int64_t(const Dataset&, Rng&)>;

DpCheckReport dp_property_check(const BucketMechanism& mechanism,
                                const NeighborPair& neighbor, double epsilon,
                                std::size_t trials, std::uint64_t seed,
                                double z = 4.0);

}  // namespace dpmicro

#endif  // DPMICRO_MECHANISMS_H_
