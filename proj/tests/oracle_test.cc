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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "dpmicro/error.h"
#include "dpmicro/mechanisms.h"
#include "dpmicro/microaggregation.h"
#include "test_util.h"

namespace dpmicro::oracle {
namespace {

// r -> {p -> {p1, p2}, q}
Taxonomy FiveNode() {
  const std::vector<Taxonomy::Edge> edges = {{"r", "p"}, {"r", "q"}, {"p", "p1"}, {"p", "p2"}};
  return Taxonomy::FromEdges("r", edges);
}

// Largest exact ratio over every one-record change of `cluster`.
double WorstNeighborRatio(const Taxonomy& t, const std::vector<NodeId>& cluster, double eps,
                          double dq) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    for (NodeId v = 0; v < static_cast<NodeId>(t.size()); ++v) {
      auto other = cluster;
      other[i] = v;
      worst = std::max(worst, exact_dp_ratio(t, cluster, other, eps, dq));
    }
  }
  return worst;
}

TEST(SensitivityBoundTest, HandCaseShiftsByCapOverK) {
  const std::vector<double> before = {1, 2, 3, 4};
  const std::vector<double> after = {1, 2, 3, 0};
  EXPECT_EQ(centroid_shift(before, after, 2), 2.0);
}

TEST(SensitivityBoundTest, HandCaseGridAttainsBound) {
  SensitivityProbe probe;
  probe.column = {1, 2, 3, 4};
  probe.k = 2;
  probe.delta_cap = 4;
  probe.domain = std::make_pair(0.0, 4.0);
  const SensitivityResult r = sensitivity_check(probe);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.bound, 2.0);
  EXPECT_EQ(r.max_shift, 2.0);
}

TEST(SensitivityBoundTest, MoveInsideOwnClusterShiftsOneCentroid) {
  const std::vector<double> before = {1, 2, 3, 4, 10, 11};
  const std::vector<double> after = {1, 2, 3.5, 4, 10, 11};
  EXPECT_DOUBLE_EQ(centroid_shift(before, after, 2), 0.25);
}

TEST(SensitivityBoundTest, NoOpReplacement) {
  const std::vector<double> col = {4, 4, 1, 7, 7};
  EXPECT_EQ(centroid_shift(col, col, 2), 0.0);
}

TEST(SensitivityBoundTest, RandomProbesWithCollisions) {
  const ProbeSuiteResult r = random_sensitivity_suite(200, 77);
  EXPECT_EQ(r.probes, 200u);
  EXPECT_EQ(r.failures, 0u) << "worst ratio " << r.worst_ratio;
  EXPECT_LE(r.worst_ratio, 1.0 + 1e-9);
}

TEST(SensitivityBoundTest, RejectsBadProbe) {
  SensitivityProbe probe;
  probe.column = {1, 2};
  probe.k = 3;
  EXPECT_THROW(sensitivity_check(probe), Error);
  probe.k = 1;
  probe.grid_points = 2;
  EXPECT_THROW(sensitivity_check(probe), Error);
}

TEST(ChunkCentroidsTest, MatchesIndividualRanking) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + testing::Below(rng, 40);
    const std::size_t k = 1 + testing::Below(rng, n);
    std::vector<double> col(n);
    for (double& v : col) v = std::round(rng.Uniform() * 20);
    const auto want = chunk_centroids(col, k);
    const auto plan = individual_ranking(col, k);
    ASSERT_EQ(want.size(), plan.numeric_centroids().size());
    for (std::size_t c = 0; c < want.size(); ++c) {
      EXPECT_NEAR(plan.numeric_centroids()[c], want[c], 1e-12);
    }
  }
}

TEST(ExactExpMechTest, ZeroEpsilonIsUniform) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("q")};
  const Distribution d = exact_expmech_distribution(t, cluster, 0.0, 1.0);
  ASSERT_EQ(d.size(), 5u);
  for (const auto& [label, p] : d) EXPECT_DOUBLE_EQ(p, 0.2) << label;
}

TEST(ExactExpMechTest, EqualQualitiesAreUniform) {
  // r -> {s, t}: the two leaves are mirror images, so they score the same.
  const std::vector<Taxonomy::Edge> edges = {{"r", "s"}, {"r", "t"}};
  const Taxonomy t = Taxonomy::FromEdges("r", edges);
  const std::vector<NodeId> cluster = {t.id_of("s"), t.id_of("t")};
  const Distribution d = exact_expmech_distribution(t, cluster, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(d.at("s"), d.at("t"));
  double total = 0;
  for (const auto& [label, p] : d) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(ExactDpRatioTest, IdenticalClustersGiveZero) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("p1"), t.id_of("q")};
  EXPECT_EQ(exact_dp_ratio(t, cluster, cluster, 1.0, 1.0), 0.0);
}

TEST(ExactDpRatioTest, CalibratedMechanismStaysWithinEpsilon) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("p1"), t.id_of("p2")};
  for (double eps : {0.1, 1.0, 3.0}) {
    EXPECT_LE(WorstNeighborRatio(t, cluster, eps, 1.0), eps + 1e-9) << eps;
  }
}

TEST(ExactDpRatioTest, HalvedQualitySensitivityIsCaught) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("p1"), t.id_of("p2")};
  EXPECT_GT(WorstNeighborRatio(t, cluster, 1.0, 0.5), 1.0);
}

TEST(ExactDpRatioTest, PerRecordDrawsMultiplyTheRatio) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> base = {t.id_of("p1"), t.id_of("p1"), t.id_of("p2")};
  std::vector<NodeId> changed = base;
  changed[0] = t.id_of("q");
  const double eps = 1.0;
  const double shared = exact_dp_ratio(t, base, changed, eps, 1.0);
  const double per_record =
      exact_dp_ratio(exact_per_record_distribution(t, base, eps, 1.0, 3),
                     exact_per_record_distribution(t, changed, eps, 1.0, 3));
  EXPECT_LE(shared, eps);
  EXPECT_NEAR(per_record, 3 * shared, 1e-9);
  EXPECT_GT(per_record, eps);
}

TEST(ExactDpRatioTest, OneSidedZeroIsInfinite) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> a = {t.id_of("p1")};
  const std::vector<NodeId> b = {t.id_of("q")};
  EXPECT_TRUE(std::isinf(
      exact_dp_ratio(t, a, b, 1.0, 1.0, CandidateDomain::kSpannedSubtree)));
}

TEST(ExactExpMechTest, SamplerMatchesWithinThreeSigma) {
  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("p2"), t.id_of("p2"),
                                       t.id_of("q")};
  const double eps = 2.0;
  const Distribution exact = exact_expmech_distribution(t, cluster, eps, 1.0);
  Rng rng(21);
  const int n = 100000;
  std::map<std::string, int> freq;
  for (int i = 0; i < n; ++i) {
    ++freq[t.label(exponential_mechanism_centroid(t, cluster, eps, 1.0, rng))];
  }
  for (const auto& [label, p] : exact) {
    const double sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(freq[label] / static_cast<double>(n), p, 3 * sigma) << label;
  }
}

}  // namespace
}  // namespace dpmicro::oracle
