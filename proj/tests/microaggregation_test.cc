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

#include <gtest/gtest.h>

#include "dpmicro/error.h"
#include "dpmicro/oracle.h"
#include "test_util.h"

namespace dpmicro {
namespace {

using testing::ChainTaxonomy;
using testing::NumericDataset;

std::vector<std::size_t> Sizes(const Partition& p) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < p.num_clusters(); ++c) out.push_back(p.cluster_size(c));
  return out;
}

TEST(IndividualRankingTest, EvenSplit) {
  const std::vector<double> col = {1, 2, 3, 4};
  const ClusterPlan plan = individual_ranking(col, 2);
  EXPECT_EQ(Sizes(plan.partition), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(std::vector<double>(plan.numeric_centroids().begin(),
                                plan.numeric_centroids().end()),
            (std::vector<double>{1.5, 3.5}));
  EXPECT_EQ(centroid_column(plan), (std::vector<double>{1.5, 1.5, 3.5, 3.5}));
}

TEST(IndividualRankingTest, LastClusterAbsorbsRemainder) {
  const std::vector<double> col = {5, 1, 3, 2, 4};
  const ClusterPlan plan = individual_ranking(col, 2);
  EXPECT_EQ(Sizes(plan.partition), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(centroid_column(plan), (std::vector<double>{4.0, 1.5, 4.0, 1.5, 4.0}));
  const auto brute = oracle::chunk_centroids(col, 2);
  EXPECT_EQ(brute, (std::vector<double>{1.5, 4.0}));
}

TEST(IndividualRankingTest, KOneIsIdentity) {
  const std::vector<double> col = {3.25, -1, 7, 7, 0};
  const ClusterPlan plan = individual_ranking(col, 1);
  EXPECT_EQ(plan.partition.num_clusters(), col.size());
  EXPECT_EQ(centroid_column(plan), col);
}

TEST(IndividualRankingTest, TiesKeepOriginalOrder) {
  const std::vector<double> col = {2, 1, 2, 1};
  const ClusterPlan plan = individual_ranking(col, 1);
  const auto order = plan.partition.order();
  EXPECT_EQ(std::vector<std::size_t>(order.begin(), order.end()),
            (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(IndividualRankingTest, RejectsBadK) {
  const std::vector<double> col = {1, 2, 3};
  EXPECT_THROW(individual_ranking(col, 0), InvalidArgument);
  EXPECT_THROW(individual_ranking(col, 4), InvalidArgument);
  EXPECT_NO_THROW(individual_ranking(col, 3));
}

TEST(IndividualRankingTest, EqualValuesGiveThatValueBack) {
  const std::vector<double> col(7, 0.1);
  const ClusterPlan plan = individual_ranking(col, 3);
  for (double c : plan.numeric_centroids()) EXPECT_EQ(c, 0.1);
}

TEST(OrderKeyTest, SingleValueGetsRankZero) {
  const Taxonomy t = ChainTaxonomy();
  const std::vector<NodeId> col(4, t.id_of("x"));
  const auto key = categorical_order_key(t, col);
  ASSERT_EQ(key.size(), 1u);
  EXPECT_EQ(key.at(t.id_of("x")), 0u);
}

TEST(OrderKeyTest, MostMarginalFirstThenByDistance) {
  const Taxonomy t = ChainTaxonomy();
  // Distinct values {a, b, x}. Scores: a = d(a,b) + d(a,x), b = d(b,a) +
  // d(b,x), x = d(x,a) + d(x,b). b is farthest from the rest.
  const std::vector<NodeId> col = {t.id_of("a"), t.id_of("b"), t.id_of("x"), t.id_of("a")};
  const auto key = categorical_order_key(t, col);
  EXPECT_EQ(key.at(t.id_of("b")), 0u);
  // d(x, b) = log2(1.75) < d(a, b) = log2(1.8)
  EXPECT_EQ(key.at(t.id_of("x")), 1u);
  EXPECT_EQ(key.at(t.id_of("a")), 2u);
}

TEST(CategoricalRankingTest, ClustersFollowOrderKey) {
  const Taxonomy t = ChainTaxonomy();
  const NodeId a = t.id_of("a");
  const NodeId b = t.id_of("b");
  const std::vector<NodeId> col = {a, b, a, b};
  const ClusterPlan plan = individual_ranking(t, col, 2);
  // Both values score the same; "a" wins the anchor tie.
  EXPECT_EQ(centroid_labels(plan), (std::vector<NodeId>{a, b, a, b}));
  const nlohmann::json j = to_json(plan, &t);
  EXPECT_EQ(j["centroids"], nlohmann::json::array({"a", "b"}));
  EXPECT_EQ(j["cluster_sizes"], nlohmann::json::array({2, 2}));
}

TEST(MultivariateTest, SingleAttributeMatchesIndividualRanking) {
  const std::vector<double> col = {5, 1, 3, 2, 4, 3, 9};
  const Dataset d = NumericDataset({col}, 0, 10);
  const MultivariatePlan mv = multivariate_baseline(d, 2);
  const ClusterPlan ir = individual_ranking(col, 2);
  EXPECT_EQ(std::vector<std::size_t>(mv.partition.order().begin(), mv.partition.order().end()),
            std::vector<std::size_t>(ir.partition.order().begin(), ir.partition.order().end()));
  EXPECT_EQ(mv.centroids[0], std::vector<double>(ir.numeric_centroids().begin(),
                                                 ir.numeric_centroids().end()));
}

TEST(MultivariateTest, IdenticalRecords) {
  const Dataset d = NumericDataset({{2, 2, 2, 2}, {3, 3, 3, 3}}, 0, 10);
  const MultivariatePlan mv = multivariate_baseline(d, 2);
  EXPECT_EQ(mv.partition.num_clusters(), 2u);
  EXPECT_EQ(mv.centroids[0], (std::vector<double>{2, 2}));
  EXPECT_EQ(mv.centroids[1], (std::vector<double>{3, 3}));
}

TEST(MultivariateTest, UnitSquareCorners) {
  // (0,0), (1,1), (0,1), (1,0): keys 0, 2, 1, 1.
  const Dataset d = NumericDataset({{0, 1, 0, 1}, {0, 1, 1, 0}}, 0, 1);
  const MultivariatePlan mv = multivariate_baseline(d, 2);
  EXPECT_EQ(std::vector<std::size_t>(mv.partition.order().begin(), mv.partition.order().end()),
            (std::vector<std::size_t>{0, 2, 3, 1}));
  EXPECT_EQ(mv.centroids[0], (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(mv.centroids[1], (std::vector<double>{0.5, 0.5}));
}

TEST(MultivariateTest, RejectsCategoricalData) {
  auto tax = std::make_shared<const Taxonomy>(ChainTaxonomy());
  const Schema s({AttributeSchema::Categorical("c", tax)});
  const Dataset d(s, {CategoricalColumn{0, 1}});
  EXPECT_THROW(multivariate_baseline(d, 1), InvalidArgument);
}

}  // namespace
}  // namespace dpmicro
