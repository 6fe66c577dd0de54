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

// Rooted-tree model of a categorical domain together with the ancestor-based
// semantic distance, marginality, and the marginality centroid.
//
// The distance between two labels a and b is
//
//   d(a, b) = log2(1 + (|A u B| - |A n B|) / |A u B|)
//
// where A and B are the ancestor sets of a and b (each including the label
// itself and the root). Because the root is always shared, d < 1.

#ifndef DPMICRO_TAXONOMY_H_
#define DPMICRO_TAXONOMY_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dpmicro {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

class Taxonomy {
 public:
  struct Edge {
    std::string parent;
    std::string child;
  };

  // Builds and validates a single-rooted tree. Throws ParseError when a
  // child has two parents, a node cannot reach the root, or the root is
  // given a parent.
  static Taxonomy FromEdges(std::string_view root, std::span<const Edge> edges);

  // Edge-list text: the first non-empty line names the root, each following
  // line is `parent<TAB>child`. Lines starting with '#' are ignored.
  static Taxonomy Parse(std::istream& in);
  static Taxonomy Load(const std::filesystem::path& path);

  std::size_t size() const { return labels_.size(); }
  NodeId root() const { return 0; }

  std::optional<NodeId> find(std::string_view label) const;
  // Throws InvalidArgument for labels that are not in the tree.
  NodeId id_of(std::string_view label) const;
  const std::string& label(NodeId id) const { return labels_[id]; }
  NodeId parent(NodeId id) const { return parents_[id]; }
  int depth(NodeId id) const { return depths_[id]; }

  // Path from `id` up to the root, inclusive of both ends.
  std::vector<NodeId> ancestors(NodeId id) const;
  NodeId lowest_common_ancestor(NodeId a, NodeId b) const;
  double distance(NodeId a, NodeId b) const;

  // Writes the tree back in the edge-list format (parents before children).
  void Write(std::ostream& out) const;

 private:
  Taxonomy() = default;

  std::vector<std::string> labels_;
  std::vector<NodeId> parents_;
  std::vector<int> depths_;
  std::unordered_map<std::string, NodeId> index_;
};

// Label-level conveniences.
std::vector<std::string> ancestors(const Taxonomy& t, std::string_view label);
double semantic_distance(const Taxonomy& t, std::string_view a,
                         std::string_view b);

// A multiset of taxonomy nodes collapsed to (node, multiplicity) pairs,
// sorted by node id.
class ValueCounts {
 public:
  ValueCounts() = default;
  explicit ValueCounts(std::span<const NodeId> values);

  std::span<const std::pair<NodeId, std::size_t>> entries() const {
    return entries_;
  }
  std::size_t total() const { return total_; }
  bool empty() const { return total_ == 0; }

 private:
  std::vector<std::pair<NodeId, std::size_t>> entries_;
  std::size_t total_ = 0;
};

// Sum of d(candidate, v) over every v in the multiset other than the
// candidate itself; repeated values count once per occurrence.
double marginality(const Taxonomy& t, const ValueCounts& values,
                   NodeId candidate);
double marginality(const Taxonomy& t, std::span<const NodeId> values,
                   NodeId candidate);

// Nodes of the minimal subtree covering the sample and all of its
// ancestors, sorted by id. Always contains the root.
std::vector<NodeId> spanned_subtree(const Taxonomy& t,
                                    const ValueCounts& sample);

// Least-marginal node of the spanned subtree. Ties go to the
// lexicographically smallest label. Throws InvalidArgument on an empty
// sample.
NodeId marginality_centroid(const Taxonomy& t, const ValueCounts& sample);
NodeId marginality_centroid(const Taxonomy& t, std::span<const NodeId> sample);

// -1, 0 or 1; scores within a relative 1e-12 of each other compare equal.
int compare_scores(double a, double b);

struct MarginalityTable {
  std::vector<NodeId> value_set;
  std::vector<double> scores;  // aligned with value_set
};

// Marginality of every member of `value_set` against the whole set.
MarginalityTable marginality_table(const Taxonomy& t,
                                   std::span<const NodeId> value_set);

}  // namespace dpmicro

#endif  // DPMICRO_TAXONOMY_H_
