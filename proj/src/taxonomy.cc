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

#include "dpmicro/taxonomy.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "dpmicro/error.h"

namespace dpmicro {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

Taxonomy Taxonomy::FromEdges(std::string_view root, std::span<const Edge> edges) {
  if (root.empty()) throw ParseError("taxonomy: empty root label");
  Taxonomy t;
  auto intern = [&t](const std::string& label) {
    auto [it, inserted] =
        t.index_.emplace(label, static_cast<NodeId>(t.labels_.size()));
    if (inserted) {
      t.labels_.push_back(label);
      t.parents_.push_back(kNoNode);
    }
    return it->second;
  };
  intern(std::string(root));
  for (const Edge& e : edges) {
    if (e.parent.empty() || e.child.empty()) {
      throw ParseError("taxonomy: empty label in edge");
    }
    const NodeId p = intern(e.parent);
    const NodeId c = intern(e.child);
    if (c == t.root()) {
      throw ParseError("taxonomy: root '" + t.labels_[0] + "' given a parent");
    }
    if (t.parents_[c] != kNoNode && t.parents_[c] != p) {
      throw ParseError("taxonomy: '" + e.child + "' has more than one parent");
    }
    t.parents_[c] = p;
  }

  // Depth by walking up; state 0 = unvisited, 1 = on current path, 2 = done.
  const std::size_t n = t.labels_.size();
  t.depths_.assign(n, 0);
  std::vector<char> state(n, 0);
  state[0] = 2;
  std::vector<NodeId> path;
  for (NodeId start = 1; start < static_cast<NodeId>(n); ++start) {
    path.clear();
    NodeId cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      if (t.parents_[cur] == kNoNode) {
        throw ParseError("taxonomy: '" + t.labels_[cur] +
                         "' is not connected to root '" + t.labels_[0] + "'");
      }
      cur = t.parents_[cur];
    }
    if (state[cur] == 1) {
      throw ParseError("taxonomy: cycle through '" + t.labels_[cur] + "'");
    }
    int d = t.depths_[cur];
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      t.depths_[*it] = ++d;
      state[*it] = 2;
    }
  }
  return t;
}

Taxonomy Taxonomy::Parse(std::istream& in) {
  std::string line;
  std::string root;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (root.empty()) {
      if (view.find('\t') != std::string_view::npos) {
        throw ParseError("taxonomy line " + std::to_string(line_no) +
                         ": first line must name the root");
      }
      root = std::string(view);
      continue;
    }
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos ||
        view.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError("taxonomy line " + std::to_string(line_no) +
                       ": expected parent<TAB>child");
    }
    edges.push_back({std::string(Trim(view.substr(0, tab))),
                     std::string(Trim(view.substr(tab + 1)))});
  }
  if (root.empty()) throw ParseError("taxonomy: no root line");
  return FromEdges(root, edges);
}

Taxonomy Taxonomy::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy file " + path.string());
  try {
    return Parse(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::optional<NodeId> Taxonomy::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId Taxonomy::id_of(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw InvalidArgument("label '" + std::string(label) +
                        "' is not in taxonomy rooted at '" + labels_[0] + "'");
}

std::vector<NodeId> Taxonomy::ancestors(NodeId id) const {
  std::vector<NodeId> out;
  out.reserve(depths_[id] + 1);
  for (NodeId cur = id; cur != kNoNode; cur = parents_[cur]) out.push_back(cur);
  return out;
}

NodeId Taxonomy::lowest_common_ancestor(NodeId a, NodeId b) const {
  while (depths_[a] > depths_[b]) a = parents_[a];
  while (depths_[b] > depths_[a]) b = parents_[b];
  while (a != b) {
    a = parents_[a];
    b = parents_[b];
  }
  return a;
}

double Taxonomy::distance(NodeId a, NodeId b) const {
  if (a == b) return 0.0;
  const int common = depths_[lowest_common_ancestor(a, b)] + 1;
  const int total = depths_[a] + 1 + depths_[b] + 1 - common;
  return std::log2(1.0 + static_cast<double>(total - common) / total);
}

void Taxonomy::Write(std::ostream& out) const {
  out << labels_[0] << '\n';
  std::vector<NodeId> order(labels_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<NodeId>(i);
  std::stable_sort(order.begin(), order.end(),
                   [this](NodeId a, NodeId b) { return depths_[a] < depths_[b]; });
  for (NodeId id : order) {
    if (id == root()) continue;
    out << labels_[parents_[id]] << '\t' << labels_[id] << '\n';
  }
}

std::vector<std::string> ancestors(const Taxonomy& t, std::string_view label) {
  std::vector<std::string> out;
  for (NodeId id : t.ancestors(t.id_of(label))) out.push_back(t.label(id));
  return out;
}

double semantic_distance(const Taxonomy& t, std::string_view a,
                         std::string_view b) {
  return t.distance(t.id_of(a), t.id_of(b));
}

ValueCounts::ValueCounts(std::span<const NodeId> values) : total_(values.size()) {
  std::vector<NodeId> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (NodeId v : sorted) {
    if (!entries_.empty() && entries_.back().first == v) {
      ++entries_.back().second;
    } else {
      entries_.emplace_back(v, 1);
    }
  }
}

double marginality(const Taxonomy& t, const ValueCounts& values,
                   NodeId candidate) {
  if (values.empty()) throw InvalidArgument("marginality: empty value set");
  double sum = 0.0;
  for (const auto& [value, count] : values.entries()) {
    if (value == candidate) continue;
    sum += static_cast<double>(count) * t.distance(candidate, value);
  }
  return sum;
}

double marginality(const Taxonomy& t, std::span<const NodeId> values,
                   NodeId candidate) {
  return marginality(t, ValueCounts(values), candidate);
}

std::vector<NodeId> spanned_subtree(const Taxonomy& t,
                                    const ValueCounts& sample) {
  std::vector<char> seen(t.size(), 0);
  std::vector<NodeId> out;
  for (const auto& entry : sample.entries()) {
    for (NodeId cur = entry.first; cur != kNoNode && !seen[cur];
         cur = t.parent(cur)) {
      seen[cur] = 1;
      out.push_back(cur);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int compare_scores(double a, double b) {
  // Equal sums of the same distances can differ in the last bits when the
  // terms are added in another order.
  const double tol = 1e-12 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
  if (a < b - tol) return -1;
  if (a > b + tol) return 1;
  return 0;
}

NodeId marginality_centroid(const Taxonomy& t, const ValueCounts& sample) {
  if (sample.empty()) throw InvalidArgument("centroid of an empty sample");
  NodeId best = kNoNode;
  double best_score = 0.0;
  for (NodeId candidate : spanned_subtree(t, sample)) {
    const double score = marginality(t, sample, candidate);
    const int cmp = best == kNoNode ? -1 : compare_scores(score, best_score);
    if (cmp < 0 || (cmp == 0 && t.label(candidate) < t.label(best))) {
      best_score = best == kNoNode ? score : std::min(score, best_score);
      best = candidate;
    }
  }
  return best;
}

NodeId marginality_centroid(const Taxonomy& t, std::span<const NodeId> sample) {
  return marginality_centroid(t, ValueCounts(sample));
}

MarginalityTable marginality_table(const Taxonomy& t,
                                   std::span<const NodeId> value_set) {
  MarginalityTable table;
  table.value_set.assign(value_set.begin(), value_set.end());
  const ValueCounts counts(value_set);
  table.scores.reserve(value_set.size());
  for (NodeId v : value_set) table.scores.push_back(marginality(t, counts, v));
  return table;
}

}  // namespace dpmicro
