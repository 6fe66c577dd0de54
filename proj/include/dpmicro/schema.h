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

#ifndef DPMICRO_SCHEMA_H_
#define DPMICRO_SCHEMA_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpmicro/taxonomy.h"

namespace dpmicro {

enum class AttributeKind { kNumeric, kCategorical };

std::string_view to_string(AttributeKind kind);

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;

  // Numeric domain. Either both bounds are set, or `bound_factor` is set and
  // the bounds are inferred from the data at load time as
  // [0, bound_factor * max].
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> bound_factor;
  // Integer-valued numeric attribute; histograms use one bin per value.
  bool discrete = false;

  std::string taxonomy_ref;
  std::shared_ptr<const Taxonomy> taxonomy;

  static AttributeSchema Numeric(std::string name, double lower, double upper,
                                 bool discrete = false);
  static AttributeSchema Categorical(std::string name,
                                     std::shared_ptr<const Taxonomy> taxonomy,
                                     std::string taxonomy_ref = {});

  bool is_numeric() const { return kind == AttributeKind::kNumeric; }
  bool has_bounds() const;

  // upper - lower for numeric attributes, 1 for categorical ones (the
  // semantic distance is bounded by 1).
  double sensitivity() const;

  // Throws InvalidArgument when the invariants of the kind do not hold.
  // `require_bounds` is false only while bound inference is still pending.
  void Validate(bool require_bounds = true) const;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<AttributeSchema> attributes);

  std::size_t size() const { return attributes_.size(); }
  const AttributeSchema& operator[](std::size_t i) const { return attributes_[i]; }
  AttributeSchema& mutable_attribute(std::size_t i) { return attributes_[i]; }
  std::span<const AttributeSchema> attributes() const { return attributes_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws
  bool all_numeric() const;

 private:
  std::vector<AttributeSchema> attributes_;
};

// Key-value schema text. One section per attribute, in column order:
//
//   [income]
//   kind = numeric
//   lower = 0
//   upper = 250000
//
//   [hours]
//   kind = numeric
//   bound_factor = 1.5
//   discrete = true
//
//   [country]
//   kind = categorical
//   taxonomy = country.tsv
//
// Taxonomy paths are resolved against `base_dir`; attributes naming the same
// file share one loaded tree.
Schema ParseSchema(std::istream& in, const std::filesystem::path& base_dir);
Schema LoadSchema(const std::filesystem::path& path);

}  // namespace dpmicro

#endif  // DPMICRO_SCHEMA_H_
